#include "rigidlab/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "rigidlab/errors.hpp"

namespace rigidlab::num {

double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  if (a < b) std::swap(a, b);
  return a + std::log1p(std::exp(b - a));
}

double log_sum_exp(std::span<const double> log_terms) {
  double m = kNegInf;
  for (double v : log_terms) m = std::max(m, v);
  if (m == kNegInf) return kNegInf;
  double s = 0.0, c = 0.0;
  for (double v : log_terms) {
    double t = std::exp(v - m);
    double y = t - c;
    double u = s + y;
    c = (u - s) - y;
    s = u;
  }
  return m + std::log(s);
}

double kahan_sum(std::span<const double> xs) {
  double s = 0.0, c = 0.0;
  for (double x : xs) {
    double y = x - c;
    double t = s + y;
    c = (t - s) - y;
    s = t;
  }
  return s;
}

MeanVar MeanVar::from(std::span<const double> xs) {
  MeanVar r;
  r.n = xs.size();
  if (r.n == 0) return r;
  double s = kahan_sum(xs);
  r.mean = s / double(r.n);
  if (r.n < 2) return r;
  double m2 = 0.0, m4 = 0.0, c2 = 0.0, c4 = 0.0;
  for (double x : xs) {
    double d = x - r.mean;
    double d2 = d * d;
    double y = d2 - c2, t = m2 + y;
    c2 = (t - m2) - y;
    m2 = t;
    double y4 = d2 * d2 - c4, t4 = m4 + y4;
    c4 = (t4 - m4) - y4;
    m4 = t4;
  }
  double n = double(r.n);
  m2 /= n;
  m4 /= n;
  r.var = m2 * n / (n - 1.0);
  r.se_mean = std::sqrt(r.var / n);
  // Var(s^2) ~ (m4 - (n-3)/(n-1) m2^2)/n
  double v = (m4 - (n - 3.0) / (n - 1.0) * m2 * m2) / n;
  r.se_var = std::sqrt(std::max(v, 0.0));
  return r;
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  std::size_t n = x.size();
  if (n != y.size() || n < 2) throw BadParams("fit_line: need >= 2 matched points");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= double(n);
  my /= double(n);
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw BadParams("fit_line: degenerate abscissae");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  return f;
}

namespace {

// G7/K15 nodes on [0,1] half-interval (positive abscissae).
constexpr double kKx[8] = {
    0.0,
    0.2077849550078985,
    0.4058451513773972,
    0.5860872354676911,
    0.7415311855993945,
    0.8648644233597691,
    0.9491079123427585,
    0.9914553711208126,
};
constexpr double kKw[8] = {
    0.2094821410847278, 0.2044329400752989, 0.1903505780647854,
    0.1690047266392679, 0.1406532597155259, 0.1047900103222502,
    0.0630920926299785, 0.0229353220105292,
};
// Gauss-7 weights for nodes kKx[0], kKx[2], kKx[4], kKx[6].
constexpr double kGw[4] = {
    0.4179591836734694,
    0.3818300505051189,
    0.2797053914892767,
    0.1294849661688697,
};

struct GkResult {
  double integral;
  double err;
};

GkResult gk15(const std::function<double(double)>& f, double a, double b) {
  double h = 0.5 * (b - a);
  double m = 0.5 * (a + b);
  double fc = f(m);
  double ik = kKw[0] * fc;
  double ig = kGw[0] * fc;
  for (int i = 1; i < 8; ++i) {
    double fp = f(m + h * kKx[i]);
    double fm = f(m - h * kKx[i]);
    ik += kKw[i] * (fp + fm);
    if (i % 2 == 0) ig += kGw[i / 2] * (fp + fm);
  }
  ik *= h;
  ig *= h;
  return {ik, std::abs(ik - ig)};
}

double adapt(const std::function<double(double)>& f, double a, double b,
             double tol, int depth, const QuadOptions& opt, double whole_scale) {
  GkResult r = gk15(f, a, b);
  double local_tol = std::max({tol, opt.abs_tol, opt.rel_tol * whole_scale * 1e-2});
  if (r.err <= local_tol || depth >= opt.max_depth) {
    if (depth >= opt.max_depth && r.err > 1e3 * std::max(local_tol, 1e-300))
      throw QuadratureFailure("adaptive quadrature: max depth with error " +
                              std::to_string(r.err));
    return r.integral;
  }
  double m = 0.5 * (a + b);
  return adapt(f, a, m, 0.5 * tol, depth + 1, opt, whole_scale) +
         adapt(f, m, b, 0.5 * tol, depth + 1, opt, whole_scale);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 QuadOptions opt) {
  if (a == b) return 0.0;
  GkResult first = gk15(f, a, b);
  double scale = std::max(std::abs(first.integral), 1e-300);
  double tol = std::max(opt.abs_tol, opt.rel_tol * scale);
  return adapt(f, a, b, tol, 0, opt, scale);
}

double integrate_with_breaks(const std::function<double(double)>& f, double a,
                             double b, std::span<const double> breaks,
                             QuadOptions opt) {
  std::vector<double> pts;
  pts.push_back(a);
  for (double t : breaks)
    if (t > a && t < b) pts.push_back(t);
  pts.push_back(b);
  std::sort(pts.begin(), pts.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i)
    total += integrate(f, pts[i], pts[i + 1], opt);
  return total;
}

double integrate_log(const std::function<double(double)>& log_f, double a,
                     double b, QuadOptions opt) {
  if (!(b > a)) return kNegInf;
  // Locate the scale on a scan grid; the grid max only needs to be within a
  // few nats of the true max for exp(log_f - M) to stay representable.
  const int n_scan = 257;
  double m = kNegInf;
  for (int i = 0; i < n_scan; ++i) {
    double x = a + (b - a) * double(i) / double(n_scan - 1);
    m = std::max(m, log_f(x));
  }
  if (m == kNegInf) return kNegInf;
  auto g = [&](double x) {
    double v = log_f(x);
    return v == kNegInf ? 0.0 : std::exp(v - m);
  };
  double integral = integrate(g, a, b, opt);
  if (integral <= 0.0) return kNegInf;
  return m + std::log(integral);
}

double integrate_log_mode(const std::function<double(double)>& log_f,
                          double x_lo, double x_hi, QuadOptions opt) {
  if (x_lo < 0.0) throw BadParams("integrate_log_mode: negative lower limit");
  // Work in u = log x. Integrand there is h(u) = log_f(e^u) + u.
  auto h = [&](double u) {
    double x = std::exp(u);
    double v = log_f(x);
    return v == kNegInf ? kNegInf : v + u;
  };
  double u_min_cap = (x_lo > 0.0) ? std::log(x_lo) : -745.0;
  double u_max_cap = std::isfinite(x_hi) ? std::log(x_hi) : kInf;

  // Coarse mode scan over a wide initial window, expanding upward until the
  // integrand decays (or the cap is hit).
  double u_best = 0.0, h_best = kNegInf;
  double lo = std::max(u_min_cap, -60.0);
  double hi = std::isfinite(u_max_cap) ? u_max_cap : 16.0;
  if (hi <= lo) hi = lo + 1.0;
  for (int expand = 0;; ++expand) {
    int n = 513;
    for (int i = 0; i < n; ++i) {
      double u = lo + (hi - lo) * double(i) / double(n - 1);
      double v = h(u);
      if (v > h_best) {
        h_best = v;
        u_best = u;
      }
    }
    if (h_best == kNegInf) throw DivergentMoment("integrand identically -inf");
    bool top_done = std::isfinite(u_max_cap) ? true : (h(hi) < h_best - 80.0);
    if (top_done) break;
    if (expand > 40) throw DivergentMoment("integrand does not decay at +inf");
    lo = u_best - 2.0;
    hi = hi + std::max(8.0, hi - lo);
    if (std::isfinite(u_max_cap)) hi = std::min(hi, u_max_cap);
  }

  // Golden-section refinement of the mode (unimodal in practice; harmless
  // otherwise since we only need a scale).
  {
    double a = std::max(u_min_cap, u_best - 1.0);
    double b = std::min(u_max_cap, u_best + 1.0);
    const double gr = 0.6180339887498949;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    for (int it = 0; it < 60 && (b - a) > 1e-12; ++it) {
      if (h(c) < h(d)) {
        a = c;
        c = d;
        d = a + gr * (b - a);
      } else {
        b = d;
        d = c;
        c = b - gr * (b - a);
      }
    }
    double u_mid = 0.5 * (a + b);
    double v = h(u_mid);
    if (v > h_best) {
      h_best = v;
      u_best = u_mid;
    }
  }

  // Expand integration window until the integrand is 70 nats below the mode.
  const double drop = 70.0;
  double uL = u_best, uR = u_best;
  double step = 0.25;
  while (uL > u_min_cap && h(uL) > h_best - drop) {
    uL = std::max(u_min_cap, uL - step);
    step *= 1.5;
  }
  step = 0.25;
  int guard = 0;
  while ((!std::isfinite(u_max_cap) || uR < u_max_cap) && h(uR) > h_best - drop) {
    uR = uR + step;
    if (std::isfinite(u_max_cap)) uR = std::min(uR, u_max_cap);
    step *= 1.5;
    if (++guard > 200) throw DivergentMoment("integrand does not decay at +inf");
  }
  if (std::isfinite(u_max_cap)) uR = std::min(uR, u_max_cap);
  return integrate_log(h, uL, uR, opt);
}

namespace {

double gamma_p_series(double s, double x) {
  double ap = s;
  double sum = 1.0 / s;
  double del = sum;
  for (int n = 0; n < 10000; ++n) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * 1e-16)
      return sum * std::exp(-x + s * std::log(x) - std::lgamma(s));
  }
  throw QuadratureFailure("incomplete gamma series failed to converge");
}

double gamma_q_cf(double s, double x) {
  // Modified Lentz continued fraction for Q(s,x).
  const double tiny = 1e-300;
  double b = x + 1.0 - s;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 10000; ++i) {
    double an = -double(i) * (double(i) - s);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16)
      return h * std::exp(-x + s * std::log(x) - std::lgamma(s));
  }
  throw QuadratureFailure("incomplete gamma continued fraction failed");
}

}  // namespace

double regularized_gamma_p(double s, double x) {
  if (s <= 0.0) throw BadParams("regularized_gamma_p: s must be positive");
  if (x <= 0.0) return 0.0;
  if (x < s + 1.0) return gamma_p_series(s, x);
  return 1.0 - gamma_q_cf(s, x);
}

double regularized_gamma_q(double s, double x) {
  if (s <= 0.0) throw BadParams("regularized_gamma_q: s must be positive");
  if (x <= 0.0) return 1.0;
  if (x < s + 1.0) return 1.0 - gamma_p_series(s, x);
  return gamma_q_cf(s, x);
}

double dilog_unit(double x) {
  if (x < 0.0 || x > 1.0) throw BadParams("dilog_unit: x outside [0,1]");
  const double pi2_6 = kPi * kPi / 6.0;
  if (x == 1.0) return pi2_6;
  if (x == 0.0) return 0.0;
  if (x > 0.5) return pi2_6 - std::log(x) * std::log1p(-x) - dilog_unit(1.0 - x);
  double term = x, sum = x;
  for (int j = 2; j < 200; ++j) {
    term *= x;
    double add = term / (double(j) * double(j));
    sum += add;
    if (add < 1e-18 * sum) break;
  }
  return sum;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double ks_two_sample_pvalue(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw BadParams("ks: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  double na = double(a.size()), nb = double(b.size());
  while (i < a.size() && j < b.size()) {
    if (a[i] <= b[j])
      ++i;
    else
      ++j;
    d = std::max(d, std::abs(double(i) / na - double(j) / nb));
  }
  double ne = std::sqrt(na * nb / (na + nb));
  double lambda = (ne + 0.12 + 0.11 / ne) * d;
  // Q_KS(lambda) = 2 sum (-1)^{k-1} exp(-2 k^2 lambda^2)
  double p = 0.0, sign = 1.0;
  for (int k = 1; k <= 100; ++k) {
    double t = 2.0 * sign * std::exp(-2.0 * double(k) * double(k) * lambda * lambda);
    p += t;
    if (std::abs(t) < 1e-12) break;
    sign = -sign;
  }
  return std::clamp(p, 0.0, 1.0);
}

double chi_square_pvalue(double stat, double df) {
  if (stat <= 0.0) return 1.0;
  return regularized_gamma_q(0.5 * df, 0.5 * stat);
}

}  // namespace rigidlab::num
