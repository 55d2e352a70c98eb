#include "rigidlab/gaf.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rigidlab/errors.hpp"
#include "rigidlab/numerics.hpp"
#include "rigidlab/parallel.hpp"
#include "rigidlab/polyroots.hpp"

namespace rigidlab {

using num::kNegInf;
using cd = std::complex<double>;

int truncation_degree(double alpha, double R, double tail_tol) {
  if (!(alpha > 0.0)) throw BadParams("truncation_degree: alpha > 0");
  if (!(R > 0.0)) throw BadParams("truncation_degree: R > 0");
  if (!(tail_tol > 0.0 && tail_tol < 1.0))
    throw BadParams("truncation_degree: tail_tol in (0,1)");
  double t = R * R;
  double log_t = std::log(t);
  // Terms log a_k = k log t - alpha lgamma(k+1). Sum far enough past the
  // maximizer that the geometric remainder is negligible next to tail_tol.
  std::vector<double> la;
  la.push_back(0.0);
  double max_la = 0.0;
  for (int k = 1;; ++k) {
    double v = la.back() + log_t - alpha * std::log(double(k));
    la.push_back(v);
    max_la = std::max(max_la, v);
    double ratio = t / std::pow(double(k + 1), alpha);
    if (ratio < 0.5 && v < max_la - 80.0 + std::log(tail_tol)) break;
    if (k > 50'000'000) throw BadParams("truncation_degree: series too long");
  }
  int n = int(la.size());
  // Suffix log-sums, with the analytic remainder beyond the computed range.
  double last_ratio = t / std::pow(double(n), alpha);
  double remainder = la.back() + log_t - alpha * std::log(double(n)) -
                     std::log1p(-std::min(last_ratio, 0.75));
  std::vector<double> suffix(std::size_t(n) + 1);
  suffix[std::size_t(n)] = remainder;
  for (int k = n - 1; k >= 0; --k)
    suffix[std::size_t(k)] = num::log_add(la[std::size_t(k)], suffix[std::size_t(k) + 1]);
  double prefix = kNegInf;
  for (int K = 0; K < n; ++K) {
    prefix = num::log_add(prefix, la[std::size_t(K)]);
    if (suffix[std::size_t(K) + 1] <= std::log(tail_tol) + prefix) return K;
  }
  return n - 1;
}

GafModel make_gaf_model(double alpha, double window_radius, double tail_tol) {
  GafModel m;
  m.alpha = alpha;
  m.window_radius = window_radius;
  m.tail_tol = tail_tol;
  m.truncation = truncation_degree(alpha, window_radius, tail_tol);
  return m;
}

int expected_rigidity_level(double alpha) {
  if (!(alpha > 0.0)) throw BadParams("expected_rigidity_level: alpha > 0");
  return int(std::floor(1.0 / alpha)) + 1;
}

double g_eval(double t, double beta) {
  if (t < 0.0) throw BadParams("g_eval: t >= 0");
  if (!(beta > 0.0)) throw BadParams("g_eval: beta > 0");
  if (t == 0.0) return 0.0;
  double log_t = std::log(t);
  long long k0 = (long long)std::floor(std::pow(t, 1.0 / beta));
  k0 = std::max(0LL, std::min(k0, (long long)4e15));
  double l0 = double(k0) * log_t - beta * std::lgamma(double(k0) + 1.0);
  const double drop = 45.0;
  double m = l0;
  double sum = 1.0, comp = 0.0;  // Kahan accumulation of exp(l - l0)
  auto add = [&](double l) {
    double v = std::exp(l - l0);
    double y = v - comp;
    double s2 = sum + y;
    comp = (s2 - sum) - y;
    sum = s2;
  };
  double l = l0;
  for (long long k = k0 + 1;; ++k) {
    l += log_t - beta * std::log(double(k));
    m = std::max(m, l);
    if (l < m - drop) break;
    add(l);
    if (k - k0 > 400'000'000LL) throw QuadratureFailure("g_eval: runaway series");
  }
  l = l0;
  for (long long k = k0; k >= 1; --k) {
    l -= log_t - beta * std::log(double(k));
    if (l < m - drop) break;
    add(l);
  }
  return l0 + std::log(sum);
}

double g_asymptotic_ratio(double t, double beta) {
  if (!(t >= 1.0)) throw BadParams("g_asymptotic_ratio: t >= 1");
  double log_g = g_eval(t, beta);
  double kstar = std::max(1.0, std::floor(std::pow(t, 1.0 / beta)));
  double log_a = -0.5 * std::log(t) + beta * std::pow(t, 1.0 / beta);
  return std::exp(log_g - log_a - 0.5 * std::log(kstar));
}

namespace {

// Windowed coefficient block of the truncated kernel series at fixed modulus
// product t = |z||w|: weights exp(lambda_j - M) for j in [j0, j0+w.size()),
// reusable across angular nodes.
struct AngularKernel {
  int j0 = 0;
  double M = kNegInf;
  std::vector<double> w;

  static AngularKernel build(double t, double alpha, int K) {
    AngularKernel ak;
    if (t <= 0.0) {
      ak.j0 = 0;
      ak.M = 0.0;
      ak.w = {1.0};
      return ak;
    }
    double log_t = std::log(t);
    auto lam = [&](int j) { return double(j) * log_t - alpha * std::lgamma(double(j) + 1.0); };
    int jc = int(std::clamp(std::floor(std::pow(t, 1.0 / alpha)), 0.0, double(K)));
    double m = lam(jc);
    const double drop = 45.0;
    int lo = jc, hi = jc;
    while (lo > 0 && lam(lo - 1) > m - drop) {
      --lo;
      m = std::max(m, lam(lo));
    }
    while (hi < K && lam(hi + 1) > m - drop) {
      ++hi;
      m = std::max(m, lam(hi));
    }
    ak.j0 = lo;
    ak.M = m;
    ak.w.resize(std::size_t(hi - lo) + 1);
    for (int j = lo; j <= hi; ++j) ak.w[std::size_t(j - lo)] = std::exp(lam(j) - m);
    return ak;
  }

  // log |sum_j w_j e^{i j u}| + M
  double log_abs(double u) const {
    cd rot{std::cos(u), std::sin(u)};
    cd ph{std::cos(u * double(j0)), std::sin(u * double(j0))};
    cd acc{0.0, 0.0};
    for (double wi : w) {
      acc += wi * ph;
      ph *= rot;
    }
    double a = std::abs(acc);
    return a > 0.0 ? M + std::log(a) : kNegInf;
  }

  double log_diag() const {
    double s = 0.0;
    for (double wi : w) s += wi;
    return M + std::log(s);
  }
};

double clamp_theta2(double log_theta2) {
  if (log_theta2 >= 0.0) return 1.0;
  return std::exp(log_theta2);
}

}  // namespace

cd gaf_kernel(const GafModel& model, cd z, cd w) {
  cd p = z * std::conj(w);
  double t = std::abs(p);
  double u = std::arg(p);
  AngularKernel ak = AngularKernel::build(t, model.alpha, model.truncation);
  cd rot{std::cos(u), std::sin(u)};
  cd ph{std::cos(u * double(ak.j0)), std::sin(u * double(ak.j0))};
  cd acc{0.0, 0.0};
  for (double wi : ak.w) {
    acc += wi * ph;
    ph *= rot;
  }
  return acc * std::exp(ak.M);
}

double theta_abs2(const GafModel& model, cd z, cd w) {
  cd p = z * std::conj(w);
  double t = std::abs(p);
  double u = std::arg(p);
  AngularKernel cross = AngularKernel::build(t, model.alpha, model.truncation);
  AngularKernel dz = AngularKernel::build(std::norm(z), model.alpha, model.truncation);
  AngularKernel dw = AngularKernel::build(std::norm(w), model.alpha, model.truncation);
  double la = cross.log_abs(u);
  if (la == kNegInf) return 0.0;
  return clamp_theta2(2.0 * la - dz.log_diag() - dw.log_diag());
}

double psi_alpha(const GafModel& model, cd z, cd w) {
  return num::dilog_unit(theta_abs2(model, z, w));
}

PointConfiguration sample_zero_set(const GafModel& model, Rng& rng,
                                   std::uint64_t seed_tag) {
  const int K = model.truncation;
  const double R = model.window_radius;
  PointConfiguration cfg;
  cfg.window_radius = R;
  cfg.seed = seed_tag;
  {
    std::ostringstream tag;
    tag << "gaf(alpha=" << model.alpha << ",R=" << R << ",K=" << K << ")";
    cfg.model_tag = tag.str();
  }
  // Coefficients xi_k/(k!)^{alpha/2} in log-magnitude/phase form, with the
  // variable rescaled to y = z/R and the largest magnitude normalized to 1.
  std::vector<double> logmag(std::size_t(K) + 1);
  std::vector<double> phase(std::size_t(K) + 1);
  double log_R = std::log(R);
  double m = kNegInf;
  for (int k = 0; k <= K; ++k) {
    cd xi = rng.complex_normal();
    double a = std::abs(xi);
    logmag[std::size_t(k)] = (a > 0.0 ? std::log(a) : -745.0) -
                             0.5 * model.alpha * std::lgamma(double(k) + 1.0) +
                             double(k) * log_R;
    phase[std::size_t(k)] = std::arg(xi);
    m = std::max(m, logmag[std::size_t(k)]);
  }
  if (K == 0) return cfg;  // constant polynomial, no zeros
  std::vector<cd> coeffs(std::size_t(K) + 1);
  for (int k = 0; k <= K; ++k) {
    double mag = std::exp(logmag[std::size_t(k)] - m);
    coeffs[std::size_t(k)] = cd{mag * std::cos(phase[std::size_t(k)]),
                                mag * std::sin(phase[std::size_t(k)])};
  }
  AberthOptions opt;
  std::vector<cd> roots = aberth_roots(coeffs, opt, seed_tag);
  for (cd y : roots) {
    cd z = R * y;
    double az = std::abs(z);
    if (std::abs(az - R) <= 1e-9) {
      ++cfg.boundary_excluded;
      continue;
    }
    if (az >= R) continue;
    if (poly_residual(coeffs, y) > 1e-8)
      throw RootFindingDiverged("sample_zero_set: residual above 1e-8 inside window",
                                seed_tag);
    cfg.points.push_back(z);
  }
  std::sort(cfg.points.begin(), cfg.points.end(), [](cd a, cd b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return cfg;
}

namespace {

// Mean and variance of the index distribution with weights proportional to
// t^j/(j!)^alpha, j <= K. The expected zero count of the truncated GAF in
// B(0, sqrt(t)) is exactly the mean; the first intensity at radius r is
// Var/(pi r^2).
void index_moments(double t, double alpha, int K, double& mean, double& var) {
  if (t <= 0.0) {
    mean = 0.0;
    var = 0.0;
    return;
  }
  AngularKernel ak = AngularKernel::build(t, alpha, K);
  double s0 = 0.0, s1 = 0.0, s2 = 0.0;
  for (std::size_t i = 0; i < ak.w.size(); ++i) {
    double j = double(ak.j0) + double(i);
    s0 += ak.w[i];
    s1 += ak.w[i] * j;
    s2 += ak.w[i] * j * j;
  }
  mean = s1 / s0;
  var = std::max(0.0, s2 / s0 - mean * mean);
}

}  // namespace

double expected_count(const GafModel& model, double r) {
  double mean, var;
  index_moments(r * r, model.alpha, model.truncation, mean, var);
  return mean;
}

double first_intensity(const GafModel& model, double r) {
  double rr = std::max(r, 1e-9);
  double mean, var;
  index_moments(rr * rr, model.alpha, model.truncation, mean, var);
  return var / (num::kPi * rr * rr);
}

double variance_exact(const GafModel& model, const RadialTestFunction& fn) {
  if (fn.kind() != ProfileKind::MollifiedLog && fn.kind() != ProfileKind::MomentWeighted)
    throw BadParams("variance_exact: needs a C^2 profile (MollifiedLog/MomentWeighted)");
  const int k = fn.moment_order();
  const double A = fn.inner_plateau();
  const double B = fn.outer_radius();
  const int K = model.truncation;
  const double alpha = model.alpha;
  auto breaks = fn.breakpoints();

  num::QuadOptions ang_opt;
  ang_opt.rel_tol = 1e-8;
  ang_opt.abs_tol = 1e-13;
  num::QuadOptions rad_opt;
  rad_opt.rel_tol = 1e-7;
  rad_opt.abs_tol = 0.0;

  auto angular = [&](double r, double s, double ldiag_r, double ldiag_s) {
    AngularKernel cross = AngularKernel::build(r * s, alpha, K);
    auto psi_u = [&](double u) {
      double la = cross.log_abs(u);
      if (la == kNegInf) return 0.0;
      double th2 = clamp_theta2(2.0 * la - ldiag_r - ldiag_s);
      double psi = num::dilog_unit(th2);
      return (k == 0) ? psi : std::cos(double(k) * u) * psi;
    };
    return 2.0 * num::integrate(psi_u, 0.0, num::kPi, ang_opt);
  };

  auto outer = [&](double r) {
    double gr = fn.delta_weight(r);
    if (gr == 0.0) return 0.0;
    double ldiag_r = AngularKernel::build(r * r, alpha, K).log_diag();
    auto inner = [&](double s) {
      double gs = fn.delta_weight(s);
      if (gs == 0.0) return 0.0;
      double ldiag_s = AngularKernel::build(s * s, alpha, K).log_diag();
      return std::pow(s, double(k) + 1.0) * gs * angular(r, s, ldiag_r, ldiag_s);
    };
    double in = num::integrate_with_breaks(inner, A, B, breaks, rad_opt);
    return std::pow(r, double(k) + 1.0) * gr * in;
  };
  double I = num::integrate_with_breaks(outer, A, B, breaks, rad_opt);
  return model.c_var * 2.0 * num::kPi * I;
}

double variance_bound(const GafModel& model, const RadialTestFunction& fn, double L) {
  if (!(L > 0.0)) throw BadParams("variance_bound: L > 0");
  const double alpha = model.alpha;
  const double A = fn.inner_plateau();
  const double B = fn.outer_radius();
  const int k = fn.moment_order();
  auto amp = [&](double r) {
    return std::pow(r, double(k)) * std::abs(fn.delta_weight(r));
  };
  const double p = 1.0 - 1.0 / (2.0 * alpha);
  const double scale = std::sqrt(alpha) * std::pow(L, 1.0 / alpha);
  auto to_w = [&](double r, double s) {
    return scale * (std::pow(s, 1.0 / alpha) - std::pow(r, 1.0 / alpha));
  };
  auto breaks = fn.breakpoints();

  num::QuadOptions opt;
  opt.rel_tol = 1e-9;
  opt.abs_tol = 0.0;

  auto outer = [&](double r) {
    double ar = amp(r);
    if (ar == 0.0) return 0.0;
    double w_lo = std::max(to_w(r, A), -8.5);
    double w_hi = std::min(to_w(r, B), 8.5);
    if (w_hi <= w_lo) return 0.0;
    double u0 = std::pow(r, 1.0 / alpha);
    auto inner = [&](double w) {
      double v = u0 + w / scale;
      if (v <= 0.0) return 0.0;
      double s = std::pow(v, alpha);
      double as = amp(s);
      if (as == 0.0) return 0.0;
      double jac = alpha * std::pow(v, alpha - 1.0) / scale;
      return std::exp(-w * w) * as * std::pow(s, p) * jac;
    };
    std::vector<double> wb;
    for (double b : breaks) {
      double wv = to_w(r, b);
      if (wv > w_lo && wv < w_hi) wb.push_back(wv);
    }
    double in = num::integrate_with_breaks(inner, w_lo, w_hi, wb, opt);
    return ar * std::pow(r, p) * in;
  };
  double I = num::integrate_with_breaks(outer, A, B, breaks, opt);
  return std::pow(L, -1.0 / alpha) * I;
}

CvarCalibration calibrate_c_var(const GafModel& base, const RadialTestFunction& fn,
                                const std::vector<double>& scales, int replicas,
                                std::uint64_t master_seed) {
  if (replicas < 2) throw BadParams("calibrate_c_var: replicas >= 2");
  CvarCalibration cal;
  for (double L : scales) {
    RadialTestFunction fl = fn.scaled(L);
    GafModel m = make_gaf_model(base.alpha, fl.outer_radius(), base.tail_tol);
    std::vector<cd> stats(static_cast<std::size_t>(replicas));
    parallel_for(replicas, [&](int i) {
      Rng rng(derive_seed(master_seed, std::uint64_t(i)));
      PointConfiguration cfg = sample_zero_set(m, rng, derive_seed(master_seed, std::uint64_t(i)));
      cd t{0.0, 0.0};
      for (cd z : cfg.points) t += statistic_value(fl, z);
      stats[std::size_t(i)] = t;
    });
    cd mean{0.0, 0.0};
    for (cd t : stats) mean += t;
    mean /= double(replicas);
    std::vector<double> sq(stats.size());
    for (std::size_t i = 0; i < stats.size(); ++i) sq[i] = std::norm(stats[i] - mean);
    num::MeanVar mv = num::MeanVar::from(sq);
    double var = mv.mean * double(replicas) / double(replicas - 1);
    GafModel m1 = m;
    m1.c_var = 1.0;
    cal.L.push_back(L);
    cal.mc_var.push_back(var);
    cal.mc_se.push_back(mv.se_mean);
    cal.raw_exact.push_back(variance_exact(m1, fl));
  }
  double num_ = 0.0, den = 0.0;
  for (std::size_t i = 0; i < cal.L.size(); ++i) {
    num_ += cal.raw_exact[i] * cal.mc_var[i];
    den += cal.raw_exact[i] * cal.raw_exact[i];
  }
  cal.c_var = den > 0.0 ? num_ / den : 1.0;
  return cal;
}

}  // namespace rigidlab
