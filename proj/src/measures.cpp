#include "rigidlab/measures.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rigidlab/errors.hpp"
#include "rigidlab/numerics.hpp"

namespace rigidlab {

using num::kNegInf;

RadialMeasure RadialMeasure::gaussian_power(double a, double b, double c) {
  if (a < 0.0 || b <= 0.0 || c <= 0.0)
    throw BadParams("gaussian_power: need a >= 0, b > 0, c > 0");
  RadialMeasure m;
  m.family_ = Family::GaussianPower;
  m.a_ = a;
  m.b_ = b;
  m.c_ = c;
  m.x_lo_ = 0.0;
  m.x_hi_ = num::kInf;
  // m_0 = (2/c) b^{-(a+2)/c} Gamma((a+2)/c)
  double s0 = (a + 2.0) / c;
  m.log_norm_ = std::log(2.0 / c) - s0 * std::log(b) + std::lgamma(s0);
  return m;
}

RadialMeasure RadialMeasure::disk_uniform(double radius) {
  if (radius <= 0.0) throw BadParams("disk_uniform: radius must be positive");
  RadialMeasure m;
  m.family_ = Family::DiskUniform;
  m.radius_ = radius;
  m.x_lo_ = 0.0;
  m.x_hi_ = radius * radius;
  m.log_norm_ = 0.0;  // weight below is already normalized
  return m;
}

RadialMeasure RadialMeasure::tabulated(std::vector<double> x_grid,
                                       std::vector<double> weights) {
  if (x_grid.size() != weights.size() || x_grid.size() < 2)
    throw BadParams("tabulated: need >= 2 matched grid points");
  for (std::size_t i = 0; i + 1 < x_grid.size(); ++i)
    if (!(x_grid[i + 1] > x_grid[i]))
      throw BadParams("tabulated: grid must be strictly increasing");
  for (double w : weights)
    if (!(w > 0.0)) throw BadParams("tabulated: weights must be strictly positive");
  if (x_grid.front() < 0.0) throw BadParams("tabulated: grid must be >= 0");
  RadialMeasure m;
  m.family_ = Family::Tabulated;
  m.tab_x_ = std::move(x_grid);
  m.tab_logw_.resize(weights.size());
  for (std::size_t i = 0; i < weights.size(); ++i)
    m.tab_logw_[i] = std::log(weights[i]);
  m.x_lo_ = m.tab_x_.front();
  m.x_hi_ = m.tab_x_.back();
  m.log_norm_ = 0.0;
  m.log_norm_ = m.log_moment_quadrature(0);
  return m;
}

bool RadialMeasure::compact_support() const { return std::isfinite(x_hi_); }

double RadialMeasure::log_weight(double x) const {
  if (x < x_lo_ || x > x_hi_) return kNegInf;
  switch (family_) {
    case Family::GaussianPower: {
      if (x == 0.0) return a_ == 0.0 ? -log_norm_ : kNegInf;
      return 0.5 * a_ * std::log(x) - b_ * std::pow(x, 0.5 * c_) - log_norm_;
    }
    case Family::DiskUniform:
      return -2.0 * std::log(radius_);
    case Family::Tabulated: {
      auto it = std::upper_bound(tab_x_.begin(), tab_x_.end(), x);
      std::size_t hi = std::min<std::size_t>(
          std::max<std::ptrdiff_t>(1, it - tab_x_.begin()), tab_x_.size() - 1);
      std::size_t lo = hi - 1;
      double t = (x - tab_x_[lo]) / (tab_x_[hi] - tab_x_[lo]);
      return tab_logw_[lo] + t * (tab_logw_[hi] - tab_logw_[lo]) - log_norm_;
    }
  }
  return kNegInf;
}

double RadialMeasure::log_moment_quadrature(int j) const {
  if (j < 0) throw BadParams("log_moment_quadrature: j >= 0");
  auto log_f = [this, j](double x) {
    double lw = log_weight(x);
    if (lw == kNegInf) return kNegInf;
    if (j == 0) return lw;
    if (x <= 0.0) return kNegInf;
    return double(j) * std::log(x) + lw;
  };
  num::QuadOptions opt;
  opt.rel_tol = 1e-13;
  return num::integrate_log_mode(log_f, x_lo_, x_hi_, opt);
}

std::string RadialMeasure::describe() const {
  std::ostringstream os;
  switch (family_) {
    case Family::GaussianPower:
      os << "gaussian_power(a=" << a_ << ",b=" << b_ << ",c=" << c_ << ")";
      break;
    case Family::DiskUniform:
      os << "disk_uniform(radius=" << radius_ << ")";
      break;
    case Family::Tabulated:
      os << "tabulated(n=" << tab_x_.size() << ",x=[" << x_lo_ << "," << x_hi_ << "])";
      break;
  }
  return os.str();
}

RadialMeasure RadialMeasure::with_sampling_tables(int j_max) const {
  if (j_max < 0) throw BadParams("with_sampling_tables: j_max >= 0");
  RadialMeasure copy = *this;
  if (family_ != Family::Tabulated) return copy;  // closed-form families sample directly
  const int res = 4096;
  auto tables = std::make_shared<std::vector<std::vector<double>>>();
  tables->reserve(std::size_t(j_max) + 1);
  for (int j = 0; j <= j_max; ++j) {
    double log_cj = -log_moment_quadrature(j);
    // Cumulative trapezoid of the Gamma_j density on a fine grid, then
    // the quantile table by inversion.
    const int fine = 16384;
    std::vector<double> xs(fine + 1), cdf(fine + 1, 0.0);
    for (int i = 0; i <= fine; ++i) {
      xs[i] = x_lo_ + (x_hi_ - x_lo_) * double(i) / double(fine);
    }
    auto dens = [&](double x) {
      double lw = log_weight(x);
      if (lw == kNegInf) return 0.0;
      double lx = (j == 0) ? 0.0 : double(j) * std::log(std::max(x, 1e-300));
      return std::exp(log_cj + lx + lw);
    };
    double prev = dens(xs[0]);
    for (int i = 1; i <= fine; ++i) {
      double cur = dens(xs[i]);
      cdf[i] = cdf[i - 1] + 0.5 * (prev + cur) * (xs[i] - xs[i - 1]);
      prev = cur;
    }
    double total = cdf[fine];
    std::vector<double> quantiles(res + 1);
    std::size_t pos = 0;
    for (int q = 0; q <= res; ++q) {
      double target = total * double(q) / double(res);
      while (pos + 1 < cdf.size() && cdf[pos + 1] < target) ++pos;
      if (pos + 1 >= cdf.size()) {
        quantiles[q] = xs.back();
        continue;
      }
      double seg = cdf[pos + 1] - cdf[pos];
      double t = seg > 0.0 ? (target - cdf[pos]) / seg : 0.0;
      quantiles[q] = xs[pos] + t * (xs[pos + 1] - xs[pos]);
    }
    tables->push_back(std::move(quantiles));
  }
  copy.inv_cdf_ = std::move(tables);
  copy.inv_cdf_resolution_ = res;
  return copy;
}

bool RadialMeasure::has_sampling_table(int j) const {
  return inv_cdf_ && j >= 0 && std::size_t(j) < inv_cdf_->size();
}

MomentLadder compute_moments(const RadialMeasure& measure, int J) {
  if (J < 1) throw BadParams("compute_moments: J >= 1");
  MomentLadder l;
  l.J = J;
  // nu_J needs mu up to J+3, hence log moments up to J+4.
  std::vector<double> log_m(std::size_t(J) + 5);
  for (int j = 0; j <= J + 4; ++j) log_m[j] = measure.log_moment_quadrature(j);
  l.log_c.resize(std::size_t(J) + 1);
  for (int j = 0; j <= J; ++j) l.log_c[j] = -log_m[j];
  l.mu_ext.resize(std::size_t(J) + 4);
  for (int j = 0; j <= J + 3; ++j) l.mu_ext[j] = std::exp(log_m[j + 1] - log_m[j]);
  l.mu.assign(l.mu_ext.begin(), l.mu_ext.begin() + J + 1);
  l.sigma.resize(std::size_t(J) + 1);
  l.nu.resize(std::size_t(J) + 1);
  for (int j = 0; j <= J; ++j) {
    double m0 = l.mu_ext[j], m1 = l.mu_ext[j + 1], m2 = l.mu_ext[j + 2],
           m3 = l.mu_ext[j + 3];
    l.sigma[j] = m1 / m0 - 1.0;
    // Fourth standardized central moment of Gamma_j from the raw moment
    // products E Gamma_j^k = mu_j ... mu_{j+k-1}.
    l.nu[j] = (m1 * m2 * m3) / (m0 * m0 * m0) - 4.0 * (m1 * m2) / (m0 * m0) +
              6.0 * m1 / m0 - 3.0;
  }
  return l;
}

GammaVariate::GammaVariate(const RadialMeasure& measure, int j)
    : measure_(&measure), j_(j) {
  if (j < 0) throw BadParams("GammaVariate: j >= 0");
  switch (measure.family()) {
    case RadialMeasure::Family::GaussianPower: {
      double s = (2.0 * j + measure.param_a() + 2.0) / measure.param_c();
      log_cj_ = -(std::log(2.0 / measure.param_c()) - s * std::log(measure.param_b()) +
                  std::lgamma(s));
      break;
    }
    case RadialMeasure::Family::DiskUniform: {
      double x_max = measure.disk_radius() * measure.disk_radius();
      log_cj_ = std::log(double(j) + 1.0) - (j + 1.0) * std::log(x_max);
      break;
    }
    case RadialMeasure::Family::Tabulated:
      log_cj_ = -measure.log_moment_quadrature(j);
      break;
  }
}

double GammaVariate::cdf(double x) const {
  if (x <= 0.0) return 0.0;  // no mass at or below zero for these families
  switch (measure_->family()) {
    case RadialMeasure::Family::GaussianPower: {
      double s = (2.0 * j_ + measure_->param_a() + 2.0) / measure_->param_c();
      double t = measure_->param_b() * std::pow(x, 0.5 * measure_->param_c());
      return num::regularized_gamma_p(s, t);
    }
    case RadialMeasure::Family::DiskUniform: {
      double x_max = measure_->x_hi();
      if (x >= x_max) return 1.0;
      return std::pow(x / x_max, double(j_) + 1.0);
    }
    case RadialMeasure::Family::Tabulated: {
      if (x >= measure_->x_hi()) return 1.0;
      if (x <= measure_->x_lo()) return 0.0;
      auto dens_log = [&](double t) {
        double lw = measure_->log_weight(t);
        if (lw == kNegInf) return kNegInf;
        double lx = (j_ == 0) ? 0.0 : double(j_) * std::log(std::max(t, 1e-300));
        return log_cj_ + lx + lw;
      };
      num::QuadOptions opt;
      opt.rel_tol = 1e-12;
      opt.abs_tol = 1e-14;
      double v = num::integrate(
          [&](double t) {
            double l = dens_log(t);
            return l == kNegInf ? 0.0 : std::exp(l);
          },
          measure_->x_lo(), x, opt);
      return std::clamp(v, 0.0, 1.0);
    }
  }
  return 0.0;
}

double GammaVariate::truncated_mean(double t) const {
  if (t <= 0.0) return 0.0;
  switch (measure_->family()) {
    case RadialMeasure::Family::GaussianPower: {
      double a = measure_->param_a(), b = measure_->param_b(), c = measure_->param_c();
      double s = (2.0 * j_ + a + 2.0) / c;
      // E Gamma_j = mu_j = b^{-2/c} Gamma(s + 2/c)/Gamma(s)
      double mu = std::exp(-(2.0 / c) * std::log(b) + std::lgamma(s + 2.0 / c) -
                           std::lgamma(s));
      return mu * num::regularized_gamma_p(s + 2.0 / c, b * std::pow(t, 0.5 * c));
    }
    case RadialMeasure::Family::DiskUniform: {
      double x_max = measure_->x_hi();
      double jj = double(j_);
      double mu = (jj + 1.0) / (jj + 2.0) * x_max;
      if (t >= x_max) return mu;
      return mu * std::pow(t / x_max, jj + 2.0);
    }
    case RadialMeasure::Family::Tabulated: {
      double hi = std::min(t, measure_->x_hi());
      num::QuadOptions opt;
      opt.rel_tol = 1e-11;
      opt.abs_tol = 1e-14;
      return num::integrate(
          [&](double x) {
            double lw = measure_->log_weight(x);
            if (lw == kNegInf) return 0.0;
            double lx = (j_ == 0) ? 0.0 : double(j_) * std::log(std::max(x, 1e-300));
            return x * std::exp(log_cj_ + lx + lw);
          },
          measure_->x_lo(), hi, opt);
    }
  }
  return 0.0;
}

double GammaVariate::mean() const { return truncated_mean(num::kInf); }

double GammaVariate::sample(Rng& rng) const {
  switch (measure_->family()) {
    case RadialMeasure::Family::GaussianPower: {
      double s = (2.0 * j_ + measure_->param_a() + 2.0) / measure_->param_c();
      double g = rng.gamma(s);
      return std::pow(g / measure_->param_b(), 2.0 / measure_->param_c());
    }
    case RadialMeasure::Family::DiskUniform: {
      double u = rng.uniform();
      while (u == 0.0) u = rng.uniform();
      return measure_->x_hi() * std::pow(u, 1.0 / (double(j_) + 1.0));
    }
    case RadialMeasure::Family::Tabulated: {
      if (!measure_->has_sampling_table(j_))
        throw TableNotBuilt("sample_gamma: tabulated measure lacks inverse-CDF table for j=" +
                            std::to_string(j_));
      const auto& table = (*measure_->inv_cdf_)[std::size_t(j_)];
      double u = rng.uniform() * double(measure_->inv_cdf_resolution_);
      std::size_t lo = std::min<std::size_t>(std::size_t(u), table.size() - 2);
      double t = u - double(lo);
      return table[lo] + t * (table[lo + 1] - table[lo]);
    }
  }
  return 0.0;
}

double GammaVariate::expect_radial(const std::function<double(double)>& f,
                                   std::span<const double> break_radii) const {
  // E[f(sqrt(Gamma_j))]; density mode located in log domain, then plain
  // adaptive quadrature on the rescaled density.
  auto dens_log = [&](double x) {
    double lw = measure_->log_weight(x);
    if (lw == kNegInf) return kNegInf;
    double lx = (j_ == 0) ? 0.0 : double(j_) * std::log(std::max(x, 1e-300));
    return log_cj_ + lx + lw;
  };
  // Effective window: walk out from the mode until 70 nats below.
  double x_mode;
  {
    double best = kNegInf;
    x_mode = std::max(measure_->x_lo(), 1e-12);
    double lo = measure_->x_lo(), hi = measure_->x_hi();
    if (!std::isfinite(hi)) {
      hi = std::max(4.0 * (j_ + 1.0), 8.0);
      while (dens_log(hi) > dens_log(hi / 2.0)) hi *= 2.0;
      hi *= 4.0;
    }
    const int n = 1025;
    for (int i = 1; i < n; ++i) {
      double x = lo + (hi - lo) * double(i) / double(n);
      double v = dens_log(x);
      if (v > best) {
        best = v;
        x_mode = x;
      }
    }
  }
  double peak = dens_log(x_mode);
  double x_left = x_mode, x_right = x_mode;
  double step = std::max(x_mode * 0.05, 1e-6);
  while (x_left > measure_->x_lo() && dens_log(x_left) > peak - 70.0) {
    x_left = std::max(measure_->x_lo(), x_left - step);
    step *= 1.6;
  }
  step = std::max(x_mode * 0.05, 1e-6);
  while (x_right < measure_->x_hi() && dens_log(x_right) > peak - 70.0) {
    x_right = std::min(measure_->x_hi(), x_right + step);
    step *= 1.6;
    if (!std::isfinite(x_right)) break;
  }
  std::vector<double> breaks;
  for (double r : break_radii) {
    double x = r * r;
    if (x > x_left && x < x_right) breaks.push_back(x);
  }
  num::QuadOptions opt;
  opt.rel_tol = 1e-11;
  opt.abs_tol = 1e-15;
  return num::integrate_with_breaks(
      [&](double x) {
        double l = dens_log(x);
        if (l == kNegInf) return 0.0;
        return f(std::sqrt(x)) * std::exp(l);
      },
      x_left, x_right, breaks, opt);
}

double gamma_cdf(const GammaVariate& v, double x) { return v.cdf(x); }

double sample_gamma(const GammaVariate& v, Rng& rng) { return v.sample(rng); }

std::string to_string(RigidityVerdict v) {
  switch (v) {
    case RigidityVerdict::NotRigidNumbers: return "NotRigidNumbers";
    case RigidityVerdict::RigidNumbers: return "RigidNumbers";
    case RigidityVerdict::RigidLevel1: return "RigidLevel1";
    case RigidityVerdict::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

namespace {

SeriesDiagnostic diagnose_series(std::span<const double> terms) {
  SeriesDiagnostic d;
  int J = int(terms.size()) - 1;
  std::vector<double> partial(terms.size());
  double run = 0.0;
  for (std::size_t j = 0; j < terms.size(); ++j) {
    run += std::max(terms[j], 0.0);
    partial[j] = run;
  }
  d.partial_sum = run;
  // log-log regression over the last half, skipping non-positive terms.
  std::vector<double> lx, ly;
  for (int j = std::max(1, J / 2); j <= J; ++j) {
    if (terms[j] > 0.0) {
      lx.push_back(std::log(double(j)));
      ly.push_back(std::log(terms[j]));
    }
  }
  if (lx.size() >= 4) d.tail_exponent = num::fit_line(lx, ly).slope;
  int q = std::max(1, (J + 1) / 4);
  double inc = partial[std::size_t(J)] - partial[std::size_t(J - q)];
  d.plateau = run > 0.0 && inc < 1e-6 * run;
  d.summable = d.plateau || (lx.size() >= 4 && d.tail_exponent <= -1.1);
  return d;
}

}  // namespace

Classification classify_rigidity(const MomentLadder& ladder, bool abs_continuous,
                                 int j_min) {
  Classification c;
  c.abs_continuous = abs_continuous;
  if (ladder.J < 1 || ladder.mu.empty())
    throw InsufficientLadder("classify_rigidity: empty ladder");
  if (ladder.J < j_min) {
    c.verdict = RigidityVerdict::Inconclusive;
    c.note = "insufficient ladder: J=" + std::to_string(ladder.J) + " < j_min=" +
             std::to_string(j_min);
    return c;
  }
  c.sigma = diagnose_series(ladder.sigma);
  c.nu = diagnose_series(ladder.nu);

  // Predicate sum_{j<=k} mu_j^4 nu_j = o(mu_k^4), evaluated in log domain.
  {
    std::vector<double> lk, lr;
    double log_sum = kNegInf;
    for (int k = 1; k <= ladder.J; ++k) {
      double term = ladder.nu[k] > 0.0
                        ? 4.0 * std::log(ladder.mu[k]) + std::log(ladder.nu[k])
                        : kNegInf;
      log_sum = num::log_add(log_sum, term);
      if (k >= ladder.J / 2 && log_sum != kNegInf && ladder.mu[k] > 0.0) {
        lk.push_back(std::log(double(k)));
        lr.push_back(log_sum - 4.0 * std::log(ladder.mu[k]));
      }
    }
    if (lk.size() >= 4) {
      c.predicate_slope = num::fit_line(lk, lr).slope;
      c.predicate_holds = c.predicate_slope < -0.2;
    }
  }

  // Smallest a with sum mu_j^{-a} summable.
  for (int a = 1; a <= 8 && c.level1_a < 0; ++a) {
    std::vector<double> terms(ladder.mu.size());
    for (std::size_t j = 0; j < ladder.mu.size(); ++j)
      terms[j] = std::pow(ladder.mu[j], -double(a));
    if (diagnose_series(terms).summable) c.level1_a = a;
  }

  if (c.sigma.summable) {
    c.verdict = RigidityVerdict::NotRigidNumbers;
    c.note = "sum sigma_j summable";
    return c;
  }
  if (c.nu.summable && c.predicate_holds) {
    if (abs_continuous && c.level1_a >= 1) {
      c.verdict = RigidityVerdict::RigidLevel1;
      c.note = "nu summable, partial-sum predicate holds, abs. continuous, a=" +
               std::to_string(c.level1_a);
    } else {
      c.verdict = RigidityVerdict::RigidNumbers;
      c.note = "nu summable and partial-sum predicate holds";
    }
    return c;
  }
  c.verdict = RigidityVerdict::Inconclusive;
  c.note = "no hypothesis set satisfied numerically";
  return c;
}

}  // namespace rigidlab
