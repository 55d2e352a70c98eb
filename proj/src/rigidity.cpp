#include "rigidlab/rigidity.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "rigidlab/errors.hpp"
#include "rigidlab/numerics.hpp"
#include "rigidlab/parallel.hpp"

namespace rigidlab {

using cd = std::complex<double>;

namespace {

double dpp_expected_statistic(const RadialDppModel& model, const RadialTestFunction& fn) {
  if (fn.moment_order() >= 1) return 0.0;  // rotation invariance
  RadialStatistic st = as_radial_statistic(fn);
  double total = 0.0;
  int idle = 0;
  for (int j = 0; j <= model.rank; ++j) {
    GammaVariate g(model.measure, j);
    if (std::isfinite(st.outer_radius)) {
      double p = g.cdf(st.outer_radius * st.outer_radius);
      if (p < 1e-16) {
        if (++idle >= 3) break;
        continue;
      }
      idle = 0;
    }
    total += g.expect_radial(st.value, st.break_radii);
  }
  return total;
}

// Largest window radius whose truncation stays root-findable.
double gaf_window_cap(double alpha, double tail_tol, int max_degree = 3500) {
  double lo = 0.5, hi = 1.0;
  while (truncation_degree(alpha, hi, tail_tol) < max_degree && hi < 1e5) {
    lo = hi;
    hi *= 2.0;
  }
  for (int it = 0; it < 60; ++it) {
    double mid = 0.5 * (lo + hi);
    (truncation_degree(alpha, mid, tail_tol) < max_degree ? lo : hi) = mid;
  }
  return lo;
}

}  // namespace

ProcessHandle make_process(const RadialDppModel& model) {
  ProcessHandle h;
  h.name = "dpp";
  h.profile = ProfileKind::PiecewiseLog;
  h.support_limit =
      model.measure.compact_support() ? std::sqrt(model.measure.x_hi()) : num::kInf;
  h.max_window = num::kInf;  // sample_full returns complete configurations
  RadialDppModel m = model;
  h.variance = [m](const RadialTestFunction& fn) {
    if (fn.moment_order() != 0)
      throw BadParams("dpp variance evaluator: radial statistics only (k = 0)");
    RadialStatistic st = as_radial_statistic(fn);
    return covariance_exact(m, st, st);
  };
  h.sampler = [m](double, std::uint64_t seed) {
    Rng rng(seed);
    return sample_full(m, rng, seed);
  };
  h.expected_statistic = [m](const RadialTestFunction& fn) {
    return dpp_expected_statistic(m, fn);
  };
  return h;
}

ProcessHandle make_process_infinite(const RadialDppModel& model, int j_max) {
  ProcessHandle h = make_process(model);
  h.name = "dpp_infinite";
  RadialMeasure measure = model.measure;
  h.variance = [measure, j_max](const RadialTestFunction& fn) {
    if (fn.moment_order() != 0)
      throw BadParams("dpp variance evaluator: radial statistics only (k = 0)");
    return variance_radial_sum(measure, j_max, as_radial_statistic(fn));
  };
  return h;
}

ProcessHandle make_process(const GafModel& model) {
  ProcessHandle h;
  h.name = "gaf";
  h.profile = ProfileKind::MollifiedLog;
  h.support_limit = num::kInf;
  h.max_window = gaf_window_cap(model.alpha, model.tail_tol);
  GafModel base = model;
  h.variance = [base](const RadialTestFunction& fn) {
    GafModel m = make_gaf_model(base.alpha, fn.outer_radius(), base.tail_tol);
    m.c_var = base.c_var;
    return variance_exact(m, fn);
  };
  h.sampler = [base](double window, std::uint64_t seed) {
    GafModel m = make_gaf_model(base.alpha, window, base.tail_tol);
    m.c_var = base.c_var;
    Rng rng(seed);
    return sample_zero_set(m, rng, seed);
  };
  h.expected_statistic = [base](const RadialTestFunction& fn) {
    if (fn.moment_order() >= 1) return 0.0;  // rotation invariance
    GafModel m = make_gaf_model(base.alpha, fn.outer_radius(), base.tail_tol);
    num::QuadOptions opt;
    opt.rel_tol = 1e-9;
    // E[T] = int phi(r) rho(r) 2 pi r dr over the support.
    return num::integrate_with_breaks(
        [&](double r) {
          return fn.value(r) * first_intensity(m, r) * 2.0 * num::kPi * r;
        },
        0.0, fn.outer_radius(), fn.breakpoints(), opt);
  };
  return h;
}

ProcessHandle make_process(const PerturbedLatticeModel& model) {
  ProcessHandle h;
  h.name = "lattice";
  h.profile = ProfileKind::LatticeBump;
  h.support_limit = num::kInf;
  h.max_window = num::kInf;
  PerturbedLatticeModel base = model;
  h.variance = [base](const RadialTestFunction& fn) {
    RadialTestFunction unit = RadialTestFunction::lattice_bump(fn.eps());
    return variance_linear_statistic(base, unit, fn.scale());
  };
  h.sampler = [base](double window, std::uint64_t seed) {
    PerturbedLatticeModel m = base;
    m.M = std::max(base.M, int(std::ceil(window)) + 1);
    Rng rng(seed);
    return sample(m, rng, seed);
  };
  h.expected_statistic = [base](const RadialTestFunction& fn) {
    if (fn.moment_order() >= 1)
      throw BadParams("lattice recovery supports k = 0 only");
    RadialTestFunction unit = RadialTestFunction::lattice_bump(fn.eps());
    return expected_linear_statistic(base, unit, fn.scale());
  };
  return h;
}

namespace {

// Test function for the scan/recovery: plateau of the scaled profile must
// cover the disk radius r0.
RadialTestFunction build_statistic(ProfileKind kind, int k, double r0, double eps,
                                   double L) {
  switch (kind) {
    case ProfileKind::PiecewiseLog: {
      RadialTestFunction f = RadialTestFunction::piecewise_log(r0, eps);
      return f.scaled(L);
    }
    case ProfileKind::MollifiedLog:
    case ProfileKind::MomentWeighted: {
      RadialTestFunction f = RadialTestFunction::moment_weighted_any(k, 0.5 * r0, eps);
      return f.scaled(L);
    }
    case ProfileKind::LatticeBump: {
      RadialTestFunction f = RadialTestFunction::lattice_bump(eps);
      return f.scaled(L);
    }
  }
  throw BadParams("build_statistic: unknown profile kind");
}

}  // namespace

Certificate certificate_scan(const ProcessHandle& process, int k, double r0,
                             double delta, const CertificateGrid& grid) {
  if (!(r0 > 0.0)) throw BadParams("certificate_scan: r0 > 0");
  Certificate best;
  best.variance = num::kInf;
  for (double eps : grid.eps_values) {
    for (double L : grid.L_values) {
      RadialTestFunction fn = build_statistic(process.profile, k, r0, eps, L);
      if (fn.inner_plateau() < r0) continue;              // must be == 1 on D
      if (fn.outer_radius() > process.support_limit) continue;
      if (fn.outer_radius() > process.max_window) continue;
      if (delta == num::kInf) return {true, eps, L, 0.0, best.evaluated + 1};
      double var = process.variance(fn);
      ++best.evaluated;
      if (var < best.variance) {
        best.variance = var;
        best.eps = eps;
        best.L = L;
      }
      if (var <= delta) return {true, eps, L, var, best.evaluated};
    }
  }
  best.achieved = false;
  return best;
}

RecoveryReport recover_inside_moments(const ProcessHandle& process, double r0,
                                      int k_max, double epsilon, double L,
                                      int replicas, std::uint64_t master_seed) {
  if (!(r0 > 0.0) || k_max < 0 || replicas < 1)
    throw BadParams("recover_inside_moments: bad arguments");
  RecoveryReport rep;
  rep.replicas = replicas;
  rep.k_max = k_max;
  rep.r0 = r0;
  rep.epsilon = epsilon;
  rep.L = L;

  std::vector<RadialTestFunction> fns;
  double window = 0.0;
  for (int k = 0; k <= k_max; ++k) {
    ProfileKind kind = (k == 0) ? process.profile : ProfileKind::MomentWeighted;
    RadialTestFunction fn = build_statistic(kind, k, r0, epsilon, L);
    if (fn.inner_plateau() < r0)
      throw BadParams("recover_inside_moments: plateau does not cover the disk");
    window = std::max(window, fn.outer_radius());
    fns.push_back(fn);
  }
  if (window > process.max_window)
    throw WindowTooSmall("recover_inside_moments: required window " +
                         std::to_string(window) + " exceeds the sampler limit");
  std::vector<double> expected(fns.size());
  for (std::size_t k = 0; k < fns.size(); ++k)
    expected[k] = process.expected_statistic(fns[k]);

  rep.truth.assign(fns.size(), std::vector<cd>(std::size_t(replicas)));
  rep.estimate.assign(fns.size(), std::vector<cd>(std::size_t(replicas)));
  rep.manifold_dimension.assign(std::size_t(replicas), 0);

  parallel_for(replicas, [&](int i) {
    PointConfiguration cfg =
        process.sampler(window, derive_seed(master_seed, std::uint64_t(i)));
    int n_inside = 0;
    for (std::size_t k = 0; k < fns.size(); ++k) {
      cd truth{0.0, 0.0};
      cd t_out{0.0, 0.0};
      for (cd z : cfg.points) {
        if (std::abs(z) < r0) {
          cd zk{1.0, 0.0};
          for (int p = 0; p < int(k); ++p) zk *= z;
          truth += zk;
        } else {
          t_out += statistic_value(fns[k], z);
        }
      }
      if (k == 0) n_inside = int(std::lround(truth.real()));
      rep.truth[k][std::size_t(i)] = truth;
      rep.estimate[k][std::size_t(i)] = cd{expected[k], 0.0} - t_out;
    }
    rep.manifold_dimension[std::size_t(i)] = 2 * std::max(0, n_inside - k_max);
  });

  int successes = 0;
  rep.residual_variance.assign(fns.size(), 0.0);
  rep.residual_mean_abs.assign(fns.size(), 0.0);
  rep.constraint_residual.assign(fns.size(), 0.0);
  for (std::size_t k = 0; k < fns.size(); ++k) {
    cd mean{0.0, 0.0};
    for (int i = 0; i < replicas; ++i) {
      cd r = rep.estimate[k][std::size_t(i)] - rep.truth[k][std::size_t(i)];
      mean += r;
      rep.constraint_residual[k] = std::max(rep.constraint_residual[k], std::abs(r));
      if (k == 0 &&
          std::lround(rep.estimate[0][std::size_t(i)].real()) ==
              std::lround(rep.truth[0][std::size_t(i)].real()))
        ++successes;
    }
    mean /= double(replicas);
    rep.residual_mean_abs[k] = std::abs(mean);
    double s = 0.0;
    for (int i = 0; i < replicas; ++i) {
      cd r = rep.estimate[k][std::size_t(i)] - rep.truth[k][std::size_t(i)];
      s += std::norm(r - mean);
    }
    rep.residual_variance[k] = replicas > 1 ? s / double(replicas - 1) : 0.0;
  }
  rep.success_rate = double(successes) / double(replicas);
  return rep;
}

std::string Rational::str() const {
  return std::to_string(num) + "/" + std::to_string(den);
}

namespace {

Rational make_rational(long long num, long long den) {
  long long g = std::gcd(num, den);
  if (g == 0) return {0, 1};
  return {num / g, den / g};
}

}  // namespace

AppendixReport verify_appendix_examples() {
  AppendixReport rep;

  // Finite example on {1,2} x {1,2,3}, uniform. X(i,j) = j; Y levels pair the
  // cells so each Y value sees exactly two X values.
  {
    struct Cell {
      int i, j, y;
    };
    auto y_of = [](int i, int j) {
      if (i == 1 && (j == 2 || j == 3)) return 1;
      if (i == 2 && (j == 1 || j == 3)) return 2;
      return 3;  // (1,1) and (2,2)
    };
    std::vector<Cell> cells;
    for (int i = 1; i <= 2; ++i)
      for (int j = 1; j <= 3; ++j) cells.push_back({i, j, y_of(i, j)});
    for (int y = 1; y <= 3; ++y) {
      std::set<int> xs;
      for (const Cell& c : cells)
        if (c.y == y) xs.insert(c.j);
      rep.conditional_support_sizes[std::size_t(y - 1)] = int(xs.size());
    }
    // sigma(X) events are unions of X-levels, sigma(Y) of Y-levels; collect
    // both families as atom bitmasks and intersect.
    std::set<unsigned> from_x, from_y;
    for (unsigned mask = 0; mask < 8; ++mask) {
      unsigned ev_x = 0, ev_y = 0;
      for (std::size_t c = 0; c < cells.size(); ++c) {
        if (mask & (1u << unsigned(cells[c].j - 1))) ev_x |= (1u << c);
        if (mask & (1u << unsigned(cells[c].y - 1))) ev_y |= (1u << c);
      }
      from_x.insert(ev_x);
      from_y.insert(ev_y);
    }
    std::set<unsigned> common;
    for (unsigned e : from_x)
      if (from_y.count(e)) common.insert(e);
    rep.common_sigma_trivial = (common == std::set<unsigned>{0u, 0x3Fu});
  }

  // 2-dependent sequence on sites -4..4: X_n = 1 iff xi_n = 1 or
  // xi_{n-1} = xi_{n+1} = 1, windows enumerated exactly over xi in {0,1}^9.
  {
    const int sites = 9;     // site s = idx - 4
    const int n_lo = 1, n_hi = 7;  // X defined for idx 1..7 (n = -3..3)
    std::array<long long, 4> pair_total{};
    std::array<long long, 4> pair_ones{};
    std::map<unsigned, std::pair<long long, long long>> groups;  // outside -> (total, ones)
    for (unsigned xi = 0; xi < (1u << sites); ++xi) {
      auto bit = [&](int idx) { return int((xi >> unsigned(idx)) & 1u); };
      int X[sites];
      for (int idx = n_lo; idx <= n_hi; ++idx)
        X[idx] = (bit(idx) == 1 || (bit(idx - 1) == 1 && bit(idx + 1) == 1)) ? 1 : 0;
      int x0 = X[4];
      int key_pair = 2 * X[5] + X[3];  // (X_1, X_{-1})
      pair_total[std::size_t(key_pair)] += 1;
      pair_ones[std::size_t(key_pair)] += x0;
      unsigned outside = 0;
      int shift = 0;
      for (int idx = n_lo; idx <= n_hi; ++idx) {
        if (idx == 4) continue;
        outside |= (unsigned(X[idx]) << unsigned(shift++));
      }
      auto& g = groups[outside];
      g.first += 1;
      g.second += x0;
    }
    for (int p = 0; p < 4; ++p) {
      rep.pair_probability[std::size_t(p)] = make_rational(pair_total[std::size_t(p)], 1 << sites);
      rep.p_x0_one_given_pair[std::size_t(p)] =
          make_rational(pair_ones[std::size_t(p)], pair_total[std::size_t(p)]);
    }
    rep.forcing_case_deterministic = (pair_ones[3] == pair_total[3]);
    rep.other_cases_nondegenerate = true;
    for (int p = 0; p < 3; ++p) {
      if (!(pair_ones[std::size_t(p)] > 0 && pair_ones[std::size_t(p)] < pair_total[std::size_t(p)]))
        rep.other_cases_nondegenerate = false;
    }
    // Group-wise: conditioning on the whole observed outside window, X_0 is
    // deterministic exactly when X_1 = X_{-1} = 1.
    rep.groupwise_dichotomy = true;
    for (const auto& [outside, counts] : groups) {
      bool pair11 = ((outside >> 2) & 1u) == 1u && ((outside >> 3) & 1u) == 1u;
      // outside bit layout: idx 1,2,3 (shift 0..2) then idx 5,6,7 (shift 3..5)
      bool x_m1 = ((outside >> 2) & 1u) == 1u;  // idx 3 = site -1
      bool x_p1 = ((outside >> 3) & 1u) == 1u;  // idx 5 = site +1
      pair11 = x_m1 && x_p1;
      bool degenerate = (counts.second == 0 || counts.second == counts.first);
      if (pair11 && counts.second != counts.first) rep.groupwise_dichotomy = false;
      if (!pair11 && degenerate) rep.groupwise_dichotomy = false;
    }
  }

  rep.ok = rep.common_sigma_trivial &&
           rep.conditional_support_sizes == std::array<int, 3>{2, 2, 2} &&
           rep.forcing_case_deterministic && rep.other_cases_nondegenerate &&
           rep.groupwise_dichotomy;
  return rep;
}

}  // namespace rigidlab
