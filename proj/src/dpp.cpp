#include "rigidlab/dpp.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "rigidlab/errors.hpp"
#include "rigidlab/numerics.hpp"

namespace rigidlab {

using num::kNegInf;
using cd = std::complex<double>;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;

RadialDppModel make_radial_dpp(const RadialMeasure& measure, int n) {
  if (n < 0) throw BadParams("make_radial_dpp: rank n >= 0");
  RadialDppModel m{measure, n, compute_moments(measure, std::max(1, n))};
  return m;
}

std::vector<double> sample_moduli(const RadialDppModel& model, Rng& rng) {
  std::vector<double> radii;
  radii.reserve(std::size_t(model.rank) + 1);
  for (int j = 0; j <= model.rank; ++j) {
    GammaVariate g(model.measure, j);
    radii.push_back(std::sqrt(g.sample(rng)));
  }
  std::sort(radii.begin(), radii.end());
  return radii;
}

namespace {

// Normalized basis vector w(z)/|w(z)| with w_j(z) = sqrt(c_j) z^j, assembled
// in log domain so c_j |z|^{2j} never overflows.
VectorXcd unit_basis_vector(std::span<const double> log_c, double r, double theta) {
  int d = int(log_c.size());
  Eigen::VectorXd lam(d);
  double log_r = r > 0.0 ? std::log(r) : -745.0;
  double m = kNegInf;
  for (int j = 0; j < d; ++j) {
    lam[j] = 0.5 * log_c[std::size_t(j)] + double(j) * log_r;
    m = std::max(m, lam[j]);
  }
  VectorXcd v(d);
  double norm2 = 0.0;
  for (int j = 0; j < d; ++j) {
    double a = std::exp(lam[j] - m);
    v[j] = cd{a * std::cos(double(j) * theta), a * std::sin(double(j) * theta)};
    norm2 += a * a;
  }
  v /= std::sqrt(norm2);
  return v;
}

// Sequential sampler of the projection DPP onto the column space of the
// orthonormal matrix B (in the sqrt(c_j) z^j basis). Proposals come from the
// full-rank intensity mixture (uniform index j, modulus^2 ~ Gamma_j, uniform
// angle), accepted with probability |P_B w(z)|^2 / |w(z)|^2.
std::vector<cd> sample_projection(const RadialMeasure& measure,
                                  std::span<const double> log_c, MatrixXcd B,
                                  Rng& rng) {
  int d = int(log_c.size());
  int m = int(B.cols());
  std::vector<GammaVariate> gammas;
  gammas.reserve(std::size_t(d));
  for (int j = 0; j < d; ++j) gammas.emplace_back(measure, j);
  std::vector<cd> points;
  points.reserve(std::size_t(m));
  for (int step = 0; step < m; ++step) {
    int remaining = m - step;
    long trials = 0;
    for (;;) {
      if (++trials > 2'000'000)
        throw ConditioningFailure("sample_projection: acceptance stalled");
      int j = int(rng.uniform_int(std::uint64_t(d)));
      double x = gammas[std::size_t(j)].sample(rng);
      double theta = rng.uniform(0.0, 2.0 * num::kPi);
      double r = std::sqrt(x);
      VectorXcd w = unit_basis_vector(log_c, r, theta);
      VectorXcd t = B.leftCols(remaining).adjoint() * w;
      double acc = t.squaredNorm();
      if (rng.uniform() >= acc) continue;
      points.push_back(cd{r * std::cos(theta), r * std::sin(theta)});
      // Shrink the subspace: remove the direction of w inside range(B).
      VectorXcd q = B.leftCols(remaining) * t;
      double qn = q.norm();
      if (qn < 1e-6) throw ConditioningFailure("sample_projection: degenerate update");
      q /= qn;
      // Deflate and re-orthonormalize by modified Gram-Schmidt (two passes),
      // dropping the single collapsed column.
      MatrixXcd C = B.leftCols(remaining);
      C -= q * (q.adjoint() * C);
      int kept = 0;
      for (int col = 0; col < remaining && kept < remaining - 1; ++col) {
        VectorXcd v = C.col(col);
        for (int pass = 0; pass < 2; ++pass)
          for (int l = 0; l < kept; ++l) v -= B.col(l) * (B.col(l).adjoint() * v);
        double nv = v.norm();
        if (nv * nv < 1e-12) continue;
        B.col(kept) = v / nv;
        ++kept;
      }
      if (kept != remaining - 1)
        throw ConditioningFailure("sample_projection: deflation lost rank (kept=" +
                                  std::to_string(kept) + ")");
      break;
    }
  }
  return points;
}

}  // namespace

PointConfiguration sample_full(const RadialDppModel& model, Rng& rng,
                               std::uint64_t seed_tag) {
  const int n = model.rank;
  if (n > 256) throw BadParams("sample_full: rank capped at 256");
  std::span<const double> log_c(model.ladder.log_c.data(), std::size_t(n) + 1);
  MatrixXcd B = MatrixXcd::Identity(n + 1, n + 1);
  PointConfiguration cfg;
  cfg.seed = seed_tag;
  {
    std::ostringstream tag;
    tag << "dpp(" << model.measure.describe() << ",n=" << n << ")";
    cfg.model_tag = tag.str();
  }
  cfg.points = sample_projection(model.measure, log_c, std::move(B), rng);
  // Fixed viewport radius: the 1 - 1e-6 quantile of the outermost modulus.
  GammaVariate gn(model.measure, n);
  double lo = 0.0, hi = std::isfinite(model.measure.x_hi()) ? model.measure.x_hi()
                                                            : 16.0 * (n + 2.0);
  while (gn.cdf(hi) < 1.0 - 1e-6) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    (gn.cdf(mid) < 1.0 - 1e-6 ? lo : hi) = mid;
  }
  cfg.window_radius = std::sqrt(hi);
  std::sort(cfg.points.begin(), cfg.points.end(), [](cd a, cd b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return cfg;
}

cd dpp_kernel(const RadialDppModel& model, cd z, cd w) {
  cd p = z * std::conj(w);
  double t = std::abs(p);
  double u = std::arg(p);
  double log_t = t > 0.0 ? std::log(t) : kNegInf;
  int d = model.rank + 1;
  double m = kNegInf;
  std::vector<double> lam(static_cast<std::size_t>(d));
  for (int j = 0; j < d; ++j) {
    lam[std::size_t(j)] =
        model.ladder.log_c[std::size_t(j)] + (j == 0 ? 0.0 : double(j) * log_t);
    m = std::max(m, lam[std::size_t(j)]);
  }
  cd acc{0.0, 0.0};
  for (int j = 0; j < d; ++j) {
    double a = std::exp(lam[std::size_t(j)] - m);
    acc += cd{a * std::cos(double(j) * u), a * std::sin(double(j) * u)};
  }
  return acc * std::exp(m);
}

PalmOverlapEstimate palm_overlap(const RadialDppModel& model, int n, int replicas,
                                 Rng& rng) {
  if (replicas < 100) throw BadParams("palm_overlap: replicas >= 100");
  if (n < 0) throw BadParams("palm_overlap: n >= 0");
  std::vector<GammaVariate> gammas;
  std::vector<double> log_mu;
  gammas.reserve(std::size_t(n) + 1);
  for (int j = 1; j <= n; ++j) {
    gammas.emplace_back(model.measure, j);
    log_mu.push_back(std::log(gammas.back().mean()));
  }
  std::vector<double> vals(static_cast<std::size_t>(replicas));
  for (int i = 0; i < replicas; ++i) {
    double log_theta = 0.0;
    for (std::size_t j = 0; j < gammas.size(); ++j) {
      double g = gammas[j].sample(rng);
      log_theta += std::log(g) - log_mu[j];
    }
    vals[std::size_t(i)] = log_theta >= 0.0 ? 1.0 : std::exp(log_theta);
  }
  num::MeanVar mv = num::MeanVar::from(vals);
  return {n, replicas, mv.mean, mv.se_mean};
}

RadialStatistic as_radial_statistic(const RadialTestFunction& fn) {
  RadialStatistic s;
  s.value = [fn](double r) { return fn.value(r); };
  s.break_radii = fn.breakpoints();
  s.outer_radius = fn.outer_radius();
  return s;
}

RadialStatistic indicator_statistic(double radius) {
  RadialStatistic s;
  s.value = [radius](double r) { return r < radius ? 1.0 : 0.0; };
  s.break_radii = {radius};
  s.outer_radius = radius;
  return s;
}

double covariance_exact(const RadialDppModel& model, const RadialStatistic& phi,
                        const RadialStatistic& psi) {
  std::vector<double> breaks = phi.break_radii;
  breaks.insert(breaks.end(), psi.break_radii.begin(), psi.break_radii.end());
  std::sort(breaks.begin(), breaks.end());
  double outer = std::min(phi.outer_radius, psi.outer_radius);
  double total = 0.0;
  int idle = 0;
  for (int j = 0; j <= model.rank; ++j) {
    GammaVariate g(model.measure, j);
    if (std::isfinite(outer)) {
      double p = g.cdf(outer * outer);
      if (p < 1e-16) {
        if (++idle >= 3) break;  // terms only shrink past the bulk
        continue;
      }
      idle = 0;
    }
    double e_fg = g.expect_radial(
        [&](double r) { return phi.value(r) * psi.value(r); }, breaks);
    double e_f = g.expect_radial(phi.value, breaks);
    double e_g = g.expect_radial(psi.value, breaks);
    total += e_fg - e_f * e_g;
  }
  return total;
}

double variance_radial_sum(const RadialMeasure& measure, int j_max,
                           const RadialStatistic& st) {
  double total = 0.0;
  int idle = 0;
  for (int j = 0; j <= j_max; ++j) {
    GammaVariate g(measure, j);
    if (std::isfinite(st.outer_radius)) {
      double p = g.cdf(st.outer_radius * st.outer_radius);
      if (p < 1e-16) {
        if (++idle >= 3) break;
        continue;
      }
      idle = 0;
    }
    double e_f = g.expect_radial(st.value, st.break_radii);
    double e_f2 = g.expect_radial(
        [&](double r) {
          double v = st.value(r);
          return v * v;
        },
        st.break_radii);
    total += std::max(0.0, e_f2 - e_f * e_f);
  }
  return total;
}

double covariance_quadrature(const RadialDppModel& model, const RadialStatistic& phi,
                             const RadialStatistic& psi) {
  // 0.5 integral (phi(z)-phi(w))(psi(z)-psi(w)) |K|^2 dgamma dgamma with the
  // angular average Q(x,y) = sum_j c_j^2 (xy)^j done in log domain.
  const auto& log_c = model.ladder.log_c;
  const int d = model.rank + 1;
  auto log_Q = [&](double x, double y) {
    double lt = (x > 0.0 && y > 0.0) ? std::log(x) + std::log(y) : kNegInf;
    double m = kNegInf;
    for (int j = 0; j < d; ++j)
      m = std::max(m, 2.0 * log_c[std::size_t(j)] + (j == 0 ? 0.0 : double(j) * lt));
    double s = 0.0;
    for (int j = 0; j < d; ++j)
      s += std::exp(2.0 * log_c[std::size_t(j)] + (j == 0 ? 0.0 : double(j) * lt) - m);
    return m + std::log(s);
  };
  double outer = std::min(phi.outer_radius, psi.outer_radius);
  double x_hi = model.measure.x_hi();
  if (!std::isfinite(x_hi)) {
    GammaVariate g(model.measure, model.rank);
    x_hi = 4.0;
    while (g.cdf(x_hi) < 1.0 - 1e-12) x_hi *= 2.0;
  }
  if (std::isfinite(outer)) {
    // beyond the common support both differences vanish only if BOTH points
    // are outside; keep the full range but cap the grid where the measure is.
  }
  std::vector<double> xb;
  for (double r : phi.break_radii) xb.push_back(r * r);
  for (double r : psi.break_radii) xb.push_back(r * r);
  std::sort(xb.begin(), xb.end());
  num::QuadOptions opt;
  opt.rel_tol = 1e-8;
  auto inner_of = [&](double x) {
    return [&, x](double y) {
      double fr = phi.value(std::sqrt(x)), fs = phi.value(std::sqrt(y));
      double gr = psi.value(std::sqrt(x)), gs = psi.value(std::sqrt(y));
      double df = (fr - fs) * (gr - gs);
      if (df == 0.0) return 0.0;
      double lw = model.measure.log_weight(y);
      if (lw == kNegInf) return 0.0;
      return df * std::exp(log_Q(x, y) + lw);
    };
  };
  auto outer_fn = [&](double x) {
    double lw = model.measure.log_weight(x);
    if (lw == kNegInf) return 0.0;
    double in = num::integrate_with_breaks(inner_of(x), model.measure.x_lo(), x_hi,
                                           xb, opt);
    return std::exp(lw) * in;
  };
  double I = num::integrate_with_breaks(outer_fn, model.measure.x_lo(), x_hi, xb, opt);
  return 0.5 * I;
}

double rho_tail(const RadialDppModel& model, double R, double a) {
  if (!(a > 1.0)) throw BadParams("rho_tail: a > 1");
  if (R <= 0.0) return 0.0;
  double total = 0.0;
  for (int j = 0; j <= model.rank; ++j) {
    GammaVariate g(model.measure, j);
    double p_in = g.cdf(R * R);
    double p_out = 1.0 - g.cdf(a * a * R * R);
    total += p_in * p_out;
  }
  return total;
}

TelescopeTerms telescope_terms(const RadialDppModel& model, double R, double a) {
  TelescopeTerms t;
  double T = a * a * R * R;
  t.bound = T;
  const int n = model.rank;
  for (int j = 0; j <= n - 1; ++j) {
    GammaVariate g1(model.measure, j + 1);
    double trunc = g1.truncated_mean(T);
    t.zz_term += trunc * g1.cdf(T);
    if (j <= n - 2) {
      GammaVariate g2(model.measure, j + 2);
      t.zw_term += trunc * g2.cdf(T);
    }
  }
  return t;
}

bool mixture_identity_check(const std::vector<std::vector<cd>>& M,
                            std::span<const cd> u) {
  int d = int(M.size());
  if (d == 0 || d > 12) throw BadParams("mixture_identity_check: dim in [1,12]");
  MatrixXcd A(d, d);
  VectorXcd v(d);
  for (int i = 0; i < d; ++i) {
    if (int(M[std::size_t(i)].size()) != d)
      throw BadParams("mixture_identity_check: M not square");
    for (int j = 0; j < d; ++j) A(i, j) = M[std::size_t(i)][std::size_t(j)];
    v[i] = u[std::size_t(i)];
  }
  cd d0 = A.determinant();
  cd d1 = (A + v * v.adjoint()).determinant();
  cd dh = (A + 0.5 * v * v.adjoint()).determinant();
  cd lhs = 0.5 * d1 + 0.5 * d0;
  double scale = std::max({std::abs(lhs), std::abs(dh), 1e-300});
  return std::abs(lhs - dh) <= 1e-10 * scale;
}

std::vector<std::vector<cd>> weak_direction_matrix(int n, int index, double lambda) {
  int d = n + 1;
  if (index < 0 || index >= d) throw BadParams("weak_direction_matrix: index in [0,n]");
  if (lambda < 0.0 || lambda > 1.0) throw BadParams("weak_direction_matrix: lambda in [0,1]");
  std::vector<std::vector<cd>> A(std::size_t(d), std::vector<cd>(std::size_t(d), cd{0.0, 0.0}));
  for (int i = 0; i < d; ++i) A[std::size_t(i)][std::size_t(i)] = cd{1.0, 0.0};
  A[std::size_t(index)][std::size_t(index)] = cd{lambda, 0.0};
  return A;
}

namespace {

// P[Gamma_j in annulus] for the probe bookkeeping.
double annulus_mass(const RadialMeasure& measure, int j, double r_lo, double r_hi) {
  GammaVariate g(measure, j);
  return g.cdf(r_hi * r_hi) - g.cdf(r_lo * r_lo);
}

// Sample the determinantal process with Hermitian coefficient matrix A
// (eigenvalues in [0,1]): Bernoulli thinning of the eigenbasis, then a
// projection sample on the selected eigenspace.
std::vector<cd> sample_matrix_kernel(const RadialMeasure& measure,
                                     std::span<const double> log_c,
                                     const MatrixXcd& eigvecs,
                                     const Eigen::VectorXd& eigvals, Rng& rng) {
  int d = int(eigvals.size());
  std::vector<int> chosen;
  for (int k = 0; k < d; ++k)
    if (rng.uniform() < eigvals[k]) chosen.push_back(k);
  if (chosen.empty()) return {};
  MatrixXcd B(d, int(chosen.size()));
  for (std::size_t i = 0; i < chosen.size(); ++i) B.col(int(i)) = eigvecs.col(chosen[i]);
  return sample_projection(measure, log_c, std::move(B), rng);
}

}  // namespace

MixtureDemoReport mixture_demo(const RadialDppModel& model, std::span<const cd> f_coeffs,
                               const std::vector<std::vector<cd>>& base, int replicas,
                               std::uint64_t master_seed) {
  const int d = model.rank + 1;
  if (int(f_coeffs.size()) != d || int(base.size()) != d)
    throw BadParams("mixture_demo: dimension mismatch");
  MatrixXcd A(d, d);
  VectorXcd a(d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) A(i, j) = base[std::size_t(i)][std::size_t(j)];
    a[i] = f_coeffs[std::size_t(i)];
  }
  MatrixXcd A0 = A - 0.5 * (a * a.adjoint());
  MatrixXcd A1 = A + 0.5 * (a * a.adjoint());
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es0(A0), es1(A1);
  const double slack = 1e-10;
  for (int i = 0; i < d; ++i) {
    if (es0.eigenvalues()[i] < -slack || es0.eigenvalues()[i] > 1.0 + slack ||
        es1.eigenvalues()[i] < -slack || es1.eigenvalues()[i] > 1.0 + slack)
      throw NotContraction("mixture_demo: perturbed kernel leaves [0, I]");
  }
  Eigen::VectorXd ev0 = es0.eigenvalues().cwiseMax(0.0).cwiseMin(1.0);
  Eigen::VectorXd ev1 = es1.eigenvalues().cwiseMax(0.0).cwiseMin(1.0);

  MixtureDemoReport rep;
  rep.replicas = replicas;
  // Probe annuli: 5 bands across the bulk of the base intensity.
  double r_max;
  {
    GammaVariate g(model.measure, model.rank);
    double hi = std::isfinite(model.measure.x_hi()) ? model.measure.x_hi() : 4.0;
    while (!std::isfinite(model.measure.x_hi()) && g.cdf(hi) < 1.0 - 1e-6) hi *= 2.0;
    r_max = std::sqrt(hi);
  }
  const int n_probe = 5;
  std::vector<double> edges(n_probe + 1);
  for (int i = 0; i <= n_probe; ++i) edges[std::size_t(i)] = r_max * double(i) / double(n_probe);
  std::span<const double> log_c(model.ladder.log_c.data(), std::size_t(d));

  std::vector<std::vector<double>> probe_counts(
      static_cast<std::size_t>(n_probe),
      std::vector<double>(static_cast<std::size_t>(replicas)));
  std::vector<double> pair_stat(static_cast<std::size_t>(replicas));
  std::vector<int> totals(static_cast<std::size_t>(replicas));
  for (int i = 0; i < replicas; ++i) {
    Rng rng(derive_seed(master_seed, std::uint64_t(i)));
    bool flip = rng.uniform() < 0.5;
    std::vector<cd> pts = flip ? sample_matrix_kernel(model.measure, log_c,
                                                      es1.eigenvectors(), ev1, rng)
                               : sample_matrix_kernel(model.measure, log_c,
                                                      es0.eigenvectors(), ev0, rng);
    totals[std::size_t(i)] = int(pts.size());
    std::vector<int> c(std::size_t(n_probe), 0);
    for (cd z : pts) {
      double r = std::abs(z);
      for (int b = 0; b < n_probe; ++b)
        if (r >= edges[std::size_t(b)] && r < edges[std::size_t(b) + 1]) ++c[std::size_t(b)];
    }
    for (int b = 0; b < n_probe; ++b)
      probe_counts[std::size_t(b)][std::size_t(i)] = double(c[std::size_t(b)]);
    pair_stat[std::size_t(i)] = double(c[0]) * double(c[std::size_t(n_probe) - 1]);
  }

  int max_count = 0;
  for (int t : totals) max_count = std::max(max_count, t);
  rep.count_histogram.assign(std::size_t(max_count) + 1, 0);
  for (int t : totals) ++rep.count_histogram[std::size_t(t)];

  for (int b = 0; b < n_probe; ++b) {
    double lo = edges[std::size_t(b)], hi = edges[std::size_t(b) + 1];
    double expected = 0.0;
    for (int j = 0; j < d; ++j)
      expected += A(j, j).real() * annulus_mass(model.measure, j, lo, hi);
    num::MeanVar mv = num::MeanVar::from(probe_counts[std::size_t(b)]);
    rep.probe_radii.push_back(0.5 * (lo + hi));
    rep.probe_expected.push_back(expected);
    rep.probe_observed.push_back(mv.mean);
    rep.probe_se.push_back(mv.se_mean);
  }
  {
    // E[N_A N_B] = E N_A E N_B - sum_{j,l} |A_{jl}|^2 P_j(A) P_l(B), A and B
    // the first and last probe annuli (disjoint).
    double ea = rep.probe_expected.front(), eb = rep.probe_expected.back();
    double corr = 0.0;
    for (int j = 0; j < d; ++j) {
      double pj = annulus_mass(model.measure, j, edges[0], edges[1]);
      for (int l = 0; l < d; ++l) {
        double pl = annulus_mass(model.measure, l,
                                 edges[std::size_t(n_probe) - 1], edges[std::size_t(n_probe)]);
        corr += std::norm(A(j, l)) * pj * pl;
      }
    }
    rep.pair_expected = ea * eb - corr;
    num::MeanVar mv = num::MeanVar::from(pair_stat);
    rep.pair_observed = mv.mean;
    rep.pair_se = mv.se_mean;
  }
  // Frequency of the two most common totals.
  std::vector<std::pair<int, int>> freq;
  for (std::size_t t = 0; t < rep.count_histogram.size(); ++t)
    if (rep.count_histogram[t] > 0) freq.emplace_back(rep.count_histogram[t], int(t));
  std::sort(freq.rbegin(), freq.rend());
  if (freq.size() >= 2)
    rep.min_count_freq = double(freq[1].first) / double(replicas);
  else
    rep.min_count_freq = 0.0;
  return rep;
}

}  // namespace rigidlab
