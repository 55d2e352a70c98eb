#include "rigidlab/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rigidlab/errors.hpp"
#include "rigidlab/numerics.hpp"

namespace rigidlab {

double PerturbedLatticeModel::sd_at(int k) const {
  if (k == 0) return 1.0;
  return std::pow(std::abs(double(k)), beta);
}

PerturbedLatticeModel make_lattice(double beta, int M, bool symmetric) {
  if (beta < 0.0) throw BadParams("make_lattice: beta >= 0");
  if (M < 1) throw BadParams("make_lattice: M >= 1");
  return {beta, symmetric, M};
}

PointConfiguration sample(const PerturbedLatticeModel& model, Rng& rng,
                          std::uint64_t seed_tag) {
  PointConfiguration cfg;
  cfg.seed = seed_tag;
  {
    std::ostringstream tag;
    tag << "lattice(beta=" << model.beta << ",M=" << model.M
        << (model.symmetric ? ",symmetric" : ",naturals") << ")";
    cfg.model_tag = tag.str();
  }
  int k_lo = model.symmetric ? -model.M : 1;
  for (int k = k_lo; k <= model.M; ++k) {
    double x = double(k) + model.sd_at(k) * rng.normal();
    cfg.points.emplace_back(x, 0.0);
  }
  cfg.window_radius = double(model.M) + 8.0 * model.sd_at(model.M);
  return cfg;
}

double gaussian_affinity(double mu1, double sd1, double mu2, double sd2) {
  if (!(sd1 > 0.0) || !(sd2 > 0.0)) throw BadParams("gaussian_affinity: sd > 0");
  double s2 = sd1 * sd1 + sd2 * sd2;
  double dm = mu1 - mu2;
  return std::sqrt(2.0 * sd1 * sd2 / s2) * std::exp(-dm * dm / (4.0 * s2));
}

double hellinger_affinity(int k, double beta) {
  if (k < 1) throw BadParams("hellinger_affinity: k >= 1");
  double s1 = std::pow(double(k), beta);
  double s2 = std::pow(double(k) + 1.0, beta);
  return gaussian_affinity(double(k), s1, double(k) + 1.0, s2);
}

std::vector<double> kakutani_product(double beta, int K_max) {
  if (K_max < 1) throw BadParams("kakutani_product: K_max >= 1");
  std::vector<double> partial(std::size_t(K_max) + 1);
  partial[0] = 1.0;  // empty product
  double log_prod = 0.0;
  for (int k = 1; k <= K_max; ++k) {
    log_prod += std::log(hellinger_affinity(k, beta));
    partial[std::size_t(k)] = std::exp(log_prod);
  }
  return partial;
}

namespace {

// First two moments of h(X/L) for X ~ N(k, sd^2): adaptive quadrature against
// the Gaussian density with subdivisions at the profile kinks. Mass outside
// the support contributes 0 to both moments.
void one_site_moments(const RadialTestFunction& h, double L, double k, double sd,
                      double& m1, double& m2) {
  double outer = h.outer_radius() * L;
  double lo = std::max(-outer, k - 10.0 * sd);
  double hi = std::min(outer, k + 10.0 * sd);
  m1 = 0.0;
  m2 = 0.0;
  if (hi <= lo) return;
  std::vector<double> breaks;
  double inner = h.inner_plateau() * L;
  for (double b : {-outer, -inner, inner, outer})
    if (b > lo && b < hi) breaks.push_back(b);
  std::sort(breaks.begin(), breaks.end());
  num::QuadOptions opt;
  opt.rel_tol = 1e-12;
  opt.abs_tol = 1e-16;
  const double inv = 1.0 / (sd * std::sqrt(2.0 * num::kPi));
  auto dens = [&](double x) {
    double t = (x - k) / sd;
    return inv * std::exp(-0.5 * t * t);
  };
  m1 = num::integrate_with_breaks(
      [&](double x) { return h.value(x / L) * dens(x); }, lo, hi, breaks, opt);
  m2 = num::integrate_with_breaks(
      [&](double x) {
        double v = h.value(x / L);
        return v * v * dens(x);
      },
      lo, hi, breaks, opt);
}

double one_site_variance(const RadialTestFunction& h, double L, double k, double sd) {
  double m1, m2;
  one_site_moments(h, L, k, sd, m1, m2);
  return std::max(0.0, m2 - m1 * m1);
}

}  // namespace

double variance_linear_statistic(const PerturbedLatticeModel& model,
                                 const RadialTestFunction& h, double L) {
  if (h.kind() != ProfileKind::LatticeBump)
    throw BadParams("variance_linear_statistic: needs a LatticeBump profile");
  if (!(L > 0.0)) throw BadParams("variance_linear_statistic: L > 0");
  double outer = h.outer_radius() * L;
  // Index cutoff: a site |k| > outer contributes only when X_k wanders into
  // the support, Var <= exp(-(k-outer)^2/(2 sd_k^2)). Walk down from the 20 L
  // default range until the accumulated tail bound exceeds 1e-13, so the
  // omitted indices contribute below 1e-12 in total.
  int cap = std::max(int(std::ceil(20.0 * L)), int(std::ceil(outer)) + 8);
  int k_cut = int(std::ceil(outer)) + 1;
  {
    double rem = 0.0;
    for (int k = cap; k > int(outer); --k) {
      double t = (double(k) - outer) / model.sd_at(k);
      rem += 2.0 * std::exp(-0.5 * t * t);
      if (rem > 1e-13) {
        k_cut = k;
        break;
      }
    }
  }
  int lo = model.symmetric ? -k_cut : 1;
  double total = 0.0, comp = 0.0;
  for (int k = lo; k <= k_cut; ++k) {
    double v = one_site_variance(h, L, double(k), model.sd_at(k));
    double y = v - comp;
    double t = total + y;
    comp = (t - total) - y;
    total = t;
  }
  return total;
}

double expected_linear_statistic(const PerturbedLatticeModel& model,
                                 const RadialTestFunction& h, double L) {
  if (h.kind() != ProfileKind::LatticeBump)
    throw BadParams("expected_linear_statistic: needs a LatticeBump profile");
  double outer = h.outer_radius() * L;
  int cap = std::max(int(std::ceil(20.0 * L)), int(std::ceil(outer)) + 8);
  int k_cut = int(std::ceil(outer)) + 1;
  {
    double rem = 0.0;
    for (int k = cap; k > int(outer); --k) {
      double t = (double(k) - outer) / model.sd_at(k);
      rem += 2.0 * std::exp(-0.5 * t * t);
      if (rem > 1e-13) {
        k_cut = k;
        break;
      }
    }
  }
  int lo = model.symmetric ? -k_cut : 1;
  double total = 0.0;
  for (int k = lo; k <= k_cut; ++k) {
    double m1, m2;
    one_site_moments(h, L, double(k), model.sd_at(k), m1, m2);
    total += m1;
  }
  return total;
}

LatticeClassification classify_lattice(double beta) {
  if (beta < 0.0) throw BadParams("classify_lattice: beta >= 0");
  LatticeClassification c;
  c.verdict = beta > 0.5 ? LatticeVerdict::InsertionTolerant : LatticeVerdict::RigidLevel1;
  auto partial = kakutani_product(beta, 20'000);
  c.kakutani_limit_estimate = partial.back();
  PerturbedLatticeModel model = make_lattice(beta, 1);
  RadialTestFunction h = RadialTestFunction::lattice_bump(1.0);
  std::vector<double> lx, ly;
  for (double L : {8.0, 16.0, 32.0, 64.0}) {
    lx.push_back(std::log(L));
    ly.push_back(std::log(variance_linear_statistic(model, h, L)));
  }
  c.variance_slope = num::fit_line(lx, ly).slope;
  return c;
}

}  // namespace rigidlab
