#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "rigidlab/rng.hpp"

namespace rigidlab {

// A rotation-invariant probability measure on the plane, handled throughout
// in the squared-modulus coordinate x = |z|^2. The pushforward density
// w(x) on [x_lo, x_hi] determines every quantity we need: the moment ladder,
// the size-biased Gamma_j family, and the radial determinantal kernels.
class RadialMeasure {
 public:
  enum class Family { GaussianPower, DiskUniform, Tabulated };

  // Plane density proportional to |z|^a exp(-b |z|^c); pushforward weight
  // w(x) proportional to x^{a/2} exp(-b x^{c/2}).
  static RadialMeasure gaussian_power(double a, double b, double c);
  // Uniform on the disk of the given radius; x is uniform on [0, radius^2].
  static RadialMeasure disk_uniform(double radius);
  // Strictly positive weight samples on a grid in x, log-linear interpolation
  // on a connected support.
  static RadialMeasure tabulated(std::vector<double> x_grid,
                                 std::vector<double> weights);

  Family family() const { return family_; }
  double param_a() const { return a_; }
  double param_b() const { return b_; }
  double param_c() const { return c_; }
  double disk_radius() const { return radius_; }
  // Support of the pushforward in x = |z|^2; x_hi may be +inf.
  double x_lo() const { return x_lo_; }
  double x_hi() const { return x_hi_; }
  bool compact_support() const;

  // log of the normalized pushforward density at x (-inf outside support).
  double log_weight(double x) const;
  // log of the j-th pushforward moment m_j = integral x^j w(x) dx = 1/c_j,
  // by adaptive log-domain quadrature.
  double log_moment_quadrature(int j) const;

  std::string describe() const;

  // Returns a copy carrying inverse-CDF sampling tables for Gamma_j,
  // j = 0..j_max. Only needed for Tabulated measures; closed-form families
  // sample directly.
  RadialMeasure with_sampling_tables(int j_max) const;
  bool has_sampling_table(int j) const;

 private:
  RadialMeasure() = default;
  friend class GammaVariate;

  Family family_ = Family::GaussianPower;
  double a_ = 0.0, b_ = 1.0, c_ = 2.0;
  double radius_ = 1.0;
  double x_lo_ = 0.0, x_hi_ = 0.0;
  double log_norm_ = 0.0;  // subtractive normalizer for log_weight
  std::vector<double> tab_x_, tab_logw_;
  // Per-j inverse CDF tables (Tabulated only): quantile grid u -> x.
  std::shared_ptr<const std::vector<std::vector<double>>> inv_cdf_;
  int inv_cdf_resolution_ = 0;
};

// The diagnostic arrays of the moment ladder: log c_j (c_j = 1/m_j),
// mu_j = c_j/c_{j+1}, sigma_j = mu_{j+1}/mu_j - 1, and nu_j, the fourth
// standardized central moment of Gamma_j.
struct MomentLadder {
  int J = 0;
  std::vector<double> log_c;  // indices 0..J
  std::vector<double> mu;     // 0..J
  std::vector<double> sigma;  // 0..J
  std::vector<double> nu;     // 0..J
  // Internal extension mu_{J+1}..mu_{J+3} kept for downstream consumers.
  std::vector<double> mu_ext;  // 0..J+3
};

MomentLadder compute_moments(const RadialMeasure& measure, int J);

// Gamma_j: density c_j x^j w(x) dx. E[Gamma_j^k] = mu_j ... mu_{j+k-1}.
class GammaVariate {
 public:
  GammaVariate(const RadialMeasure& measure, int j);

  int index() const { return j_; }
  // P[Gamma_j <= x]; closed form for the analytic families.
  double cdf(double x) const;
  // E[Gamma_j 1{Gamma_j <= t}]; closed form for the analytic families.
  double truncated_mean(double t) const;
  double mean() const;
  double sample(Rng& rng) const;
  // E[f(sqrt(Gamma_j))] by quadrature against the density, splitting at the
  // given radii (quadrature in x; break radii are given in r = sqrt(x)).
  double expect_radial(const std::function<double(double)>& f,
                       std::span<const double> break_radii) const;

 private:
  const RadialMeasure* measure_;
  int j_;
  double log_cj_;  // log c_j = -log m_j
};

double gamma_cdf(const GammaVariate& v, double x);
double sample_gamma(const GammaVariate& v, Rng& rng);

enum class RigidityVerdict { NotRigidNumbers, RigidNumbers, RigidLevel1, Inconclusive };

std::string to_string(RigidityVerdict v);

struct SeriesDiagnostic {
  double tail_exponent = 0.0;  // log-log regression on the last half
  double partial_sum = 0.0;
  bool plateau = false;   // last-quarter increment below 1e-6 of running sum
  bool summable = false;  // exponent <= -1.1 or plateau
};

struct Classification {
  RigidityVerdict verdict = RigidityVerdict::Inconclusive;
  SeriesDiagnostic sigma;
  SeriesDiagnostic nu;
  // Predicate sum_{j<=k} mu_j^4 nu_j = o(mu_k^4): fitted slope of the log
  // ratio against log k, and whether decay was detected.
  double predicate_slope = 0.0;
  bool predicate_holds = false;
  int level1_a = -1;  // smallest a >= 1 with sum mu_j^{-a} summable, -1 if none
  bool abs_continuous = false;
  std::string note;
};

// Classifier for the hypotheses of the compactness and rigidity theorems.
// J below j_min yields Inconclusive ("insufficient ladder").
Classification classify_rigidity(const MomentLadder& ladder, bool abs_continuous,
                                 int j_min = 64);

}  // namespace rigidlab
