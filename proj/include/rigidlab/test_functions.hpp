#pragma once

#include <complex>
#include <vector>

namespace rigidlab {

// Radial test-function profiles used by the variance engines and the
// recovery estimators. Every profile is 1 on an inner plateau, tapers in
// log r, and vanishes beyond a finite outer radius. The MomentWeighted kind
// carries the holomorphic weight z^k; its evaluators expose the radial
// factor of the Laplacian of z^k * profile.
enum class ProfileKind { MollifiedLog, PiecewiseLog, MomentWeighted, LatticeBump };

class RadialTestFunction {
 public:
  // C^2 taper: 1 for r <= 2 r0, raised-cosine ramp in log r over width 2/eps,
  // 0 beyond 2 r0 e^{2/eps}. |phi'| <= eps/r, |Delta phi| <= (pi/2) eps^2/r^2.
  static RadialTestFunction mollified_log(double r0, double eps);
  // Exact piecewise profile: 1, then 1 - eps log(r/r0), then 0 beyond
  // r0 e^{1/eps}. Harmonic in the ramp, so the radial Laplacian vanishes
  // there; Lipschitz with kappa = eps/r0.
  static RadialTestFunction piecewise_log(double r0, double eps);
  // z^k weighted mollified profile; requires r0 > 1.
  static RadialTestFunction moment_weighted(int k, double r0, double eps);
  // Same construction without the r0 > 1 restriction, for experiments whose
  // window budget forces a small support (the estimator algebra does not
  // depend on r0).
  static RadialTestFunction moment_weighted_any(int k, double r0, double eps);
  // One-dimensional bump h on [-1,1]: 1 for |x| <= e^{-1/eps}, log-linear
  // taper to 0 at |x| = 1, sup norm 1.
  static RadialTestFunction lattice_bump(double eps);

  ProfileKind kind() const { return kind_; }
  int moment_order() const { return k_; }
  double r0() const { return r0_; }
  double eps() const { return eps_; }
  double scale() const { return L_; }

  // Copy dilated by L: evaluators become functions of r with profile(r/L).
  RadialTestFunction scaled(double L) const;

  // Profile value/derivative/Laplacian at radius r (scale applied). For
  // MomentWeighted these refer to the radial profile phi only; the z^k factor
  // enters through delta_weight.
  double value(double r) const;
  double dvalue(double r) const;
  double laplacian(double r) const;
  // Radial factor G(r) with Delta(z^k phi(|z|/L)) = z^k G(r). Equals the
  // plain Laplacian when k = 0.
  double delta_weight(double r) const;

  double inner_plateau() const;  // plateau outer edge (scaled)
  double outer_radius() const;   // support outer radius (scaled)
  std::vector<double> breakpoints() const;
  // Lipschitz constant of the scaled profile.
  double lipschitz() const;

 private:
  RadialTestFunction() = default;
  ProfileKind kind_ = ProfileKind::MollifiedLog;
  double r0_ = 1.0, eps_ = 1.0, L_ = 1.0;
  int k_ = 0;
  // Unscaled plateau edge / outer radius / log-ramp width.
  double edge_ = 0.0, outer_ = 0.0, width_ = 0.0;
};

// z^k * profile(|z|): the summand of the statistic int h dPi.
std::complex<double> statistic_value(const RadialTestFunction& fn,
                                     std::complex<double> z);

}  // namespace rigidlab
