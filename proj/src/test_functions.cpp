#include "rigidlab/test_functions.hpp"

#include <cmath>

#include "rigidlab/errors.hpp"
#include "rigidlab/numerics.hpp"

namespace rigidlab {

namespace {
constexpr double kTwoPi = 2.0 * num::kPi;
}

RadialTestFunction RadialTestFunction::mollified_log(double r0, double eps) {
  if (!(r0 > 0.0) || !(eps > 0.0)) throw BadParams("mollified_log: need r0 > 0, eps > 0");
  RadialTestFunction f;
  f.kind_ = ProfileKind::MollifiedLog;
  f.r0_ = r0;
  f.eps_ = eps;
  f.edge_ = 2.0 * r0;
  f.width_ = 2.0 / eps;
  f.outer_ = f.edge_ * std::exp(f.width_);
  return f;
}

RadialTestFunction RadialTestFunction::piecewise_log(double r0, double eps) {
  if (!(r0 > 0.0) || !(eps > 0.0)) throw BadParams("piecewise_log: need r0 > 0, eps > 0");
  RadialTestFunction f;
  f.kind_ = ProfileKind::PiecewiseLog;
  f.r0_ = r0;
  f.eps_ = eps;
  f.edge_ = r0;
  f.width_ = 1.0 / eps;
  f.outer_ = r0 * std::exp(f.width_);
  return f;
}

RadialTestFunction RadialTestFunction::moment_weighted(int k, double r0, double eps) {
  if (!(r0 > 1.0)) throw BadParams("moment_weighted: requires r0 > 1");
  return moment_weighted_any(k, r0, eps);
}

RadialTestFunction RadialTestFunction::moment_weighted_any(int k, double r0, double eps) {
  if (k < 0) throw BadParams("moment_weighted: k >= 0");
  RadialTestFunction f = mollified_log(r0, eps);
  f.kind_ = ProfileKind::MomentWeighted;
  f.k_ = k;
  return f;
}

RadialTestFunction RadialTestFunction::lattice_bump(double eps) {
  if (!(eps > 0.0)) throw BadParams("lattice_bump: eps > 0");
  RadialTestFunction f;
  f.kind_ = ProfileKind::LatticeBump;
  f.eps_ = eps;
  f.width_ = 1.0 / eps;
  f.edge_ = std::exp(-f.width_);  // support pinned to [-1,1]
  f.r0_ = f.edge_;
  f.outer_ = 1.0;
  return f;
}

RadialTestFunction RadialTestFunction::scaled(double L) const {
  if (!(L > 0.0)) throw BadParams("scaled: L > 0");
  RadialTestFunction f = *this;
  f.L_ = L_ * L;
  return f;
}

double RadialTestFunction::value(double r) const {
  double u = std::abs(r) / L_;
  if (u <= edge_) return 1.0;
  if (u >= outer_) return 0.0;
  double s = std::log(u / edge_);
  switch (kind_) {
    case ProfileKind::MollifiedLog:
    case ProfileKind::MomentWeighted: {
      double t = s / width_;
      return 1.0 - t + std::sin(kTwoPi * t) / kTwoPi;
    }
    case ProfileKind::PiecewiseLog:
    case ProfileKind::LatticeBump:
      return 1.0 - s / width_;
  }
  return 0.0;
}

double RadialTestFunction::dvalue(double r) const {
  double u = std::abs(r) / L_;
  if (u <= edge_ || u >= outer_) return 0.0;
  double s = std::log(u / edge_);
  double dpsi;  // d value / d s
  switch (kind_) {
    case ProfileKind::MollifiedLog:
    case ProfileKind::MomentWeighted:
      dpsi = -(1.0 - std::cos(kTwoPi * s / width_)) / width_;
      break;
    case ProfileKind::PiecewiseLog:
    case ProfileKind::LatticeBump:
      dpsi = -1.0 / width_;
      break;
    default:
      dpsi = 0.0;
  }
  return dpsi / (u * L_);
}

double RadialTestFunction::laplacian(double r) const {
  // For psi(log(r/L)) the radial Laplacian is psi''(s)/r^2 exactly.
  double u = std::abs(r) / L_;
  if (u <= edge_ || u >= outer_) return 0.0;
  double s = std::log(u / edge_);
  double d2psi;
  switch (kind_) {
    case ProfileKind::MollifiedLog:
    case ProfileKind::MomentWeighted:
      d2psi = -(kTwoPi / (width_ * width_)) * std::sin(kTwoPi * s / width_);
      break;
    case ProfileKind::PiecewiseLog:
    case ProfileKind::LatticeBump:
      d2psi = 0.0;  // harmonic ramp
      break;
    default:
      d2psi = 0.0;
  }
  double rr = u * L_;
  return d2psi / (rr * rr);
}

double RadialTestFunction::delta_weight(double r) const {
  if (k_ == 0) return laplacian(r);
  double rr = std::abs(r);
  if (rr <= 0.0) return 0.0;
  return 2.0 * double(k_) * dvalue(rr) / rr + laplacian(rr);
}

double RadialTestFunction::inner_plateau() const { return edge_ * L_; }

double RadialTestFunction::outer_radius() const { return outer_ * L_; }

std::vector<double> RadialTestFunction::breakpoints() const {
  if (kind_ == ProfileKind::MollifiedLog || kind_ == ProfileKind::MomentWeighted) {
    // The sine ramp changes curvature mid-way; give the quadrature the two
    // C^2 joints and the midpoint.
    double mid = edge_ * std::exp(0.5 * width_);
    return {edge_ * L_, mid * L_, outer_ * L_};
  }
  return {edge_ * L_, outer_ * L_};
}

std::complex<double> statistic_value(const RadialTestFunction& fn,
                                     std::complex<double> z) {
  double v = fn.value(std::abs(z));
  if (v == 0.0) return {0.0, 0.0};
  int k = fn.moment_order();
  std::complex<double> zk{1.0, 0.0};
  for (int i = 0; i < k; ++i) zk *= z;
  return zk * v;
}

double RadialTestFunction::lipschitz() const {
  switch (kind_) {
    case ProfileKind::MollifiedLog:
    case ProfileKind::MomentWeighted:
      // max |phi'| = max over ramp of (1 - cos(2 pi s/W))/(W r); the profile
      // decreases while r grows, so the max sits left of mid-ramp. A short
      // scan is exact enough for certificate bookkeeping.
      {
        double best = 0.0;
        for (int i = 1; i < 4096; ++i) {
          double s = width_ * double(i) / 4096.0;
          double g = (1.0 - std::cos(kTwoPi * s / width_)) / width_ /
                     (edge_ * std::exp(s) * L_);
          best = std::max(best, g);
        }
        return best;
      }
    case ProfileKind::PiecewiseLog:
    case ProfileKind::LatticeBump:
      return 1.0 / (width_ * edge_ * L_);
  }
  return 0.0;
}

}  // namespace rigidlab
