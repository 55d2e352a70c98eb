#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "rigidlab/rng.hpp"
#include "rigidlab/test_functions.hpp"

namespace rigidlab {

// A finite multiset of complex points cut to a disk window, with provenance.
struct PointConfiguration {
  std::vector<std::complex<double>> points;
  double window_radius = 0.0;
  std::string model_tag;
  std::uint64_t seed = 0;
  int boundary_excluded = 0;  // roots within 1e-9 of the window circle
};

// The alpha-GAF: sum_k xi_k z^k / (k!)^{alpha/2} with iid standard complex
// Gaussian xi_k, truncated at degree K so the tail of the diagonal kernel
// series on |z| = R is below tail_tol relative to the head.
struct GafModel {
  double alpha = 1.0;
  int truncation = 0;  // K
  double window_radius = 1.0;
  double tail_tol = 1e-12;
  double c_var = 1.0;  // multiplier on the variance double integral
};

// Smallest K meeting the tail criterion; nondecreasing in R, nonincreasing
// in tail_tol.
int truncation_degree(double alpha, double R, double tail_tol);

GafModel make_gaf_model(double alpha, double window_radius, double tail_tol = 1e-12);

// Expected rigidity level k with 1/k < alpha <= 1/(k-1).
int expected_rigidity_level(double alpha);

// log g(t, beta), g(t, beta) = sum_k t^k/(k!)^beta, by log-sum-exp summation
// centered at the maximizing index.
double g_eval(double t, double beta);

// g(t,beta) / (a_{k*} sqrt(k*)) with a_{k*} = t^{-1/2} exp(beta t^{1/beta}).
double g_asymptotic_ratio(double t, double beta);

// Truncated covariance kernel K_alpha(z,w) = sum_{j<=K} (z conj(w))^j/(j!)^alpha.
std::complex<double> gaf_kernel(const GafModel& model, std::complex<double> z,
                                std::complex<double> w);

// psi_alpha(z,w) = Li2(|theta|^2) with theta = K(z,w)/sqrt(K(z,z)K(w,w)).
double psi_alpha(const GafModel& model, std::complex<double> z,
                 std::complex<double> w);
// |theta_alpha(z,w)|^2 on its own (handy for the comparison bounds).
double theta_abs2(const GafModel& model, std::complex<double> z,
                  std::complex<double> w);

// Draws coefficients, roots the truncated polynomial (Aberth-Ehrlich with
// Newton polish), returns roots inside the window. Bit-reproducible per seed.
PointConfiguration sample_zero_set(const GafModel& model, Rng& rng,
                                   std::uint64_t seed_tag = 0);

// Expected number of zeros of the truncated GAF in B(0,r): the mean of the
// index distribution with weights proportional to r^{2j}/(j!)^alpha. Exact
// for the truncated kernel (first-intensity formula integrated over the disk).
double expected_count(const GafModel& model, double r);
// First intensity at radius r (d/dm of the expected counting measure).
double first_intensity(const GafModel& model, double r);

// Var(int h dZ) for h(z) = z^k phi(|z|/L) via the psi_alpha double integral,
// multiplied by model.c_var. fn must carry its scale (fn.scale() = L) and a
// C^2 profile (MollifiedLog/MomentWeighted).
double variance_exact(const GafModel& model, const RadialTestFunction& fn);

// Right side of the decay bound: the Laplace-kernel double integral with the
// constant treated as a reported multiplier 1. fn is the unscaled profile.
double variance_bound(const GafModel& model, const RadialTestFunction& fn, double L);

struct CvarCalibration {
  double c_var = 1.0;
  std::vector<double> L;
  std::vector<double> mc_var;
  std::vector<double> mc_se;
  std::vector<double> raw_exact;
};

// Least-squares fit of c_var against Monte Carlo variance of the statistic
// at the given scales. Replica seeds derive from master_seed.
CvarCalibration calibrate_c_var(const GafModel& base, const RadialTestFunction& fn,
                                const std::vector<double>& scales, int replicas,
                                std::uint64_t master_seed);

}  // namespace rigidlab
