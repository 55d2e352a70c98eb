#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "rigidlab/gaf.hpp"
#include "rigidlab/measures.hpp"
#include "rigidlab/rng.hpp"
#include "rigidlab/test_functions.hpp"

namespace rigidlab {

// Radial determinantal point process with the rank-(n+1) projection kernel
// K_n(z,w) = sum_{j<=n} c_j z^j conj(w)^j against the radial measure.
struct RadialDppModel {
  RadialMeasure measure;
  int rank = 0;  // n: kernel truncated at j = n, expected count n+1
  MomentLadder ladder;
};

RadialDppModel make_radial_dpp(const RadialMeasure& measure, int n);

// Squared moduli of the points are independent Gamma_j, j = 0..n; returns
// the sorted radii sqrt(Gamma_j).
std::vector<double> sample_moduli(const RadialDppModel& model, Rng& rng);

// Exact sequential sampling of the full planar configuration (n+1 points).
// n is capped at 256 for conditioning stability.
PointConfiguration sample_full(const RadialDppModel& model, Rng& rng,
                               std::uint64_t seed_tag = 0);

// Kernel value K_n(z,w).
std::complex<double> dpp_kernel(const RadialDppModel& model, std::complex<double> z,
                                std::complex<double> w);

struct PalmOverlapEstimate {
  int n = 0;
  int replicas = 0;
  double mean_min = 0.0;  // estimate of E[theta_n ^ 1]
  double standard_error = 0.0;
};

// Monte Carlo estimate of E[theta_n ^ 1], theta_n = prod_{j=1}^n Gamma_j/mu_j
// accumulated in log domain.
PalmOverlapEstimate palm_overlap(const RadialDppModel& model, int n, int replicas,
                                 Rng& rng);

// Radial statistic for the covariance engine: a value profile plus the radii
// at which the quadrature must split.
struct RadialStatistic {
  std::function<double(double)> value;  // of radius r
  std::vector<double> break_radii;
  double outer_radius = 0.0;  // value vanishes beyond this radius (inf allowed)
};

RadialStatistic as_radial_statistic(const RadialTestFunction& fn);
RadialStatistic indicator_statistic(double radius);

// Cov(int phi dPi, int psi dPi) for radial inputs, exact via the independent
// Gamma_j representation of the moduli.
double covariance_exact(const RadialDppModel& model, const RadialStatistic& phi,
                        const RadialStatistic& psi);

// Variance of a radial linear statistic summed over Gamma_0..Gamma_{j_max};
// with j_max far past the bulk this is the infinite-process variance for
// statistics of bounded support.
double variance_radial_sum(const RadialMeasure& measure, int j_max,
                           const RadialStatistic& st);

// Same covariance through the kernel double integral reduced to a 3-D
// quadrature (r, s, angle). Slow cross-check path for non-radial machinery;
// accuracy is looser than the radial route.
double covariance_quadrature(const RadialDppModel& model, const RadialStatistic& phi,
                             const RadialStatistic& psi);

// Sum over the first n+1 indices of the independent-moduli variance of the
// indicator pair: rho(R) = sum_j P[Gamma_j <= R^2] P[Gamma_j >= a^2 R^2].
double rho_tail(const RadialDppModel& model, double R, double a = 2.0);

// Telescoping-bound diagnostics for the |z|^2 - z conj(w) contribution of the
// covariance expansion at cutoff T = a^2 R^2.
struct TelescopeTerms {
  double zz_term = 0.0;   // sum_j E[G_{j+1} 1{<=T}] P[G_{j+1} <= T]
  double zw_term = 0.0;   // sum_j E[G_{j+1} 1{<=T}] P[G_{j+2} <= T]
  double bound = 0.0;     // a^2 R^2
};
TelescopeTerms telescope_terms(const RadialDppModel& model, double R, double a = 2.0);

// |det identity| check: 0.5 det(M + uu*) + 0.5 det(M) == det(M + uu*/2).
bool mixture_identity_check(const std::vector<std::vector<std::complex<double>>>& M,
                            std::span<const std::complex<double>> u);

// Finite-rank kernel given by a Hermitian coefficient matrix A against the
// orthonormal monomial basis: K_A(z,w) = sum_{j,l} A_{jl} psi_j(z) conj(psi_l(w)).
struct MixtureDemoReport {
  int replicas = 0;
  std::vector<int> count_histogram;      // index = total point count
  std::vector<double> probe_radii;
  std::vector<double> probe_expected;    // expected count in probe annulus
  std::vector<double> probe_observed;    // MC mean count
  std::vector<double> probe_se;
  double pair_expected = 0.0;            // 2-point check on an annulus pair
  double pair_observed = 0.0;
  double pair_se = 0.0;
  double min_count_freq = 0.0;           // smaller of the two dominant count freqs
};

// Samples the Bernoulli(1/2) mixture of the rank-one perturbed kernels
// L_{0,1} = A -+ f f*/2 and verifies its correlation functions against the
// determinantal predictions for A. f_coeffs is the coefficient vector of f in
// the orthonormal basis; both perturbed kernels must stay contractions.
MixtureDemoReport mixture_demo(const RadialDppModel& model,
                               std::span<const std::complex<double>> f_coeffs,
                               const std::vector<std::vector<std::complex<double>>>& base,
                               int replicas, std::uint64_t master_seed);

// Base coefficient matrix for the demo: identity with one diagonal entry set
// to lambda (the non-projection direction).
std::vector<std::vector<std::complex<double>>> weak_direction_matrix(int n, int index,
                                                                     double lambda);

}  // namespace rigidlab
