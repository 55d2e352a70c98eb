#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "rigidlab/dpp.hpp"
#include "rigidlab/gaf.hpp"
#include "rigidlab/lattice.hpp"
#include "rigidlab/test_functions.hpp"

namespace rigidlab {

// A process the certificate/recovery machinery can drive: a windowed sampler,
// a variance evaluator for scaled test functions, and the deterministic E[T]
// of the statistic (from the first intensity).
struct ProcessHandle {
  std::string name;
  // Variance of int h dPi for the scaled test function (k from fn).
  std::function<double(const RadialTestFunction&)> variance;
  // Configurations covering at least the given radius; seed passed explicitly.
  std::function<PointConfiguration(double window_radius, std::uint64_t seed)> sampler;
  // E[sum h(z)] for the scaled test function (0 for k >= 1 by rotation
  // invariance in the planar cases).
  std::function<double(const RadialTestFunction&)> expected_statistic;
  // Test functions whose support exceeds this radius are inadmissible for the
  // infinite process (statistic undefined); +inf when unconstrained.
  double support_limit = 0.0;
  // Largest window the sampler can provide (+inf when complete configurations
  // are returned).
  double max_window = 0.0;
  ProfileKind profile = ProfileKind::PiecewiseLog;
};

ProcessHandle make_process(const RadialDppModel& model);
// Evaluates the variance sums to j_max (proxy for the infinite process) while
// still sampling at the model rank.
ProcessHandle make_process_infinite(const RadialDppModel& model, int j_max);
ProcessHandle make_process(const GafModel& model);
ProcessHandle make_process(const PerturbedLatticeModel& model);

struct Certificate {
  bool achieved = false;
  double eps = 0.0;
  double L = 0.0;
  double variance = 0.0;  // achieved (or best seen when not achieved)
  int evaluated = 0;      // admissible grid points scored
};

struct CertificateGrid {
  std::vector<double> eps_values = {4.0, 2.0, 1.0, 0.5, 0.25};
  std::vector<double> L_values = {1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0};
};

// First (eps, L) on the grid driving the statistic variance below delta.
// NotAchieved is reported in-band: achieved=false with the best value found.
Certificate certificate_scan(const ProcessHandle& process, int k, double r0,
                             double delta, const CertificateGrid& grid = {});

struct RecoveryReport {
  int replicas = 0;
  int k_max = 0;
  double r0 = 0.0, epsilon = 0.0, L = 0.0;
  // per k (outer), per replica (inner): truth and estimate of M_k.
  std::vector<std::vector<std::complex<double>>> truth;
  std::vector<std::vector<std::complex<double>>> estimate;
  double success_rate = 0.0;                 // k = 0 after integer rounding
  std::vector<double> residual_variance;     // per k: Var(estimate - truth)
  std::vector<double> residual_mean_abs;     // per k: |mean(estimate - truth)|
  // Moment-manifold metadata (reported, never sampled): real dimension of
  // the constrained configuration manifold per replica, and the worst
  // constraint residual |S_k_hat - S_k| per k.
  std::vector<int> manifold_dimension;
  std::vector<double> constraint_residual;
};

// Reconstructs the inside moments M_0..M_k_max of D = B(0, r0) from the
// outside configuration: estimate = E[T] - sum_{z outside D} h(z) with
// h = z^k phi_eps(z/L), h == z^k on D.
RecoveryReport recover_inside_moments(const ProcessHandle& process, double r0,
                                      int k_max, double epsilon, double L,
                                      int replicas, std::uint64_t master_seed);

struct Rational {
  long long num = 0;
  long long den = 1;
  double value() const { return double(num) / double(den); }
  std::string str() const;
};

struct AppendixReport {
  // Finite two-coordinate example: conditional supports of X given Y and
  // triviality of the common sigma-algebra, all by exhaustive enumeration.
  std::array<int, 3> conditional_support_sizes{};
  bool common_sigma_trivial = false;
  // 2-dependent sequence on a 9-site window: P[X_0 = 1 | (X_1, X_{-1})]
  // indexed by 2*x1 + xm1, plus the pair probabilities.
  std::array<Rational, 4> p_x0_one_given_pair{};
  std::array<Rational, 4> pair_probability{};
  bool forcing_case_deterministic = false;  // (1,1) forces X_0 = 1
  bool other_cases_nondegenerate = false;   // P in (0,1) for the other three
  // Per full outside class: degeneracy of X_0 occurs exactly on (1,1).
  bool groupwise_dichotomy = false;
  bool ok = false;
};

// Exhaustive rational-arithmetic verification of the two finite appendix
// examples.
AppendixReport verify_appendix_examples();

}  // namespace rigidlab
