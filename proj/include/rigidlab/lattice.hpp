#pragma once

#include <cstdint>
#include <vector>

#include "rigidlab/gaf.hpp"
#include "rigidlab/rng.hpp"
#include "rigidlab/test_functions.hpp"

namespace rigidlab {

// One-dimensional Gaussian perturbed lattice {k + Z_k}, Z_k ~ N(0, k^{2 beta})
// independent; sd_at(0) = 1 by convention so X_0 is not deterministic.
struct PerturbedLatticeModel {
  double beta = 0.0;
  bool symmetric = true;  // indices |k| <= M; otherwise 1..M
  int M = 1;
  double sd_at(int k) const;
};

PerturbedLatticeModel make_lattice(double beta, int M, bool symmetric = true);

// Points X_k = k + sd_at(k) * N(0,1), embedded on the real axis.
PointConfiguration sample(const PerturbedLatticeModel& model, Rng& rng,
                          std::uint64_t seed_tag = 0);

// Hellinger affinity between N(k, k^{2 beta}) and N(k+1, (k+1)^{2 beta}):
// sqrt(2 s s'/(s^2+s'^2)) exp(-(mu-mu')^2/(4 (s^2+s'^2))).
double hellinger_affinity(int k, double beta);

// Same affinity for arbitrary Gaussian parameters (used by the oracle tests).
double gaussian_affinity(double mu1, double sd1, double mu2, double sd2);

// Partial products prod_{k=1}^K affinity(k) for K = 1..K_max, via cumulative
// log sums. Index 0 of the returned vector is the empty product 1.
std::vector<double> kakutani_product(double beta, int K_max);

// Exact sum_k Var(h(X_k/L)) with per-term Gaussian quadrature split at the
// profile kinks; the omitted index tail is below 1e-12 by the Gaussian tail
// bound. h must be a LatticeBump profile.
double variance_linear_statistic(const PerturbedLatticeModel& model,
                                 const RadialTestFunction& h, double L);

// E[sum_k h(X_k/L)] with the same index truncation as the variance sum.
double expected_linear_statistic(const PerturbedLatticeModel& model,
                                 const RadialTestFunction& h, double L);

enum class LatticeVerdict { InsertionTolerant, RigidLevel1 };

struct LatticeClassification {
  LatticeVerdict verdict;
  double kakutani_limit_estimate = 0.0;  // partial product at the sweep end
  double variance_slope = 0.0;           // fitted log-log slope of sigma^2(h_L)
};

// Phase-transition verdict (beta > 1/2 tolerant, beta <= 1/2 rigid at level 1)
// with the computed evidence bundle.
LatticeClassification classify_lattice(double beta);

}  // namespace rigidlab
