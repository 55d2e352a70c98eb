#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace rigidlab {

struct AberthOptions {
  int max_iterations = 200;
  double tol = 1e-13;
  int newton_polish_steps = 2;
};

// All roots of sum_k coeffs[k] z^k by Aberth-Ehrlich simultaneous iteration.
// Initial guesses sit on circles read off the upper convex hull of
// (k, log|coeffs[k]|), which keeps iterates near the root annuli even when
// coefficient magnitudes span hundreds of orders. Throws RootFindingDiverged
// (carrying `seed` for reproduction) when the iteration cap is hit.
std::vector<std::complex<double>> aberth_roots(
    std::span<const std::complex<double>> coeffs, const AberthOptions& opt = {},
    std::uint64_t seed = 0);

// Backward-error style residual |p(y)| / sum_k |coeffs[k]| |y|^k.
double poly_residual(std::span<const std::complex<double>> coeffs,
                     std::complex<double> y);

}  // namespace rigidlab
