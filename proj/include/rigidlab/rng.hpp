#pragma once

#include <complex>
#include <cstdint>

namespace rigidlab {

// Deterministic, platform-independent RNG stack. All experiment randomness
// flows through this type so that byte-identical reruns only depend on the
// master seed and replica index, never on library internals or thread count.

std::uint64_t splitmix64(std::uint64_t& state);

// Counter-based replica seed derivation:
//   seed_i = splitmix64 finalizer applied to (master + (i+1) * 0x9E3779B97F4A7C15).
// Streams derived for distinct indices are independent for all practical
// purposes and reproducible from (master, i) alone.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();
  // Uniform on [0,1).
  double uniform();
  double uniform(double a, double b);
  // Uniform on {0,...,n-1}.
  std::uint64_t uniform_int(std::uint64_t n);
  double normal();
  // Standard complex Gaussian, density pi^{-1} exp(-|z|^2): E|xi|^2 = 1.
  std::complex<double> complex_normal();
  // Gamma(shape, scale 1) via Marsaglia-Tsang, shape boost for shape < 1.
  double gamma(double shape);

 private:
  std::uint64_t s_[4];
  bool has_cached_normal_ = false;
  double cached_normal_ = 0.0;
};

}  // namespace rigidlab
