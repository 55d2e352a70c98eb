#include "rigidlab/polyroots.hpp"

#include <algorithm>
#include <cmath>

#include "rigidlab/errors.hpp"
#include "rigidlab/numerics.hpp"

namespace rigidlab {

namespace {

using cd = std::complex<double>;

struct Eval {
  cd p;
  cd dp;
  double scale;  // sum_k |c_k| |z|^k, the backward-error denominator
};

Eval horner(std::span<const cd> c, cd z) {
  cd p = c.back(), dp = 0.0;
  double az = std::abs(z);
  double scale = std::abs(c.back());
  for (std::size_t i = c.size() - 1; i-- > 0;) {
    dp = dp * z + p;
    p = p * z + c[i];
    scale = scale * az + std::abs(c[i]);
  }
  return {p, dp, scale};
}

// Initial guesses from the upper convex hull of (k, log|c_k|): each hull edge
// (k1,k2) contributes k2-k1 points on the circle of radius
// exp((log|c_{k1}| - log|c_{k2}|)/(k2-k1)).
std::vector<cd> initial_guesses(std::span<const cd> c) {
  int n = int(c.size()) - 1;
  std::vector<double> lm(c.size());
  for (std::size_t k = 0; k < c.size(); ++k) {
    double a = std::abs(c[k]);
    lm[k] = a > 0.0 ? std::log(a) : num::kNegInf;
  }
  std::vector<int> hull;  // monotone chain, upper hull
  for (int k = 0; k <= n; ++k) {
    if (lm[k] == num::kNegInf && k != 0 && k != n) continue;
    while (hull.size() >= 2) {
      int a = hull[hull.size() - 2], b = hull[hull.size() - 1];
      double cross = (double(b - a)) * (lm[k] - lm[a]) - (double(k - a)) * (lm[b] - lm[a]);
      if (cross >= 0.0)
        hull.pop_back();
      else
        break;
    }
    hull.push_back(k);
  }
  std::vector<cd> guesses;
  guesses.reserve(std::size_t(n));
  int annulus = 0;
  for (std::size_t e = 0; e + 1 < hull.size(); ++e, ++annulus) {
    int k1 = hull[e], k2 = hull[e + 1];
    int m = k2 - k1;
    double lr = (lm[k1] - lm[k2]) / double(m);
    double r = std::exp(std::clamp(lr, -300.0, 300.0));
    for (int i = 0; i < m; ++i) {
      double phase =
          2.0 * num::kPi * (double(i) + 0.5) / double(m) + 0.4 * double(annulus) + 0.3;
      guesses.emplace_back(r * std::cos(phase), r * std::sin(phase));
    }
  }
  while (int(guesses.size()) < n) guesses.emplace_back(1.0, double(guesses.size()));
  guesses.resize(std::size_t(n));
  return guesses;
}

}  // namespace

double poly_residual(std::span<const cd> coeffs, cd y) {
  cd p = coeffs.back();
  double scale = std::abs(coeffs.back());
  double ay = std::abs(y);
  for (std::size_t i = coeffs.size() - 1; i-- > 0;) {
    p = p * y + coeffs[i];
    scale = scale * ay + std::abs(coeffs[i]);
  }
  if (scale == 0.0) return 0.0;
  return std::abs(p) / scale;
}

std::vector<cd> aberth_roots(std::span<const cd> coeffs, const AberthOptions& opt,
                             std::uint64_t seed) {
  // Strip trailing zero coefficients (degree reduction) and factor out roots
  // at the origin.
  std::vector<cd> c(coeffs.begin(), coeffs.end());
  while (c.size() > 1 && std::abs(c.back()) == 0.0) c.pop_back();
  std::vector<cd> roots;
  std::size_t zero_roots = 0;
  while (c.size() > 1 && std::abs(c.front()) == 0.0) {
    c.erase(c.begin());
    ++zero_roots;
  }
  roots.assign(zero_roots, cd{0.0, 0.0});
  int n = int(c.size()) - 1;
  if (n == 0) return roots;
  if (n == 1) {
    roots.push_back(-c[0] / c[1]);
    return roots;
  }

  std::vector<cd> z = initial_guesses(c);
  std::vector<bool> locked(z.size(), false);
  // An iterate is done when its residual is backward-stable (|p| at rounding
  // level for this degree) or its correction stalls at the tolerance.
  const double stable = 4.0 * double(n) * 2.3e-16;
  int it = 0;
  for (; it < opt.max_iterations; ++it) {
    int moved = 0;
    for (int i = 0; i < n; ++i) {
      if (locked[std::size_t(i)]) continue;
      Eval e = horner(c, z[std::size_t(i)]);
      if (e.p == cd{0.0, 0.0} || std::abs(e.p) <= stable * e.scale) {
        locked[std::size_t(i)] = true;
        continue;
      }
      cd w;
      if (e.dp == cd{0.0, 0.0}) {
        w = cd{1e-8, 1e-8};  // nudge off a critical point
      } else {
        w = e.p / e.dp;
      }
      cd rep{0.0, 0.0};
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        cd d = z[std::size_t(i)] - z[std::size_t(j)];
        if (std::abs(d) < 1e-300) d = cd{1e-12, 1e-12};
        rep += 1.0 / d;
      }
      cd denom = 1.0 - w * rep;
      cd corr = (std::abs(denom) < 1e-300) ? w : w / denom;
      z[std::size_t(i)] -= corr;
      double lim = opt.tol * (1.0 + std::abs(z[std::size_t(i)]));
      if (std::abs(corr) <= lim)
        locked[std::size_t(i)] = true;
      else
        ++moved;
    }
    if (moved == 0) break;
  }
  if (it >= opt.max_iterations)
    throw RootFindingDiverged("aberth: iteration cap reached at degree " +
                                  std::to_string(n),
                              seed);

  for (auto& zi : z) {
    for (int s = 0; s < opt.newton_polish_steps; ++s) {
      Eval e = horner(c, zi);
      if (e.dp == cd{0.0, 0.0}) break;
      cd step = e.p / e.dp;
      if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) break;
      zi -= step;
    }
  }
  roots.insert(roots.end(), z.begin(), z.end());
  return roots;
}

}  // namespace rigidlab
