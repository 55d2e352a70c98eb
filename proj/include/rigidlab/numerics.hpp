#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace rigidlab::num {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kPi = 3.14159265358979323846;

double log_sum_exp(std::span<const double> log_terms);

// log(e^a + e^b), tolerant of -inf.
double log_add(double a, double b);

double kahan_sum(std::span<const double> xs);

// Sample mean/variance with standard errors. se_var uses the fourth central
// moment so it is valid for non-Gaussian samples.
struct MeanVar {
  std::size_t n = 0;
  double mean = 0.0;
  double var = 0.0;      // unbiased
  double se_mean = 0.0;
  double se_var = 0.0;
  static MeanVar from(std::span<const double> xs);
};

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};
LineFit fit_line(std::span<const double> x, std::span<const double> y);

struct QuadOptions {
  double rel_tol = 1e-12;
  double abs_tol = 0.0;
  int max_depth = 52;
};

// Adaptive Gauss-Kronrod G7/K15 on a finite interval.
double integrate(const std::function<double(double)>& f, double a, double b,
                 QuadOptions opt = {});

// Same, with mandatory subdivision points (kinks, indicator edges).
double integrate_with_breaks(const std::function<double(double)>& f, double a,
                             double b, std::span<const double> breaks,
                             QuadOptions opt = {});

// log of integral of exp(log_f) over a finite interval. The integrand is
// rescaled by its max on a scan grid so tails may underflow harmlessly.
double integrate_log(const std::function<double(double)>& log_f, double a,
                     double b, QuadOptions opt = {});

// log of integral of exp(log_f(x)) dx over [x_lo, x_hi] (x_hi may be +inf,
// x_lo >= 0). Works in u = log x around the integrand mode; intended for
// unimodal moment-type integrands. Throws DivergentMoment when the integrand
// fails to decay.
double integrate_log_mode(const std::function<double(double)>& log_f,
                          double x_lo, double x_hi, QuadOptions opt = {});

// Regularized incomplete gamma functions P(s,x), Q(s,x) = 1 - P(s,x).
double regularized_gamma_p(double s, double x);
double regularized_gamma_q(double s, double x);

// Li2(x) for x in [0,1]; Li2(1) = pi^2/6.
double dilog_unit(double x);

double normal_cdf(double x);

// Two-sample Kolmogorov-Smirnov p-value (asymptotic).
double ks_two_sample_pvalue(std::vector<double> a, std::vector<double> b);

// Upper tail of the chi-square distribution with df degrees of freedom.
double chi_square_pvalue(double stat, double df);

}  // namespace rigidlab::num
