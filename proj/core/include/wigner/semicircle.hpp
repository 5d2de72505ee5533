#pragma once

#include <complex>
#include <vector>

#include "wigner/exact.hpp"

namespace wigner {

/// Limit law of the eigenvalues of M / sqrt(N): density sqrt(4a^2 - x^2) / (2 pi a^2) on [-2a, 2a].
struct SemicircleLaw {
  double alpha = 1.0;

  double density(double lambda) const;
  double cdf(double lambda) const;
  // Inverse CDF by bisection, u in [0, 1].
  double quantile(double u) const;
  double moment(int k) const;
};

Integer catalan(int m);

// 0 for odd k, Catalan(k/2) alpha^k for even k.
double semicircle_moment(int k, double alpha);
Rational semicircle_moment_exact(int k, const Rational& alpha_squared);

double semicircle_density(double lambda, double alpha);
double semicircle_cdf(double lambda, double alpha);

// Points closer than this to [-2a, 2a] on the real axis count as on the cut.
inline constexpr double kCutTolerance = 1e-12;

/// Resolvent of the semicircle law, the branch of z/(2a^2) (1 - sqrt(1 - 4a^2/z^2))
/// that behaves as 1/z at infinity. Solves G = 1 / (z - a^2 G).
std::complex<double> green_function_closed(std::complex<double> z, double alpha);

/// Coefficients of 1/z^p, p = 0..max_power, extracted numerically from the
/// closed form by a trapezoidal Cauchy integral.
std::vector<double> green_closed_series(int max_power, double alpha, int nodes = 512);

}  // namespace wigner
