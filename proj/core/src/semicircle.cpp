#include "wigner/semicircle.hpp"

#include <cmath>
#include <numbers>

#include "wigner/error.hpp"

namespace wigner {

Integer catalan(int m) {
  Integer c = 1;
  for (int i = 0; i < m; ++i) c = c * 2 * (2 * i + 1) / (i + 2);
  return c;
}

double semicircle_moment(int k, double alpha) {
  if (k < 0) throw Error(ErrorCode::invalid_argument, "negative moment order");
  if (k % 2 != 0) return 0.0;
  return catalan(k / 2).convert_to<double>() * std::pow(alpha, k);
}

Rational semicircle_moment_exact(int k, const Rational& alpha_squared) {
  if (k < 0) throw Error(ErrorCode::invalid_argument, "negative moment order");
  if (k % 2 != 0) return 0;
  return Rational(catalan(k / 2)) * rational_pow(alpha_squared, k / 2);
}

double semicircle_density(double lambda, double alpha) {
  const double r2 = 4 * alpha * alpha - lambda * lambda;
  if (r2 <= 0.0) return 0.0;
  return std::sqrt(r2) / (2 * std::numbers::pi * alpha * alpha);
}

double semicircle_cdf(double lambda, double alpha) {
  const double edge = 2 * alpha;
  if (lambda <= -edge) return 0.0;
  if (lambda >= edge) return 1.0;
  const double x = lambda / edge;
  return 0.5 + (x * std::sqrt(1 - x * x) + std::asin(x)) / std::numbers::pi;
}

double SemicircleLaw::density(double lambda) const { return semicircle_density(lambda, alpha); }
double SemicircleLaw::cdf(double lambda) const { return semicircle_cdf(lambda, alpha); }
double SemicircleLaw::moment(int k) const { return semicircle_moment(k, alpha); }

double SemicircleLaw::quantile(double u) const {
  if (u <= 0.0) return -2 * alpha;
  if (u >= 1.0) return 2 * alpha;
  double lo = -2 * alpha, hi = 2 * alpha;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * alpha; ++it) {
    const double mid = 0.5 * (lo + hi);
    (cdf(mid) < u ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

std::complex<double> green_function_closed(std::complex<double> z, double alpha) {
  const double a2 = alpha * alpha;
  if (std::abs(z.imag()) < kCutTolerance && std::abs(z.real()) <= 2 * std::abs(alpha) + kCutTolerance) {
    throw Error(ErrorCode::on_cut, "z lies on the support of the semicircle");
  }
  // 2 / (z (1 + sqrt(1 - 4a^2/z^2))) avoids the cancellation of the textbook form.
  const std::complex<double> root = std::sqrt(1.0 - 4.0 * a2 / (z * z));
  return 2.0 / (z * (1.0 + root));
}

std::vector<double> green_closed_series(int max_power, double alpha, int nodes) {
  if (max_power < 0) return {};
  // G(1/w) is analytic in w for |w| < 1/(2a); sample on |w| = r.
  const double r = alpha > 0 ? 0.4 / alpha : 0.5;
  std::vector<std::complex<double>> acc(max_power + 1);
  for (int m = 0; m < nodes; ++m) {
    const std::complex<double> w = std::polar(r, 2 * std::numbers::pi * (m + 0.5) / nodes);
    const std::complex<double> g = green_function_closed(1.0 / w, alpha);
    std::complex<double> wp = 1.0;
    for (int p = 0; p <= max_power; ++p) {
      acc[p] += g / wp;
      wp *= w;
    }
  }
  std::vector<double> out(max_power + 1);
  for (int p = 0; p <= max_power; ++p) out[p] = acc[p].real() / nodes;
  return out;
}

}  // namespace wigner
