#include "wigner/exact.hpp"

#include <cmath>
#include <stdexcept>

#include "wigner/error.hpp"

namespace wigner {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_argument: return "InvalidArgument";
    case ErrorCode::invalid_spec: return "InvalidSpec";
    case ErrorCode::limit_exceeded: return "LimitExceeded";
    case ErrorCode::budget_exceeded: return "BudgetExceeded";
    case ErrorCode::not_connected: return "NotConnected";
    case ErrorCode::insufficient_samples: return "InsufficientSamples";
    case ErrorCode::empty_input: return "EmptyInput";
    case ErrorCode::empty_grid: return "EmptyGrid";
    case ErrorCode::unsupported: return "Unsupported";
    case ErrorCode::unbounded_potential: return "UnboundedPotential";
    case ErrorCode::backend_failure: return "BackendFailure";
    case ErrorCode::on_cut: return "OnCut";
    case ErrorCode::odd_order: return "OddOrder";
    case ErrorCode::truncation_too_small: return "TruncationTooSmall";
    case ErrorCode::insufficient_order: return "InsufficientOrder";
    case ErrorCode::propagation_violation: return "PropagationViolation";
    case ErrorCode::io_failure: return "IoFailure";
  }
  return "Unknown";
}

Rational rational_from_double(double x) {
  if (!std::isfinite(x)) throw Error(ErrorCode::invalid_argument, "non-finite value has no rational form");
  if (x == 0.0) return Rational(0);
  int exponent = 0;
  const double mantissa = std::frexp(x, &exponent);  // x = mantissa * 2^exponent, |mantissa| in [0.5, 1)
  const auto scaled = static_cast<long long>(std::ldexp(mantissa, 53));
  exponent -= 53;
  Integer numerator(scaled);
  Integer denominator(1);
  if (exponent >= 0) {
    numerator <<= exponent;
  } else {
    denominator <<= -exponent;
  }
  return Rational(numerator, denominator);
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

Rational parse_rational(const std::string& text) {
  const auto slash = text.find('/');
  if (slash != std::string::npos) {
    Integer p(text.substr(0, slash));
    Integer q(text.substr(slash + 1));
    if (q == 0) throw Error(ErrorCode::invalid_argument, "zero denominator in '" + text + "'");
    return Rational(p, q);
  }
  // Decimal literal: split mantissa and exponent so "0.1" parses to 1/10, not its binary neighbour.
  std::string mantissa = text;
  long exp10 = 0;
  if (const auto e = text.find_first_of("eE"); e != std::string::npos) {
    mantissa = text.substr(0, e);
    exp10 = std::stol(text.substr(e + 1));
  }
  bool negative = false;
  if (!mantissa.empty() && (mantissa[0] == '-' || mantissa[0] == '+')) {
    negative = mantissa[0] == '-';
    mantissa.erase(0, 1);
  }
  std::string digits;
  for (char c : mantissa) {
    if (c == '.') {
      continue;
    }
    if (c < '0' || c > '9') throw Error(ErrorCode::invalid_argument, "not a number: '" + text + "'");
    digits.push_back(c);
  }
  if (digits.empty()) throw Error(ErrorCode::invalid_argument, "not a number: '" + text + "'");
  if (const auto dot = mantissa.find('.'); dot != std::string::npos) {
    exp10 -= static_cast<long>(mantissa.size() - dot - 1);
  }
  Integer value(digits);
  if (negative) value = -value;
  Integer scale = boost::multiprecision::pow(Integer(10), static_cast<unsigned>(std::labs(exp10)));
  return exp10 >= 0 ? Rational(value * scale) : Rational(value, scale);
}

std::string to_string(const Rational& r) {
  const auto num = boost::multiprecision::numerator(r);
  const auto den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

std::string to_string(const ComplexRational& z) {
  if (z.im == 0) return to_string(z.re);
  if (z.re == 0) return to_string(z.im) + "i";
  return to_string(z.re) + (z.im > 0 ? "+" : "") + to_string(z.im) + "i";
}

Rational rational_pow(const Rational& base, int exponent) {
  if (exponent < 0) {
    if (base == 0) throw Error(ErrorCode::invalid_argument, "zero to a negative power");
    return Rational(1) / rational_pow(base, -exponent);
  }
  Rational result(1);
  Rational b = base;
  auto e = static_cast<unsigned>(exponent);
  while (e != 0) {
    if (e & 1U) result *= b;
    b *= b;
    e >>= 1U;
  }
  return result;
}

std::optional<Rational> exact_inverse_power(long long n, double theta) {
  if (n == 1) return Rational(1);
  if (theta == std::floor(theta) && std::fabs(theta) < 1e6) {
    return rational_pow(Rational(n), -static_cast<int>(theta));
  }
  // Half-integer exponent on a perfect square.
  const double twice = 2.0 * theta;
  if (twice == std::floor(twice)) {
    const auto root = static_cast<long long>(std::llround(std::sqrt(static_cast<double>(n))));
    if (root * root == n) return rational_pow(Rational(root), -static_cast<int>(twice));
  }
  return std::nullopt;
}

}  // namespace wigner
