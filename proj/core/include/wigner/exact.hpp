#pragma once

#include <complex>
#include <optional>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace wigner {

using Rational = boost::multiprecision::cpp_rational;
using Integer = boost::multiprecision::cpp_int;

// Exact conversion: every finite double is a dyadic rational.
Rational rational_from_double(double x);

double to_double(const Rational& r);

// Parses "p", "p/q" or a decimal literal ("0.75", "-1e-3") exactly.
Rational parse_rational(const std::string& text);

std::string to_string(const Rational& r);

Rational rational_pow(const Rational& base, int exponent);

/// Exact Gaussian rational a + b i.
struct ComplexRational {
  Rational re{0};
  Rational im{0};

  ComplexRational() = default;
  ComplexRational(Rational real) : re(std::move(real)) {}  // NOLINT: implicit by design of the scalar
  ComplexRational(Rational real, Rational imag) : re(std::move(real)), im(std::move(imag)) {}
  ComplexRational(int real) : re(real) {}  // NOLINT

  static ComplexRational from_complex(std::complex<double> z) {
    return {rational_from_double(z.real()), rational_from_double(z.imag())};
  }

  ComplexRational& operator+=(const ComplexRational& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  ComplexRational& operator-=(const ComplexRational& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  ComplexRational& operator*=(const ComplexRational& o) {
    Rational r = re * o.re - im * o.im;
    im = re * o.im + im * o.re;
    re = std::move(r);
    return *this;
  }

  friend ComplexRational operator+(ComplexRational a, const ComplexRational& b) { return a += b; }
  friend ComplexRational operator-(ComplexRational a, const ComplexRational& b) { return a -= b; }
  friend ComplexRational operator*(ComplexRational a, const ComplexRational& b) { return a *= b; }
  friend ComplexRational operator-(const ComplexRational& a) { return {-a.re, -a.im}; }
  friend bool operator==(const ComplexRational& a, const ComplexRational& b) {
    return a.re == b.re && a.im == b.im;
  }

  bool is_zero() const { return re == 0 && im == 0; }
  ComplexRational conj() const { return {re, -im}; }
  std::complex<double> to_complex() const { return {to_double(re), to_double(im)}; }
};

std::string to_string(const ComplexRational& z);

// N^(-theta) as an exact rational, when it is one.
std::optional<Rational> exact_inverse_power(long long n, double theta);

}  // namespace wigner
