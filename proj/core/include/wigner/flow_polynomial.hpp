#pragma once

#include <complex>
#include <map>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "wigner/exact.hpp"

namespace wigner {

/// Finite sum of c_g N^g with rational exponents g and exact complex
/// coefficients. Zero coefficients are never stored.
class NPolynomial {
 public:
  NPolynomial() = default;

  static NPolynomial monomial(const ComplexRational& c, const Rational& exponent);
  static NPolynomial constant(const ComplexRational& c) { return monomial(c, Rational(0)); }

  NPolynomial& operator+=(const NPolynomial& o);
  NPolynomial& operator*=(const ComplexRational& c);
  friend NPolynomial operator+(NPolynomial a, const NPolynomial& b) { return a += b; }
  friend NPolynomial operator*(const NPolynomial& a, const NPolynomial& b);
  friend NPolynomial operator*(NPolynomial a, const ComplexRational& c) { return a *= c; }
  friend bool operator==(const NPolynomial&, const NPolynomial&) = default;

  // Multiplies by N^g.
  NPolynomial shifted(const Rational& g) const;
  // Multiplies by (N - m).
  NPolynomial times_n_minus(long long m) const;

  bool is_zero() const noexcept { return terms_.empty(); }
  std::optional<Rational> leading_exponent() const;
  ComplexRational coefficient(const Rational& exponent) const;
  const std::map<Rational, ComplexRational>& terms() const noexcept { return terms_; }

  std::complex<double> evaluate(double n) const;

  std::string to_string() const;

 private:
  void add(const Rational& exponent, const ComplexRational& c);

  std::map<Rational, ComplexRational> terms_;
};

nlohmann::json to_json(const NPolynomial& p);

/// Coefficient kept to first order in the replica number n: n0 + n1 * n.
struct FlowCoefficient {
  NPolynomial n0;
  NPolynomial n1;

  bool is_zero() const noexcept { return n0.is_zero() && n1.is_zero(); }
  FlowCoefficient& operator+=(const FlowCoefficient& o) {
    n0 += o.n0;
    n1 += o.n1;
    return *this;
  }
  // Product with n^2 terms dropped.
  friend FlowCoefficient operator*(const FlowCoefficient& a, const FlowCoefficient& b) {
    return {a.n0 * b.n0, a.n0 * b.n1 + a.n1 * b.n0};
  }
  FlowCoefficient scaled(const NPolynomial& p) const { return {n0 * p, n1 * p}; }
  // Multiplies by n; the n1 part would become n^2 and is dropped.
  FlowCoefficient times_n() const { return {NPolynomial{}, n0}; }
  friend bool operator==(const FlowCoefficient&, const FlowCoefficient&) = default;
};

}  // namespace wigner
