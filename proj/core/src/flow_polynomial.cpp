#include "wigner/flow_polynomial.hpp"

#include <cmath>
#include <sstream>

namespace wigner {

NPolynomial NPolynomial::monomial(const ComplexRational& c, const Rational& exponent) {
  NPolynomial p;
  p.add(exponent, c);
  return p;
}

void NPolynomial::add(const Rational& exponent, const ComplexRational& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(exponent, c);
  if (inserted) return;
  it->second += c;
  if (it->second.is_zero()) terms_.erase(it);
}

NPolynomial& NPolynomial::operator+=(const NPolynomial& o) {
  for (const auto& [g, c] : o.terms_) add(g, c);
  return *this;
}

NPolynomial& NPolynomial::operator*=(const ComplexRational& c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [g, coeff] : terms_) coeff *= c;
  return *this;
}

NPolynomial operator*(const NPolynomial& a, const NPolynomial& b) {
  NPolynomial out;
  for (const auto& [ga, ca] : a.terms_) {
    for (const auto& [gb, cb] : b.terms_) out.add(ga + gb, ca * cb);
  }
  return out;
}

NPolynomial NPolynomial::shifted(const Rational& g) const {
  NPolynomial out;
  for (const auto& [e, c] : terms_) out.terms_.emplace(e + g, c);
  return out;
}

NPolynomial NPolynomial::times_n_minus(long long m) const {
  NPolynomial out = shifted(Rational(1));
  if (m != 0) out += NPolynomial(*this) * ComplexRational(Rational(-m));
  return out;
}

std::optional<Rational> NPolynomial::leading_exponent() const {
  if (terms_.empty()) return std::nullopt;
  return terms_.rbegin()->first;
}

ComplexRational NPolynomial::coefficient(const Rational& exponent) const {
  auto it = terms_.find(exponent);
  return it == terms_.end() ? ComplexRational{} : it->second;
}

std::complex<double> NPolynomial::evaluate(double n) const {
  std::complex<double> total;
  for (const auto& [g, c] : terms_) total += c.to_complex() * std::pow(n, to_double(g));
  return total;
}

std::string NPolynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    if (!first) os << " + ";
    first = false;
    os << '(' << wigner::to_string(it->second) << ")";
    if (it->first != 0) os << " N^" << wigner::to_string(it->first);
  }
  return os.str();
}

nlohmann::json to_json(const NPolynomial& p) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& [g, c] : p.terms()) {
    out.push_back({{"exponent", to_string(g)}, {"coefficient", to_string(c)}, {"value", c.to_complex().real()}});
  }
  return out;
}

}  // namespace wigner
