#pragma once

#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "wigner/exact.hpp"

namespace wigner {

enum class DistributionKind { gaussian, uniform, rademacher, exponential };

/// Real scalar law used for matrix entries and common noise. Draws are
/// `mean + X` with X centered:
///   gaussian     X ~ N(0, param^2)
///   uniform      X ~ U[-param, param]
///   rademacher   X = +-param with probability 1/2
///   exponential  X = E - 1/param, E ~ Exp(rate = param)
struct ScalarDistribution {
  DistributionKind kind = DistributionKind::gaussian;
  double param = 1.0;
  double mean = 0.0;

  double sample(std::mt19937_64& rng) const;
  double variance() const;
  bool symmetric() const { return kind != DistributionKind::exponential; }

  /// Exact cumulants kappa_1..kappa_max_order (index 0 holds kappa_1).
  std::vector<Rational> cumulants(int max_order) const;
};

const char* to_string(DistributionKind k);
nlohmann::json to_json(const ScalarDistribution& d);
ScalarDistribution distribution_from_json(const nlohmann::json& j);

/// Univariate moment -> cumulant recursion; moments[k-1] = E[X^k].
std::vector<Rational> cumulants_from_raw_moments(const std::vector<Rational>& moments);

}  // namespace wigner
