#include "wigner/distributions.hpp"

#include <cmath>

#include "wigner/error.hpp"

namespace wigner {

namespace {

Integer binomial(int n, int k) {
  Integer r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

double ScalarDistribution::sample(std::mt19937_64& rng) const {
  switch (kind) {
    case DistributionKind::gaussian: return mean + std::normal_distribution<double>(0.0, param)(rng);
    case DistributionKind::uniform: return mean + std::uniform_real_distribution<double>(-param, param)(rng);
    case DistributionKind::rademacher: return mean + (std::bernoulli_distribution(0.5)(rng) ? param : -param);
    case DistributionKind::exponential:
      return mean + std::exponential_distribution<double>(param)(rng) - 1.0 / param;
  }
  return mean;
}

double ScalarDistribution::variance() const {
  switch (kind) {
    case DistributionKind::gaussian: return param * param;
    case DistributionKind::uniform: return param * param / 3.0;
    case DistributionKind::rademacher: return param * param;
    case DistributionKind::exponential: return 1.0 / (param * param);
  }
  return 0.0;
}

std::vector<Rational> cumulants_from_raw_moments(const std::vector<Rational>& moments) {
  const int n = static_cast<int>(moments.size());
  std::vector<Rational> kappa(n);
  for (int order = 1; order <= n; ++order) {
    Rational k = moments[order - 1];
    for (int j = 1; j < order; ++j) k -= Rational(binomial(order - 1, j - 1)) * kappa[j - 1] * moments[order - j - 1];
    kappa[order - 1] = k;
  }
  return kappa;
}

std::vector<Rational> ScalarDistribution::cumulants(int max_order) const {
  if (max_order < 1) return {};
  const Rational p = rational_from_double(param);
  std::vector<Rational> kappa;
  if (kind == DistributionKind::exponential) {
    // kappa_n of Exp(rate) is (n-1)!/rate^n; centering only removes kappa_1.
    kappa.resize(max_order);
    Rational factorial(1);
    for (int order = 2; order <= max_order; ++order) {
      factorial *= (order - 1);
      kappa[order - 1] = factorial / rational_pow(p, order);
    }
  } else {
    std::vector<Rational> moments(max_order);
    Rational odd_double_factorial(1);
    for (int order = 2; order <= max_order; order += 2) {
      const int j = order / 2;
      switch (kind) {
        case DistributionKind::gaussian:
          odd_double_factorial *= (2 * j - 1);
          moments[order - 1] = odd_double_factorial * rational_pow(p, order);
          break;
        case DistributionKind::uniform: moments[order - 1] = rational_pow(p, order) / (order + 1); break;
        case DistributionKind::rademacher: moments[order - 1] = rational_pow(p, order); break;
        default: break;
      }
    }
    kappa = cumulants_from_raw_moments(moments);
  }
  kappa[0] = rational_from_double(mean);
  return kappa;
}

const char* to_string(DistributionKind k) {
  switch (k) {
    case DistributionKind::gaussian: return "gaussian";
    case DistributionKind::uniform: return "uniform";
    case DistributionKind::rademacher: return "rademacher";
    case DistributionKind::exponential: return "exponential";
  }
  return "unknown";
}

nlohmann::json to_json(const ScalarDistribution& d) {
  nlohmann::json j{{"dist", to_string(d.kind)}};
  switch (d.kind) {
    case DistributionKind::gaussian: j["sigma"] = d.param; break;
    case DistributionKind::uniform: j["half_width"] = d.param; break;
    case DistributionKind::rademacher: j["scale"] = d.param; break;
    case DistributionKind::exponential: j["rate"] = d.param; break;
  }
  if (d.mean != 0.0) j["mean"] = d.mean;
  return j;
}

ScalarDistribution distribution_from_json(const nlohmann::json& j) {
  try {
    ScalarDistribution d;
    const auto tag = j.at("dist").get<std::string>();
    if (tag == "gaussian") {
      d.kind = DistributionKind::gaussian;
      d.param = j.at("sigma").get<double>();
    } else if (tag == "uniform") {
      d.kind = DistributionKind::uniform;
      d.param = j.at("half_width").get<double>();
    } else if (tag == "rademacher") {
      d.kind = DistributionKind::rademacher;
      d.param = j.at("scale").get<double>();
    } else if (tag == "exponential") {
      d.kind = DistributionKind::exponential;
      d.param = j.at("rate").get<double>();
    } else {
      throw Error(ErrorCode::invalid_spec, "unknown distribution '" + tag + "'");
    }
    d.mean = j.value("mean", 0.0);
    if (!std::isfinite(d.param) || d.param < 0 || (d.kind == DistributionKind::exponential && d.param == 0)) {
      throw Error(ErrorCode::invalid_spec, "distribution parameter out of range");
    }
    return d;
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::invalid_spec, std::string("distribution JSON: ") + ex.what());
  }
}

}  // namespace wigner
