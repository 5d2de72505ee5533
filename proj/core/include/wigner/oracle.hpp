#pragma once

#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "wigner/cumulant.hpp"

namespace wigner {

inline constexpr double kOracleBudget = 1e7;

struct OracleOptions {
  // Cache the partition sum per index pattern; off for audit runs.
  bool memoize = true;
  int workers = 1;
  double budget = kOracleBudget;
};

struct OracleValue {
  // Sum over all index tuples of <M_{i1 i2} ... M_{ik i1}>, exact when the spec is rational.
  std::optional<ComplexRational> raw_exact;
  // raw / N^(1 + k/2) when that power is rational.
  std::optional<ComplexRational> exact;
  std::complex<double> value;
};

/// Normalized trace moment N^-(1+k/2) sum_{i_1..i_k} <M_{i1 i2} M_{i2 i3} ... M_{ik i1}>
/// by brute force over all N^k index tuples.
OracleValue exact_trace_moment(const CumulantSpec& spec, long long N, int k, const OracleOptions& options = {});

/// Gaussian moment as a sum over pairings of the k positions, each weighted by
/// alpha^k N^(index cycles). k even, k <= 10.
Rational wick_pairing_moment(int k, long long N, const Rational& alpha_squared);
Rational wick_pairing_moment(int k, long long N, double alpha);

struct TrendResult {
  std::vector<long long> n_grid;
  std::vector<double> values;
  std::optional<std::vector<Rational>> exact_values;
  double limit = 0.0;
  std::optional<Rational> exact_limit;
};

/// Polynomial extrapolation in 1/N through every grid point, evaluated at 1/N = 0.
TrendResult asymptotic_trend(const CumulantSpec& spec, int k, std::span<const long long> n_grid,
                             const OracleOptions& options = {});

// Neville extrapolation of f(h) to h = 0.
double extrapolate_to_zero(std::span<const double> h, std::span<const double> f);
Rational extrapolate_to_zero(std::span<const Rational> h, std::span<const Rational> f);

}  // namespace wigner
