#include "wigner/oracle.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <numeric>

#include "wigner/error.hpp"
#include "wigner/parallel.hpp"

namespace wigner {

namespace {

struct Accumulator {
  std::map<std::vector<int>, long long> pattern_counts;
  ComplexRational exact;
  std::complex<double> value;
  bool exact_ok = true;
};

std::vector<EntryIndex> cycle_entries(std::span<const long long> tuple) {
  const std::size_t k = tuple.size();
  std::vector<EntryIndex> entries(k);
  for (std::size_t p = 0; p < k; ++p) entries[p] = {tuple[p], tuple[(p + 1) % k]};
  return entries;
}

// Advances the odometer over positions 1..k-1; false once exhausted.
bool next_tuple(std::vector<long long>& tuple, long long N) {
  for (std::size_t p = tuple.size(); p-- > 1;) {
    if (++tuple[p] <= N) return true;
    tuple[p] = 1;
  }
  return false;
}

template <class T>
T neville(std::span<const T> h, std::span<const T> f) {
  std::vector<T> p(f.begin(), f.end());
  const std::size_t n = p.size();
  for (std::size_t level = 1; level < n; ++level) {
    for (std::size_t i = 0; i + level < n; ++i) {
      // value at 0 of the interpolant through points i..i+level
      p[i] = (h[i + level] * p[i] - h[i] * p[i + 1]) / (h[i + level] - h[i]);
    }
  }
  return p[0];
}

}  // namespace

OracleValue exact_trace_moment(const CumulantSpec& spec, long long N, int k, const OracleOptions& options) {
  if (N < 1 || k < 1) throw Error(ErrorCode::invalid_argument, "need N >= 1 and k >= 1");
  const double tuples = std::pow(double(N), double(k));
  if (tuples > options.budget) {
    throw Error(ErrorCode::budget_exceeded,
                "N^k = " + std::to_string(tuples) + " exceeds the brute-force budget");
  }
  const bool memoize = options.memoize && !spec.index_dependent();

  // The first index is split across workers.
  std::vector<Accumulator> partial(static_cast<std::size_t>(N));
  parallel_for(static_cast<int>(N), options.workers, [&](int first) {
    Accumulator& acc = partial[first];
    std::vector<long long> tuple(k, 1);
    tuple[0] = first + 1;
    do {
      if (memoize) {
        ++acc.pattern_counts[restricted_growth_string(tuple)];
        continue;
      }
      const auto entries = cycle_entries(tuple);
      acc.value += moments_from_cumulants(entries, spec, N);
      if (acc.exact_ok) {
        if (auto m = moments_from_cumulants_exact(entries, spec, N)) {
          acc.exact += *m;
        } else {
          acc.exact_ok = false;
        }
      }
    } while (next_tuple(tuple, N));
  });

  ComplexRational raw;
  std::complex<double> value;
  bool exact_ok = true;
  if (memoize) {
    std::map<std::vector<int>, long long> counts;
    for (const auto& acc : partial) {
      for (const auto& [pattern, count] : acc.pattern_counts) counts[pattern] += count;
    }
    for (const auto& [pattern, count] : counts) {
      // Any tuple with this pattern: label + 1 is a valid index since labels < N.
      std::vector<long long> tuple(pattern.begin(), pattern.end());
      for (auto& t : tuple) ++t;
      const auto entries = cycle_entries(tuple);
      value += double(count) * moments_from_cumulants(entries, spec, N);
      if (exact_ok) {
        if (auto m = moments_from_cumulants_exact(entries, spec, N)) {
          raw += ComplexRational(Rational(count)) * *m;
        } else {
          exact_ok = false;
        }
      }
    }
  } else {
    for (const auto& acc : partial) {
      value += acc.value;
      exact_ok = exact_ok && acc.exact_ok;
      if (exact_ok) raw += acc.exact;
    }
  }

  OracleValue out;
  out.value = value / std::pow(double(N), 1.0 + k / 2.0);
  if (exact_ok) {
    out.raw_exact = raw;
    out.value = raw.to_complex() / std::pow(double(N), 1.0 + k / 2.0);
    if (auto scale = exact_inverse_power(N, 1.0 + k / 2.0)) out.exact = raw * ComplexRational(*scale);
  }
  return out;
}

Rational wick_pairing_moment(int k, long long N, const Rational& alpha_squared) {
  if (k % 2 != 0) throw Error(ErrorCode::odd_order, "pairings need an even number of factors");
  if (k < 2 || k > 10) throw Error(ErrorCode::invalid_argument, "k must be in 2..10");
  // Factor p is M_{i_p i_{p+1}}; pairing p with q forces i_p = i_{q+1} and i_{p+1} = i_q.
  // The free index sums give N^(cycles of gamma o pi), gamma(p) = p + 1.
  Integer total = 0;
  std::vector<int> partner(k, -1);
  std::function<void()> recurse = [&] {
    int first = -1;
    for (int p = 0; p < k; ++p) {
      if (partner[p] < 0) {
        first = p;
        break;
      }
    }
    if (first < 0) {
      std::vector<bool> seen(k, false);
      int cycles = 0;
      for (int s = 0; s < k; ++s) {
        if (seen[s]) continue;
        ++cycles;
        for (int p = s; !seen[p]; p = (partner[p] + 1) % k) seen[p] = true;
      }
      Integer term = 1;
      for (int c = 0; c < cycles; ++c) term *= N;
      total += term;
      return;
    }
    for (int q = first + 1; q < k; ++q) {
      if (partner[q] >= 0) continue;
      partner[first] = q;
      partner[q] = first;
      recurse();
      partner[first] = partner[q] = -1;
    }
  };
  recurse();
  Integer norm = 1;
  for (int c = 0; c < 1 + k / 2; ++c) norm *= N;
  return Rational(total, norm) * rational_pow(alpha_squared, k / 2);
}

Rational wick_pairing_moment(int k, long long N, double alpha) {
  const Rational a = rational_from_double(alpha);
  return wick_pairing_moment(k, N, a * a);
}

double extrapolate_to_zero(std::span<const double> h, std::span<const double> f) {
  if (h.size() != f.size() || h.empty()) throw Error(ErrorCode::invalid_argument, "mismatched extrapolation data");
  return neville<double>(h, f);
}

Rational extrapolate_to_zero(std::span<const Rational> h, std::span<const Rational> f) {
  if (h.size() != f.size() || h.empty()) throw Error(ErrorCode::invalid_argument, "mismatched extrapolation data");
  return neville<Rational>(h, f);
}

TrendResult asymptotic_trend(const CumulantSpec& spec, int k, std::span<const long long> n_grid,
                             const OracleOptions& options) {
  if (n_grid.empty()) throw Error(ErrorCode::empty_grid, "empty N grid");
  for (std::size_t i = 1; i < n_grid.size(); ++i) {
    if (n_grid[i] <= n_grid[i - 1]) throw Error(ErrorCode::invalid_argument, "N grid must be strictly increasing");
  }
  TrendResult out;
  out.n_grid.assign(n_grid.begin(), n_grid.end());
  std::vector<Rational> exact_values;
  bool exact = true;
  for (long long N : n_grid) {
    const auto v = exact_trace_moment(spec, N, k, options);
    out.values.push_back(v.value.real());
    if (exact && v.exact) {
      exact_values.push_back(v.exact->re);
    } else {
      exact = false;
    }
  }
  std::vector<double> h;
  for (long long N : n_grid) h.push_back(1.0 / double(N));
  out.limit = extrapolate_to_zero(h, out.values);
  if (exact) {
    std::vector<Rational> hr;
    for (long long N : n_grid) hr.push_back(Rational(1, N));
    out.exact_limit = extrapolate_to_zero(hr, exact_values);
    out.limit = to_double(*out.exact_limit);
    out.exact_values = std::move(exact_values);
  }
  return out;
}

}  // namespace wigner
