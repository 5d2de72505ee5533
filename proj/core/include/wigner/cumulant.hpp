#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "wigner/exact.hpp"
#include "wigner/graph.hpp"
#include "wigner/matrix.hpp"
#include "wigner/partitions.hpp"

namespace wigner {

/// Factor M_{row,col}; indices are 1-based.
struct EntryIndex {
  long long row = 1;
  long long col = 1;
  auto operator<=>(const EntryIndex&) const = default;
};

enum class SupportPattern { all_ones, off_diagonal };

const char* to_string(SupportPattern p);
SupportPattern support_pattern_from_string(const std::string& s);
bool supported_on(const OrientedMultigraph& g, SupportPattern p);

/// Index-uniform cumulant on one graph: amplitude * N^(-n_exponent).
struct PerturbationTerm {
  CanonicalGraphKey graph;
  ComplexRational amplitude;
  double n_exponent = 0.0;
};

/// Index-uniform cumulant on every graph with `order` edges supported on
/// `pattern`. This is how a shared scalar noise spreads over the entries.
struct PatternPerturbation {
  int order = 2;
  SupportPattern pattern = SupportPattern::all_ones;
  ComplexRational amplitude;
  double n_exponent = 0.0;
};

// Extension point for index-dependent cumulants; vertex_indices are 1-based and
// pairwise distinct. Only the floating-point evaluation path consults it.
using IndexCumulantFn = std::function<std::optional<std::complex<double>>(
    const OrientedMultigraph& g, std::span<const long long> vertex_indices, long long N)>;

/// All joint cumulants of the entries of a random Hermitian matrix: the Gaussian
/// part <M_ij M_kl>_c = alpha^2 delta_il delta_jk plus graph-indexed perturbations.
/// Conjugate terms (reversed graph, conjugated amplitude) are generated on
/// construction when absent.
class CumulantSpec {
 public:
  explicit CumulantSpec(double alpha = 0.0, std::vector<PerturbationTerm> terms = {},
                        std::vector<PatternPerturbation> pattern_terms = {});

  static CumulantSpec gaussian(double alpha) { return CumulantSpec(alpha); }
  // Exact variance alpha^2 for callers that know it as a rational.
  static CumulantSpec with_alpha_squared(Rational alpha_squared, std::vector<PerturbationTerm> terms = {},
                                         std::vector<PatternPerturbation> pattern_terms = {});

  double alpha() const noexcept { return alpha_; }
  const Rational& alpha_squared() const noexcept { return alpha_squared_; }
  const std::vector<PerturbationTerm>& terms() const noexcept { return terms_; }
  const std::vector<PatternPerturbation>& pattern_terms() const noexcept { return pattern_terms_; }
  bool has_perturbations() const noexcept { return !terms_.empty() || !pattern_terms_.empty() || index_fn_; }

  void set_index_dependent(IndexCumulantFn fn) { index_fn_ = std::move(fn); }
  bool index_dependent() const noexcept { return static_cast<bool>(index_fn_); }

  // Gaussian part C'_G: alpha^2 on the two-cycle and on the double loop.
  Rational gaussian_cumulant(const CanonicalGraphKey& key) const;

  // Perturbation part C''_G, uniform in the vertex indices.
  std::optional<ComplexRational> perturbation_exact(const OrientedMultigraph& g, const CanonicalGraphKey& key,
                                                    long long N) const;
  std::complex<double> perturbation_value(const OrientedMultigraph& g, const CanonicalGraphKey& key,
                                          long long N) const;

  // Full joint cumulant of the listed factors (all indices in [1, N]).
  std::optional<ComplexRational> block_cumulant_exact(std::span<const EntryIndex> block, long long N) const;
  std::complex<double> block_cumulant_value(std::span<const EntryIndex> block, long long N) const;

  /// Explicit graph terms for every pattern term, restricted to graphs within the limits.
  std::vector<PerturbationTerm> materialized_terms(int max_vertices, int max_edges) const;

  static const CanonicalGraphKey& two_cycle_key();
  static const CanonicalGraphKey& double_loop_key();

 private:
  void init(std::vector<PerturbationTerm> terms);

  double alpha_;
  Rational alpha_squared_;
  std::vector<PerturbationTerm> terms_;
  std::vector<PatternPerturbation> pattern_terms_;
  std::unordered_map<CanonicalGraphKey, std::size_t, CanonicalGraphKeyHash> term_index_;
  IndexCumulantFn index_fn_;
};

nlohmann::json to_json(const CumulantSpec& spec);
CumulantSpec cumulant_spec_from_json(const nlohmann::json& j);

// ---------------------------------------------------------------------------
// Moment <-> cumulant calculus over set partitions of the factor positions.

/// moment = sum over partitions pi of prod over blocks B of cumulant(B).
template <class Value, class BlockCumulant>
Value moment_from_cumulants(int factor_count, BlockCumulant&& cumulant_of_positions) {
  Value total{};
  for_each_set_partition(factor_count, [&](const SetPartition& partition) {
    Value product(1);
    for (const auto& block : partition) {
      product *= cumulant_of_positions(std::span<const int>(block));
      if (product == Value{}) return;
    }
    total += product;
  });
  return total;
}

/// Moebius inversion: cumulant = sum over pi of mu(pi) prod over blocks of moment(B).
template <class Value, class BlockMoment>
Value cumulant_from_moments(int factor_count, BlockMoment&& moment_of_positions) {
  Value total{};
  for_each_set_partition(factor_count, [&](const SetPartition& partition) {
    Value product(static_cast<int>(mobius_coefficient(static_cast<int>(partition.size()))));
    for (const auto& block : partition) product *= moment_of_positions(std::span<const int>(block));
    total += product;
  });
  return total;
}

std::optional<ComplexRational> moments_from_cumulants_exact(std::span<const EntryIndex> entries,
                                                            const CumulantSpec& spec, long long N);
std::complex<double> moments_from_cumulants(std::span<const EntryIndex> entries, const CumulantSpec& spec,
                                            long long N);

using MomentFunction = std::function<std::complex<double>(std::span<const EntryIndex>)>;
std::complex<double> cumulants_from_moments(const MomentFunction& moment, std::span<const EntryIndex> entries);

using ExactMomentFunction = std::function<ComplexRational(std::span<const EntryIndex>)>;
ComplexRational cumulants_from_moments_exact(const ExactMomentFunction& moment, std::span<const EntryIndex> entries);

struct CumulantEstimate {
  std::complex<double> value;
  double standard_error = 0.0;
};

inline constexpr int kMaxEstimatedCumulantOrder = 4;

/// Plug-in cumulant estimate (sample moments of all sub-products, Moebius
/// combined); the standard error comes from disjoint batch means.
CumulantEstimate estimate_cumulant(std::span<const HermitianMatrix> samples, std::span<const EntryIndex> entries,
                                   int batches = 10);

// ---------------------------------------------------------------------------
// Scaling-condition checker.

enum class Verdict { vanishes, bounded, violates };
const char* to_string(Verdict v);

// Finite-N proxies for the limits: log-log slope below -0.1 counts as vanishing,
// up to +0.05 as bounded.
inline constexpr double kVanishingSlope = -0.1;
inline constexpr double kBoundedSlope = 0.05;

struct ConditionRecord {
  OrientedMultigraph graph;
  bool eulerian = false;
  Rational exponent;  // v - c - e/2
  std::vector<double> scaled_values;
  std::optional<double> slope;  // empty when C'' vanishes identically
  Verdict verdict = Verdict::vanishes;
  std::string bullet;
  bool pass = true;
};

struct ConditionReport {
  std::vector<long long> n_grid;
  std::vector<ConditionRecord> records;
  bool all_pass = true;
};

ConditionReport theorem_condition_report(const CumulantSpec& spec, std::span<const OrientedMultigraph> graphs,
                                         std::span<const long long> n_grid);

nlohmann::json to_json(const ConditionReport& report);

}  // namespace wigner
