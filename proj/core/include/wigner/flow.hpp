#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "wigner/cumulant.hpp"
#include "wigner/flow_polynomial.hpp"
#include "wigner/graph.hpp"

namespace wigner {

// Effective potential V(t) = sum_G w_G(t) S_G with
//   S_G = sum over injective labellings phi of prod_edges (X X^dagger)_{phi(s) phi(t)}.
// The graph coefficient is C_G = |Aut G| N^(e/2) w_G. Coefficients w_G are kept
// exactly, as polynomials in N (rational exponents) to first order in n.

enum class Sector { gaussian, perturbation };
const char* to_string(Sector s);

struct FlowTruncation {
  int max_t = 4;
  int max_vertices = 4;
  int max_edges = 4;
  // Drop terms that cannot reach the single loop by order max_t. Exact for the
  // Green series; switch off to keep the full ledger.
  bool prune_irrelevant = false;
};

struct FlowKey {
  CanonicalGraphKey graph;
  int t_power = 0;
  Sector sector = Sector::gaussian;

  auto operator<=>(const FlowKey&) const = default;
  bool operator==(const FlowKey&) const = default;
};

struct FlowEventStats {
  long long laplacian_events = 0;
  long long laplacian_nature_changes = 0;   // Eulerian class altered by the first operation
  long long loop_contractions = 0;          // same edge at both ends: factor n
  long long loop_contractions_shared = 0;   // ... at a vertex carrying other edges
  long long quadratic_events = 0;
  long long lemma_violations = 0;           // joined graph Eulerian != both factors Eulerian
  long long identifications = 0;            // vertex identifications beyond the joined vertex
  long long identification_increases = 0;   // v - c grew under identification
  long long strict_cases = 0;               // identified graph Eulerian, joined graph not
  long long strict_violations = 0;          // ... without a strict drop of v - c
  long long truncated = 0;
  long long pruned = 0;

  FlowEventStats& operator+=(const FlowEventStats& o);
};

nlohmann::json to_json(const FlowEventStats& s);

struct FlowState {
  FlowTruncation truncation;
  Rational alpha_squared;
  int t_computed = 0;
  std::map<FlowKey, FlowCoefficient> terms;
  FlowEventStats stats;
  std::vector<std::string> notices;
};

/// t = 0 state: the quartic Gaussian vertex plus every perturbation graph
/// within the vertex/edge limits.
FlowState initialize(const CumulantSpec& spec, const FlowTruncation& truncation);

/// Adds the t^(k+1) coefficients: V_{k+1} = (L V_k + sum_j Q(V_j, V_{k-j})) / (k+1).
FlowState flow_step(const FlowState& state, int workers = 1);

/// initialize + flow_step up to truncation.max_t.
FlowState run_flow(const CumulantSpec& spec, const FlowTruncation& truncation, int workers = 1);

struct GreenSeries {
  // Index p holds the coefficient of 1/z^p, p = 0..max_order.
  std::vector<NPolynomial> finite_n;   // exact at every N
  std::vector<ComplexRational> limit;  // N -> infinity
  std::vector<bool> divergent;         // positive powers of N present
};

/// G(z) = 1/z + z^-2 [w_loop(1/z)]_{n^0}, where w_loop is the coefficient of the single loop.
GreenSeries green_series(const FlowState& state, int max_order);

void write_series_csv(std::ostream& os, const GreenSeries& series);

struct ScalingRecord {
  bool zero = true;
  double bound_constant = 0.0;  // |leading coefficient| of N^(v-c-e/2) C_G at order n^0
  double n_exponent = 0.0;      // its leading power of N
  bool vanishing = true;        // n_exponent < 0 (or identically zero)
  bool bounded = true;          // n_exponent <= 0
};

ScalingRecord scaling_record(const OrientedMultigraph& g, const FlowCoefficient& c);

struct LedgerEntry {
  OrientedMultigraph graph;
  int t_power = 0;
  Sector sector = Sector::gaussian;
  bool eulerian = false;
  ScalingRecord record;
  bool pass = true;
};

struct PropagationReport {
  std::vector<LedgerEntry> ledger;
  bool hypotheses_hold = true;  // every t = 0 term satisfies the bound
  bool pass = true;             // every term at every order satisfies it
  FlowEventStats stats;
};

PropagationReport check_bound_propagation(const FlowState& state);
/// Same, but throws PropagationViolation when valid inputs produce an invalid descendant.
PropagationReport verify_bound_propagation(const FlowState& state);

nlohmann::json to_json(const FlowState& state);
nlohmann::json to_json(const PropagationReport& report);

}  // namespace wigner
