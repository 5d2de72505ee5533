#include "wigner/flow.hpp"

#include <cmath>
#include <functional>
#include <ostream>

#include "wigner/error.hpp"
#include "wigner/parallel.hpp"

namespace wigner {

namespace {

struct Labeled {
  int vertices = 0;
  std::vector<Edge> edges;
};

struct Term {
  FlowKey key;
  OrientedMultigraph graph;
  FlowCoefficient coefficient;
};

struct Emission {
  std::vector<std::pair<FlowKey, FlowCoefficient>> out;
  FlowEventStats stats;
};

std::vector<int> balances(int vertices, const std::vector<Edge>& edges) {
  std::vector<int> b(vertices, 0);
  for (const auto& e : edges) {
    ++b[e.source];
    --b[e.target];
  }
  return b;
}

bool balanced(int vertices, const std::vector<Edge>& edges) {
  for (int x : balances(vertices, edges)) {
    if (x != 0) return false;
  }
  return true;
}

// v - c of the graph spanned by the edges, isolated vertices ignored (they add
// one vertex and one component).
int rank_of(int vertices, const std::vector<Edge>& edges) {
  std::vector<int> parent(vertices);
  for (int i = 0; i < vertices; ++i) parent[i] = i;
  std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  int rank = 0;
  for (const auto& e : edges) {
    const int a = find(e.source), b = find(e.target);
    if (a != b) {
      parent[a] = b;
      ++rank;
    }
  }
  return rank;
}

class Emitter {
 public:
  Emitter(const FlowTruncation& truncation, int target_t, Emission& sink)
      : truncation_(truncation), target_t_(target_t), sink_(sink) {}

  // Removes isolated vertices (each summed freely over the remaining indices),
  // applies truncation and canonicalizes.
  void emit(const Labeled& g, Sector sector, FlowCoefficient c) {
    if (c.is_zero() || g.edges.empty()) return;  // constants never reach a derivative
    std::vector<int> degree(g.vertices, 0);
    for (const auto& e : g.edges) {
      ++degree[e.source];
      ++degree[e.target];
    }
    std::vector<int> relabel(g.vertices, -1);
    int kept = 0;
    for (int v = 0; v < g.vertices; ++v) {
      if (degree[v] > 0) relabel[v] = kept++;
    }
    // Free sum over each isolated vertex: injective labels avoid the others.
    for (int v = g.vertices - 1; v >= kept; --v) {
      c = c.scaled(NPolynomial::constant(1).times_n_minus(v));
    }
    if (c.is_zero()) return;
    std::vector<Edge> edges;
    edges.reserve(g.edges.size());
    for (const auto& e : g.edges) edges.push_back({relabel[e.source], relabel[e.target]});
    const int e = static_cast<int>(edges.size());
    if (truncation_.prune_irrelevant) {
      // Each order removes at most one edge and one vertex on the way to the loop.
      const int remaining = truncation_.max_t - target_t_;
      if (e - 1 > remaining || kept - 1 > remaining) {
        ++sink_.stats.pruned;
        return;
      }
    }
    if (kept > truncation_.max_vertices || e > truncation_.max_edges) {
      ++sink_.stats.truncated;
      return;
    }
    OrientedMultigraph graph(kept, std::move(edges));
    sink_.out.emplace_back(FlowKey{canonical_key(graph), target_t_, sector}, std::move(c));
  }

 private:
  const FlowTruncation& truncation_;
  int target_t_;
  Emission& sink_;
};

std::vector<Edge> without(const std::vector<Edge>& edges, std::size_t a, std::size_t b = SIZE_MAX) {
  std::vector<Edge> out;
  out.reserve(edges.size());
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (i != a && i != b) out.push_back(edges[i]);
  }
  return out;
}

// sum_{i,a} d^2/dX_{ia} dXbar_{ia} on one term: an outgoing half edge (from e1)
// and an incoming half edge (from e2) at the same vertex are removed and the
// remaining ends reconnected; e1 == e2 is a loop whose replica sum gives n.
void laplacian(const Term& term, Emitter& emitter, FlowEventStats& stats) {
  const auto& g = term.graph;
  const auto& edges = g.edges();
  const bool eulerian = is_eulerian(g);
  for (int v = 0; v < g.vertex_count(); ++v) {
    for (std::size_t e1 = 0; e1 < edges.size(); ++e1) {
      if (edges[e1].source != v) continue;
      for (std::size_t e2 = 0; e2 < edges.size(); ++e2) {
        if (edges[e2].target != v) continue;
        ++stats.laplacian_events;
        Labeled out{g.vertex_count(), {}};
        FlowCoefficient c = term.coefficient;
        if (e1 == e2) {
          ++stats.loop_contractions;
          if (g.in_degree(v) + g.out_degree(v) > 2) ++stats.loop_contractions_shared;
          out.edges = without(edges, e1);
          c = c.times_n();
        } else {
          out.edges = without(edges, e1, e2);
          out.edges.push_back({edges[e2].source, edges[e1].target});
        }
        if (balanced(out.vertices, out.edges) != eulerian) ++stats.laplacian_nature_changes;
        emitter.emit(out, term.key.sector, std::move(c));
      }
    }
  }
}

// sum_{i,a} dA/dX_{ia} dB/dXbar_{ia}: an outgoing half edge of A at v1 and an
// incoming half edge of B at v2 are removed, v1 and v2 carry the same index,
// and the loose ends form a new edge. Vertices of A and B may also share an
// index: every partial matching of the remaining vertices is summed.
void quadratic(const Term& a, const Term& b, Emitter& emitter, FlowEventStats& stats) {
  const auto& ga = a.graph;
  const auto& gb = b.graph;
  const int na = ga.vertex_count(), nb = gb.vertex_count();
  const Sector sector =
      (a.key.sector == Sector::gaussian && b.key.sector == Sector::gaussian) ? Sector::gaussian : Sector::perturbation;
  const bool both_eulerian = is_eulerian(ga) && is_eulerian(gb);
  const FlowCoefficient product = a.coefficient * b.coefficient;
  if (product.is_zero()) return;

  for (int v1 = 0; v1 < na; ++v1) {
    for (std::size_t e1 = 0; e1 < ga.edges().size(); ++e1) {
      if (ga.edges()[e1].source != v1) continue;
      for (int v2 = 0; v2 < nb; ++v2) {
        for (std::size_t e2 = 0; e2 < gb.edges().size(); ++e2) {
          if (gb.edges()[e2].target != v2) continue;
          ++stats.quadratic_events;

          // partner[u] for u in B: vertex of A it is identified with, or -1.
          std::vector<int> partner(nb, -1);
          partner[v2] = v1;
          std::vector<bool> used(na, false);
          used[v1] = true;

          auto build = [&]() {
            Labeled out;
            std::vector<int> map(nb);
            int next = na;
            for (int u = 0; u < nb; ++u) map[u] = partner[u] >= 0 ? partner[u] : next++;
            out.vertices = next;
            out.edges = without(ga.edges(), e1);
            for (std::size_t k = 0; k < gb.edges().size(); ++k) {
              if (k == e2) continue;
              out.edges.push_back({map[gb.edges()[k].source], map[gb.edges()[k].target]});
            }
            out.edges.push_back({map[gb.edges()[e2].source], ga.edges()[e1].target});
            return out;
          };

          const Labeled joined = build();
          const bool joined_eulerian = balanced(joined.vertices, joined.edges);
          if (joined_eulerian != both_eulerian) ++stats.lemma_violations;
          const int joined_rank = rank_of(joined.vertices, joined.edges);
          emitter.emit(joined, sector, product);

          // Further identifications: B vertices u != v2 in increasing order.
          std::function<void(int, bool)> extend = [&](int u, bool any) {
            if (u == nb) {
              if (!any) return;
              ++stats.identifications;
              const Labeled merged = build();
              const int rank = rank_of(merged.vertices, merged.edges);
              if (rank > joined_rank) ++stats.identification_increases;
              if (balanced(merged.vertices, merged.edges) && !joined_eulerian) {
                ++stats.strict_cases;
                if (rank >= joined_rank) ++stats.strict_violations;
              }
              emitter.emit(merged, sector, product);
              return;
            }
            if (u == v2) {
              extend(u + 1, any);
              return;
            }
            extend(u + 1, any);
            for (int w = 0; w < na; ++w) {
              if (used[w]) continue;
              used[w] = true;
              partner[u] = w;
              extend(u + 1, true);
              partner[u] = -1;
              used[w] = false;
            }
          };
          extend(0, false);
        }
      }
    }
  }
}

std::vector<std::vector<Term>> terms_by_order(const FlowState& state) {
  std::vector<std::vector<Term>> by_t(state.t_computed + 1);
  for (const auto& [key, c] : state.terms) {
    if (key.t_power <= state.t_computed) by_t[key.t_power].push_back({key, graph_from_key(key.graph), c});
  }
  return by_t;
}

const CanonicalGraphKey& loop_key() {
  static const CanonicalGraphKey key = canonical_key(OrientedMultigraph(1, {{0, 0}}));
  return key;
}

}  // namespace

const char* to_string(Sector s) { return s == Sector::gaussian ? "gaussian" : "perturbation"; }

FlowEventStats& FlowEventStats::operator+=(const FlowEventStats& o) {
  laplacian_events += o.laplacian_events;
  laplacian_nature_changes += o.laplacian_nature_changes;
  loop_contractions += o.loop_contractions;
  loop_contractions_shared += o.loop_contractions_shared;
  quadratic_events += o.quadratic_events;
  lemma_violations += o.lemma_violations;
  identifications += o.identifications;
  identification_increases += o.identification_increases;
  strict_cases += o.strict_cases;
  strict_violations += o.strict_violations;
  truncated += o.truncated;
  pruned += o.pruned;
  return *this;
}

nlohmann::json to_json(const FlowEventStats& s) {
  return {{"laplacian_events", s.laplacian_events},
          {"laplacian_nature_changes", s.laplacian_nature_changes},
          {"loop_contractions", s.loop_contractions},
          {"loop_contractions_shared_vertex", s.loop_contractions_shared},
          {"quadratic_events", s.quadratic_events},
          {"joined_classification_violations", s.lemma_violations},
          {"identifications", s.identifications},
          {"identification_increases", s.identification_increases},
          {"strict_cases", s.strict_cases},
          {"strict_violations", s.strict_violations},
          {"truncated", s.truncated},
          {"pruned", s.pruned}};
}

FlowState initialize(const CumulantSpec& spec, const FlowTruncation& truncation) {
  if (truncation.max_t < 0 || truncation.max_vertices < 1 || truncation.max_edges < 1) {
    throw Error(ErrorCode::invalid_argument, "truncation limits must be positive");
  }
  if (spec.index_dependent()) throw Error(ErrorCode::unsupported, "index-dependent cumulants have no flow state");
  FlowState state;
  state.truncation = truncation;
  state.alpha_squared = spec.alpha_squared();

  Emission sink;
  Emitter emitter(truncation, 0, sink);
  auto add = [&](const OrientedMultigraph& g, Sector sector, const ComplexRational& amplitude, const Rational& decay) {
    const Rational sym(static_cast<long long>(symmetry_factor(g)));
    const ComplexRational c = amplitude * ComplexRational(Rational(1) / sym);
    const Rational exponent = -decay - Rational(g.edge_count(), 2);
    emitter.emit({g.vertex_count(), g.edges()}, sector, {NPolynomial::monomial(c, exponent), {}});
  };
  if (spec.alpha_squared() != 0) {
    if (truncation.max_edges < 2 || truncation.max_vertices < 2) {
      throw Error(ErrorCode::truncation_too_small, "the Gaussian vertex needs 2 vertices and 2 edges");
    }
    add(OrientedMultigraph(2, {{0, 1}, {1, 0}}), Sector::gaussian, spec.alpha_squared(), 0);
    add(OrientedMultigraph(1, {{0, 0}, {0, 0}}), Sector::gaussian, spec.alpha_squared(), 0);
  }
  for (const auto& t : spec.terms()) {
    const auto g = graph_from_key(t.graph);
    if (g.vertex_count() > truncation.max_vertices || g.edge_count() > truncation.max_edges) {
      throw Error(ErrorCode::truncation_too_small, "perturbation graph " + describe(g) + " exceeds the truncation");
    }
  }
  for (const auto& t : spec.materialized_terms(truncation.max_vertices, truncation.max_edges)) {
    add(graph_from_key(t.graph), Sector::perturbation, t.amplitude, rational_from_double(t.n_exponent));
  }
  for (auto& [key, c] : sink.out) state.terms[key] += c;
  std::erase_if(state.terms, [](const auto& kv) { return kv.second.is_zero(); });
  state.stats += sink.stats;
  return state;
}

FlowState flow_step(const FlowState& state, int workers) {
  const int k = state.t_computed;
  const int target = k + 1;
  const auto by_t = terms_by_order(state);

  // Jobs: one Laplacian per order-k term, one quadratic per ordered pair (j, k - j).
  struct Job {
    const Term* a;
    const Term* b;  // null for the Laplacian
  };
  std::vector<Job> jobs;
  for (const auto& t : by_t[k]) jobs.push_back({&t, nullptr});
  for (int j = 0; j <= k; ++j) {
    for (const auto& a : by_t[j]) {
      for (const auto& b : by_t[k - j]) jobs.push_back({&a, &b});
    }
  }

  std::vector<Emission> emissions(jobs.size());
  parallel_for(static_cast<int>(jobs.size()), workers, [&](int i) {
    Emitter emitter(state.truncation, target, emissions[i]);
    if (jobs[i].b == nullptr) {
      laplacian(*jobs[i].a, emitter, emissions[i].stats);
    } else {
      quadratic(*jobs[i].a, *jobs[i].b, emitter, emissions[i].stats);
    }
  });

  FlowState next = state;
  next.t_computed = target;
  std::map<FlowKey, FlowCoefficient> fresh;
  FlowEventStats step_stats;
  for (auto& e : emissions) {
    for (auto& [key, c] : e.out) fresh[key] += c;
    step_stats += e.stats;
  }
  // The t-integral of s^k gives t^(k+1) / (k+1).
  const NPolynomial inverse = NPolynomial::constant(ComplexRational(Rational(1, target)));
  for (auto& [key, c] : fresh) {
    if (!c.is_zero()) next.terms[key] = c.scaled(inverse);
  }
  if (step_stats.truncated > 0) {
    next.notices.push_back("t^" + std::to_string(target) + ": " + std::to_string(step_stats.truncated) +
                           " contributions beyond " + std::to_string(state.truncation.max_vertices) +
                           " vertices / " + std::to_string(state.truncation.max_edges) + " edges dropped");
  }
  if (step_stats.loop_contractions_shared > 0) {
    next.notices.push_back("t^" + std::to_string(target) + ": " + std::to_string(step_stats.loop_contractions_shared) +
                           " loop contractions at vertices carrying other edges (factor n, vertex kept)");
  }
  next.stats += step_stats;
  return next;
}

FlowState run_flow(const CumulantSpec& spec, const FlowTruncation& truncation, int workers) {
  FlowState state = initialize(spec, truncation);
  while (state.t_computed < truncation.max_t) state = flow_step(state, workers);
  return state;
}

GreenSeries green_series(const FlowState& state, int max_order) {
  if (max_order < 1) throw Error(ErrorCode::invalid_argument, "max_order must be >= 1");
  if (state.t_computed < max_order - 2) {
    throw Error(ErrorCode::insufficient_order, "1/z^" + std::to_string(max_order) + " needs the flow to t^" +
                                                   std::to_string(max_order - 2) + ", state reached t^" +
                                                   std::to_string(state.t_computed));
  }
  GreenSeries out;
  out.finite_n.resize(max_order + 1);
  out.finite_n[1] = NPolynomial::constant(1);
  for (int p = 2; p <= max_order; ++p) {
    for (Sector s : {Sector::gaussian, Sector::perturbation}) {
      auto it = state.terms.find(FlowKey{loop_key(), p - 2, s});
      if (it != state.terms.end()) out.finite_n[p] += it->second.n0;
    }
  }
  for (const auto& poly : out.finite_n) {
    const auto lead = poly.leading_exponent();
    out.divergent.push_back(lead && *lead > 0);
    out.limit.push_back(poly.coefficient(Rational(0)));
  }
  return out;
}

void write_series_csv(std::ostream& os, const GreenSeries& series) {
  os << "power,limit,finite_n,divergent\n";
  for (std::size_t p = 0; p < series.limit.size(); ++p) {
    os << p << ',' << to_string(series.limit[p]) << ",\"" << series.finite_n[p].to_string() << "\","
       << (series.divergent[p] ? 1 : 0) << '\n';
  }
}

ScalingRecord scaling_record(const OrientedMultigraph& g, const FlowCoefficient& c) {
  ScalingRecord r;
  // N^(v - c - e/2) C_G = |Aut G| N^(v - c) w_G
  const Rational rank(g.vertex_count() - connected_components(g));
  const NPolynomial scaled =
      c.n0.shifted(rank) * ComplexRational(Rational(static_cast<long long>(symmetry_factor(g))));
  const auto lead = scaled.leading_exponent();
  if (!lead) return r;
  r.zero = false;
  r.n_exponent = to_double(*lead);
  r.bound_constant = std::abs(scaled.coefficient(*lead).to_complex());
  r.vanishing = *lead < 0;
  r.bounded = *lead <= 0;
  return r;
}

PropagationReport check_bound_propagation(const FlowState& state) {
  PropagationReport report;
  report.stats = state.stats;
  for (const auto& [key, c] : state.terms) {
    LedgerEntry entry{graph_from_key(key.graph), key.t_power, key.sector, false, {}, true};
    entry.eulerian = is_eulerian(entry.graph);
    entry.record = scaling_record(entry.graph, c);
    if (key.sector == Sector::gaussian) {
      entry.pass = entry.record.bounded;
    } else {
      entry.pass = entry.eulerian ? entry.record.vanishing : entry.record.bounded;
    }
    if (!entry.pass) {
      report.pass = false;
      if (key.t_power == 0) report.hypotheses_hold = false;
    }
    report.ledger.push_back(std::move(entry));
  }
  if (state.stats.lemma_violations > 0 || state.stats.laplacian_nature_changes > 0 ||
      state.stats.identification_increases > 0 || state.stats.strict_violations > 0) {
    report.pass = false;
  }
  return report;
}

PropagationReport verify_bound_propagation(const FlowState& state) {
  auto report = check_bound_propagation(state);
  if (report.hypotheses_hold && !report.pass) {
    for (const auto& e : report.ledger) {
      if (!e.pass) {
        throw Error(ErrorCode::propagation_violation,
                    std::string(to_string(e.sector)) + " term " + describe(e.graph) + " at t^" +
                        std::to_string(e.t_power) + " scales as N^" + std::to_string(e.record.n_exponent));
      }
    }
    throw Error(ErrorCode::propagation_violation, "graph operation invariants violated");
  }
  return report;
}

nlohmann::json to_json(const FlowState& state) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [key, c] : state.terms) {
    const auto g = graph_from_key(key.graph);
    for (int n_degree = 0; n_degree <= 1; ++n_degree) {
      const NPolynomial& poly = n_degree == 0 ? c.n0 : c.n1;
      if (poly.is_zero()) continue;
      nlohmann::json t = {{"graph", to_json(g)},
                          {"t_power", key.t_power},
                          {"n_degree", n_degree},
                          {"sector", to_string(key.sector)}};
      if (key.sector == Sector::gaussian) {
        t["coefficient"] = to_json(poly);
      } else {
        const auto r = scaling_record(g, {poly, {}});
        t["scaling_record"] = {{"bound_constant", r.bound_constant},
                               {"n_exponent", r.n_exponent},
                               {"vanishing", r.vanishing}};
        t["coefficient"] = to_json(poly);
      }
      terms.push_back(std::move(t));
    }
  }
  return {{"truncation",
           {{"max_t", state.truncation.max_t},
            {"max_vertices", state.truncation.max_vertices},
            {"max_edges", state.truncation.max_edges},
            {"prune_irrelevant", state.truncation.prune_irrelevant}}},
          {"alpha_squared", to_string(state.alpha_squared)},
          {"t_computed", state.t_computed},
          {"terms", terms},
          {"events", to_json(state.stats)},
          {"notices", state.notices}};
}

nlohmann::json to_json(const PropagationReport& report) {
  nlohmann::json ledger = nlohmann::json::array();
  for (const auto& e : report.ledger) {
    ledger.push_back({{"graph", to_json(e.graph)},
                      {"t_power", e.t_power},
                      {"sector", to_string(e.sector)},
                      {"eulerian", e.eulerian},
                      {"zero", e.record.zero},
                      {"bound_constant", e.record.bound_constant},
                      {"n_exponent", e.record.n_exponent},
                      {"vanishing", e.record.vanishing},
                      {"pass", e.pass}});
  }
  return {{"quantity", "N^(v-c-e/2) C_G at order n^0"},
          {"hypotheses_hold", report.hypotheses_hold},
          {"pass", report.pass},
          {"events", to_json(report.stats)},
          {"ledger", ledger}};
}

}  // namespace wigner
