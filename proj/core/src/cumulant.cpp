#include "wigner/cumulant.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>

#include "wigner/error.hpp"

namespace wigner {

namespace {

std::vector<std::pair<long long, long long>> index_pairs(std::span<const EntryIndex> entries) {
  std::vector<std::pair<long long, long long>> pairs;
  pairs.reserve(entries.size());
  for (const auto& e : entries) pairs.emplace_back(e.row, e.col);
  return pairs;
}

void require_indices_in_range(std::span<const EntryIndex> entries, long long N) {
  if (N < 1) throw Error(ErrorCode::invalid_argument, "N must be positive");
  for (const auto& e : entries) {
    if (e.row < 1 || e.row > N || e.col < 1 || e.col > N) {
      throw Error(ErrorCode::invalid_argument, "entry index outside [1, N]");
    }
  }
}

ComplexRational amplitude_from_json(const nlohmann::json& j) {
  if (j.is_number()) return ComplexRational(rational_from_double(j.get<double>()));
  if (j.is_string()) return ComplexRational(parse_rational(j.get<std::string>()));
  if (j.is_array() && j.size() == 2) {
    auto part = [](const nlohmann::json& x) {
      return x.is_string() ? parse_rational(x.get<std::string>()) : rational_from_double(x.get<double>());
    };
    return {part(j[0]), part(j[1])};
  }
  throw Error(ErrorCode::invalid_spec, "amplitude must be a number, a rational string or [re, im]");
}

nlohmann::json amplitude_to_json(const ComplexRational& a) {
  if (a.im == 0) return to_double(a.re);
  return nlohmann::json::array({to_double(a.re), to_double(a.im)});
}

}  // namespace

const char* to_string(SupportPattern p) {
  return p == SupportPattern::all_ones ? "all_ones" : "off_diagonal";
}

SupportPattern support_pattern_from_string(const std::string& s) {
  if (s == "all_ones") return SupportPattern::all_ones;
  if (s == "off_diagonal") return SupportPattern::off_diagonal;
  throw Error(ErrorCode::invalid_spec, "unknown pattern '" + s + "'");
}

bool supported_on(const OrientedMultigraph& g, SupportPattern p) {
  if (p == SupportPattern::all_ones) return true;
  return std::none_of(g.edges().begin(), g.edges().end(), [](const Edge& e) { return e.is_loop(); });
}

const CanonicalGraphKey& CumulantSpec::two_cycle_key() {
  static const CanonicalGraphKey key = canonical_key(OrientedMultigraph(2, {{0, 1}, {1, 0}}));
  return key;
}

const CanonicalGraphKey& CumulantSpec::double_loop_key() {
  static const CanonicalGraphKey key = canonical_key(OrientedMultigraph(1, {{0, 0}, {0, 0}}));
  return key;
}

CumulantSpec::CumulantSpec(double alpha, std::vector<PerturbationTerm> terms,
                           std::vector<PatternPerturbation> pattern_terms)
    : alpha_(alpha), pattern_terms_(std::move(pattern_terms)) {
  if (!std::isfinite(alpha) || alpha < 0) throw Error(ErrorCode::invalid_spec, "alpha must be finite and >= 0");
  const Rational a = rational_from_double(alpha);
  alpha_squared_ = a * a;
  init(std::move(terms));
}

CumulantSpec CumulantSpec::with_alpha_squared(Rational alpha_squared, std::vector<PerturbationTerm> terms,
                                              std::vector<PatternPerturbation> pattern_terms) {
  if (alpha_squared < 0) throw Error(ErrorCode::invalid_spec, "alpha^2 must be >= 0");
  CumulantSpec spec(std::sqrt(to_double(alpha_squared)), {}, std::move(pattern_terms));
  spec.alpha_squared_ = std::move(alpha_squared);
  spec.init(std::move(terms));
  return spec;
}

void CumulantSpec::init(std::vector<PerturbationTerm> terms) {
  for (auto& term : terms) {
    if (!std::isfinite(term.n_exponent)) throw Error(ErrorCode::invalid_spec, "n_exponent must be finite");
    term.graph = canonical_key(graph_from_key(term.graph));
    if (term_index_.count(term.graph)) throw Error(ErrorCode::invalid_spec, "duplicate perturbation graph");
    term_index_.emplace(term.graph, terms_.size());
    terms_.push_back(term);
  }
  // Hermiticity: C_{G*} = conj(C_G).
  const std::size_t declared = terms_.size();
  for (std::size_t t = 0; t < declared; ++t) {
    const PerturbationTerm term = terms_[t];
    const auto conj_key = canonical_key(graph_from_key(term.graph).reversed());
    if (conj_key == term.graph) {
      if (term.amplitude.im != 0) {
        throw Error(ErrorCode::invalid_spec, "self-conjugate graph needs a real amplitude");
      }
      continue;
    }
    if (auto it = term_index_.find(conj_key); it != term_index_.end()) {
      const auto& partner = terms_[it->second];
      if (!(partner.amplitude == term.amplitude.conj()) || partner.n_exponent != term.n_exponent) {
        throw Error(ErrorCode::invalid_spec, "conjugate graph carries a non-conjugate amplitude");
      }
      continue;
    }
    term_index_.emplace(conj_key, terms_.size());
    terms_.push_back({conj_key, term.amplitude.conj(), term.n_exponent});
  }
  for (const auto& p : pattern_terms_) {
    if (p.order < 1) throw Error(ErrorCode::invalid_spec, "pattern order must be positive");
    if (!std::isfinite(p.n_exponent)) throw Error(ErrorCode::invalid_spec, "n_exponent must be finite");
    if (p.amplitude.im != 0) throw Error(ErrorCode::invalid_spec, "pattern amplitudes must be real");
  }
}

Rational CumulantSpec::gaussian_cumulant(const CanonicalGraphKey& key) const {
  if (key == two_cycle_key() || key == double_loop_key()) return alpha_squared_;
  return Rational(0);
}

std::optional<ComplexRational> CumulantSpec::perturbation_exact(const OrientedMultigraph& g,
                                                                const CanonicalGraphKey& key, long long N) const {
  ComplexRational total;
  if (auto it = term_index_.find(key); it != term_index_.end()) {
    const auto& term = terms_[it->second];
    if (!term.amplitude.is_zero()) {
      auto scale = exact_inverse_power(N, term.n_exponent);
      if (!scale) return std::nullopt;
      total += term.amplitude * ComplexRational(*scale);
    }
  }
  for (const auto& p : pattern_terms_) {
    if (p.order != g.edge_count() || !supported_on(g, p.pattern) || p.amplitude.is_zero()) continue;
    auto scale = exact_inverse_power(N, p.n_exponent);
    if (!scale) return std::nullopt;
    total += p.amplitude * ComplexRational(*scale);
  }
  return total;
}

std::complex<double> CumulantSpec::perturbation_value(const OrientedMultigraph& g, const CanonicalGraphKey& key,
                                                      long long N) const {
  std::complex<double> total;
  const double n = static_cast<double>(N);
  if (auto it = term_index_.find(key); it != term_index_.end()) {
    const auto& term = terms_[it->second];
    total += term.amplitude.to_complex() * std::pow(n, -term.n_exponent);
  }
  for (const auto& p : pattern_terms_) {
    if (p.order != g.edge_count() || !supported_on(g, p.pattern)) continue;
    total += p.amplitude.to_complex() * std::pow(n, -p.n_exponent);
  }
  return total;
}

std::optional<ComplexRational> CumulantSpec::block_cumulant_exact(std::span<const EntryIndex> block,
                                                                  long long N) const {
  const auto pairs = index_pairs(block);
  const auto pattern = from_index_pattern(pairs);
  const auto key = canonical_key(pattern.graph);
  auto perturbation = perturbation_exact(pattern.graph, key, N);
  if (!perturbation) return std::nullopt;
  return ComplexRational(gaussian_cumulant(key)) + *perturbation;
}

std::complex<double> CumulantSpec::block_cumulant_value(std::span<const EntryIndex> block, long long N) const {
  const auto pairs = index_pairs(block);
  const auto pattern = from_index_pattern(pairs);
  const auto key = canonical_key(pattern.graph);
  std::complex<double> value = to_double(gaussian_cumulant(key)) + perturbation_value(pattern.graph, key, N);
  if (index_fn_) {
    std::vector<long long> vertex_indices(pattern.graph.vertex_count());
    for (const auto& [raw, v] : pattern.vertex_of_index) vertex_indices[v] = raw;
    if (auto extra = index_fn_(pattern.graph, vertex_indices, N)) value += *extra;
  }
  return value;
}

std::vector<PerturbationTerm> CumulantSpec::materialized_terms(int max_vertices, int max_edges) const {
  std::vector<PerturbationTerm> out;
  for (const auto& t : terms_) {
    const auto g = graph_from_key(t.graph);
    if (g.vertex_count() <= max_vertices && g.edge_count() <= max_edges) out.push_back(t);
  }
  if (pattern_terms_.empty()) return out;
  const auto graphs = enumerate_graphs(max_vertices, max_edges);
  for (const auto& p : pattern_terms_) {
    if (p.amplitude.is_zero()) continue;
    for (const auto& g : graphs) {
      if (g.edge_count() == p.order && supported_on(g, p.pattern)) {
        out.push_back({canonical_key(g), p.amplitude, p.n_exponent});
      }
    }
  }
  return out;
}

nlohmann::json to_json(const CumulantSpec& spec) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& t : spec.terms()) {
    terms.push_back({{"graph", to_json(graph_from_key(t.graph))},
                     {"amplitude", amplitude_to_json(t.amplitude)},
                     {"n_exponent", t.n_exponent}});
  }
  nlohmann::json out{{"alpha", spec.alpha()},
                     {"alpha_squared", to_string(spec.alpha_squared())},
                     {"perturbations", std::move(terms)}};
  if (!spec.pattern_terms().empty()) {
    nlohmann::json patterns = nlohmann::json::array();
    for (const auto& p : spec.pattern_terms()) {
      patterns.push_back({{"order", p.order},
                          {"pattern", to_string(p.pattern)},
                          {"amplitude", amplitude_to_json(p.amplitude)},
                          {"n_exponent", p.n_exponent}});
    }
    out["pattern_perturbations"] = std::move(patterns);
  }
  return out;
}

CumulantSpec cumulant_spec_from_json(const nlohmann::json& j) {
  try {
    std::vector<PerturbationTerm> terms;
    if (j.contains("perturbations")) {
      for (const auto& t : j.at("perturbations")) {
        terms.push_back({canonical_key(graph_from_json(t.at("graph"))), amplitude_from_json(t.at("amplitude")),
                         t.value("n_exponent", 0.0)});
      }
    }
    std::vector<PatternPerturbation> patterns;
    if (j.contains("pattern_perturbations")) {
      for (const auto& p : j.at("pattern_perturbations")) {
        patterns.push_back({p.at("order").get<int>(), support_pattern_from_string(p.value("pattern", "all_ones")),
                            amplitude_from_json(p.at("amplitude")), p.value("n_exponent", 0.0)});
      }
    }
    if (j.contains("alpha_squared")) {
      const auto& a2 = j.at("alpha_squared");
      return CumulantSpec::with_alpha_squared(
          a2.is_string() ? parse_rational(a2.get<std::string>()) : rational_from_double(a2.get<double>()),
          std::move(terms), std::move(patterns));
    }
    return CumulantSpec(j.value("alpha", 0.0), std::move(terms), std::move(patterns));
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::invalid_spec, std::string("cumulant spec JSON: ") + ex.what());
  }
}

std::optional<ComplexRational> moments_from_cumulants_exact(std::span<const EntryIndex> entries,
                                                            const CumulantSpec& spec, long long N) {
  require_indices_in_range(entries, N);
  bool exact = true;
  std::vector<EntryIndex> block_entries;
  auto total = moment_from_cumulants<ComplexRational>(static_cast<int>(entries.size()), [&](std::span<const int> block) {
    block_entries.clear();
    for (int p : block) block_entries.push_back(entries[p]);
    auto c = spec.block_cumulant_exact(block_entries, N);
    if (!c) {
      exact = false;
      return ComplexRational(0);
    }
    return *c;
  });
  if (!exact) return std::nullopt;
  return total;
}

std::complex<double> moments_from_cumulants(std::span<const EntryIndex> entries, const CumulantSpec& spec,
                                            long long N) {
  require_indices_in_range(entries, N);
  std::vector<EntryIndex> block_entries;
  return moment_from_cumulants<std::complex<double>>(
      static_cast<int>(entries.size()), [&](std::span<const int> block) {
        block_entries.clear();
        for (int p : block) block_entries.push_back(entries[p]);
        return spec.block_cumulant_value(block_entries, N);
      });
}

std::complex<double> cumulants_from_moments(const MomentFunction& moment, std::span<const EntryIndex> entries) {
  std::vector<EntryIndex> block_entries;
  return cumulant_from_moments<std::complex<double>>(static_cast<int>(entries.size()), [&](std::span<const int> block) {
    block_entries.clear();
    for (int p : block) block_entries.push_back(entries[p]);
    return moment(block_entries);
  });
}

ComplexRational cumulants_from_moments_exact(const ExactMomentFunction& moment, std::span<const EntryIndex> entries) {
  std::vector<EntryIndex> block_entries;
  return cumulant_from_moments<ComplexRational>(static_cast<int>(entries.size()), [&](std::span<const int> block) {
    block_entries.clear();
    for (int p : block) block_entries.push_back(entries[p]);
    return moment(block_entries);
  });
}

CumulantEstimate estimate_cumulant(std::span<const HermitianMatrix> samples, std::span<const EntryIndex> entries,
                                   int batches) {
  const int order = static_cast<int>(entries.size());
  if (order < 1 || order > kMaxEstimatedCumulantOrder) {
    throw Error(ErrorCode::invalid_argument, "cumulant estimation supports orders 1..4");
  }
  if (samples.size() < 2) throw Error(ErrorCode::insufficient_samples, "need at least two samples");
  const long long n = samples.front().dimension();
  for (const auto& e : entries) {
    if (e.row < 1 || e.row > n || e.col < 1 || e.col > n) {
      throw Error(ErrorCode::invalid_argument, "entry index outside the matrix");
    }
  }
  batches = std::clamp(batches, 2, static_cast<int>(samples.size()));

  const int subsets = 1 << order;
  auto estimate = [&](std::size_t begin, std::size_t end) {
    std::vector<std::complex<double>> moment(subsets);
    for (std::size_t s = begin; s < end; ++s) {
      std::array<std::complex<double>, kMaxEstimatedCumulantOrder> x{};
      for (int p = 0; p < order; ++p) x[p] = samples[s](static_cast<int>(entries[p].row - 1), static_cast<int>(entries[p].col - 1));
      for (int mask = 1; mask < subsets; ++mask) {
        std::complex<double> prod(1.0);
        for (int p = 0; p < order; ++p) {
          if (mask & (1 << p)) prod *= x[p];
        }
        moment[mask] += prod;
      }
    }
    const double count = static_cast<double>(end - begin);
    for (auto& m : moment) m /= count;
    return cumulant_from_moments<std::complex<double>>(order, [&](std::span<const int> block) {
      int mask = 0;
      for (int p : block) mask |= 1 << p;
      return moment[mask];
    });
  };

  CumulantEstimate out;
  out.value = estimate(0, samples.size());
  std::vector<std::complex<double>> batch_values;
  const std::size_t size = samples.size() / static_cast<std::size_t>(batches);
  for (int b = 0; b < batches; ++b) {
    const std::size_t begin = static_cast<std::size_t>(b) * size;
    const std::size_t end = (b == batches - 1) ? samples.size() : begin + size;
    batch_values.push_back(estimate(begin, end));
  }
  std::complex<double> mean;
  for (const auto& v : batch_values) mean += v;
  mean /= static_cast<double>(batches);
  double var = 0.0;
  for (const auto& v : batch_values) var += std::norm(v - mean);
  var /= static_cast<double>(batches - 1);
  out.standard_error = std::sqrt(var / static_cast<double>(batches));
  return out;
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::vanishes: return "vanishes";
    case Verdict::bounded: return "bounded";
    case Verdict::violates: return "violates";
  }
  return "unknown";
}

ConditionReport theorem_condition_report(const CumulantSpec& spec, std::span<const OrientedMultigraph> graphs,
                                         std::span<const long long> n_grid) {
  if (n_grid.size() < 3) throw Error(ErrorCode::empty_grid, "N grid needs at least three points");
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    if (n_grid[i] < 1 || (i > 0 && n_grid[i] <= n_grid[i - 1])) {
      throw Error(ErrorCode::empty_grid, "N grid must be positive and strictly increasing");
    }
  }
  ConditionReport report;
  report.n_grid.assign(n_grid.begin(), n_grid.end());
  for (const auto& g : graphs) {
    ConditionRecord rec{g, is_eulerian(g), scaling_exponent(g), {}, std::nullopt, Verdict::vanishes, {}, true};
    const auto key = canonical_key(g);
    const double exponent = to_double(rec.exponent);
    bool all_zero = true;
    for (long long N : n_grid) {
      const double scaled = std::pow(static_cast<double>(N), exponent) * std::abs(spec.perturbation_value(g, key, N));
      rec.scaled_values.push_back(scaled);
      if (scaled != 0.0) all_zero = false;
    }
    if (!all_zero) {
      // least-squares slope of log(value) against log(N)
      double sx = 0, sy = 0, sxx = 0, sxy = 0;
      int m = 0;
      for (std::size_t i = 0; i < n_grid.size(); ++i) {
        if (rec.scaled_values[i] <= 0.0) continue;
        const double x = std::log(static_cast<double>(n_grid[i]));
        const double y = std::log(rec.scaled_values[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++m;
      }
      const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
      rec.slope = slope;
      rec.verdict = slope < kVanishingSlope ? Verdict::vanishes
                    : slope <= kBoundedSlope ? Verdict::bounded
                                             : Verdict::violates;
    }
    if (rec.eulerian) {
      rec.bullet = "eulerian: N^(v-c-e/2) C''_G -> 0";
      rec.pass = rec.verdict == Verdict::vanishes;
    } else {
      rec.bullet = "non-eulerian: N^(v-c-e/2) C''_G bounded";
      rec.pass = rec.verdict != Verdict::violates;
    }
    report.all_pass = report.all_pass && rec.pass;
    report.records.push_back(std::move(rec));
  }
  return report;
}

nlohmann::json to_json(const ConditionReport& report) {
  nlohmann::json records = nlohmann::json::array();
  for (const auto& r : report.records) {
    records.push_back({{"graph", to_json(r.graph)},
                       {"classification", r.eulerian ? "eulerian" : "non_eulerian"},
                       {"exponent", to_string(r.exponent)},
                       {"scaled_values", r.scaled_values},
                       {"slope", r.slope ? nlohmann::json(*r.slope) : nlohmann::json(nullptr)},
                       {"verdict", to_string(r.verdict)},
                       {"bullet", r.bullet},
                       {"pass", r.pass}});
  }
  return {{"quantity", "N^(v-c-e/2) |C''_G(N)|  (perturbation part of the cumulant)"},
          {"thresholds", {{"vanishes_below_slope", kVanishingSlope}, {"bounded_up_to_slope", kBoundedSlope},
                          {"note", "finite-N proxies for the N -> infinity limits"}}},
          {"n_grid", report.n_grid},
          {"all_pass", report.all_pass},
          {"records", std::move(records)}};
}

}  // namespace wigner
