#include "wigner/graph.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

#include "wigner/error.hpp"

namespace wigner {

namespace {

void require_vertex_limit(const OrientedMultigraph& g, int vertex_limit) {
  if (g.vertex_count() > vertex_limit) {
    throw Error(ErrorCode::limit_exceeded, "graph has " + std::to_string(g.vertex_count()) +
                                               " vertices, limit is " + std::to_string(vertex_limit));
  }
}

std::vector<Edge> sorted_relabeled(const std::vector<Edge>& edges, const std::vector<int>& perm) {
  std::vector<Edge> out;
  out.reserve(edges.size());
  for (const auto& e : edges) out.push_back({perm[e.source], perm[e.target]});
  std::sort(out.begin(), out.end());
  return out;
}

// Calls visit(perm, sorted relabeled edges) for every vertex permutation.
template <class Visit>
void for_each_relabeling(const OrientedMultigraph& g, Visit&& visit) {
  std::vector<int> perm(g.vertex_count());
  std::iota(perm.begin(), perm.end(), 0);
  do {
    visit(perm, sorted_relabeled(g.edges(), perm));
  } while (std::next_permutation(perm.begin(), perm.end()));
}

std::string encode(int vertex_count, const std::vector<Edge>& sorted_edges) {
  std::string bytes;
  bytes.reserve(2 + 2 * sorted_edges.size());
  bytes.push_back(static_cast<char>(vertex_count));
  bytes.push_back(static_cast<char>(sorted_edges.size()));
  for (const auto& e : sorted_edges) {
    bytes.push_back(static_cast<char>(e.source));
    bytes.push_back(static_cast<char>(e.target));
  }
  return bytes;
}

struct DisjointSets {
  std::vector<int> parent;
  explicit DisjointSets(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

std::uint64_t factorial(int n) {
  std::uint64_t f = 1;
  for (int i = 2; i <= n; ++i) f *= static_cast<std::uint64_t>(i);
  return f;
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

OrientedMultigraph::OrientedMultigraph(int vertex_count, std::vector<Edge> edges)
    : vertex_count_(vertex_count), edges_(std::move(edges)) {
  if (vertex_count_ < 1) throw Error(ErrorCode::invalid_argument, "graph needs at least one vertex");
  if (vertex_count_ > 127) throw Error(ErrorCode::limit_exceeded, "graph too large to encode");
  std::vector<int> degree(vertex_count_, 0);
  for (const auto& e : edges_) {
    if (e.source < 0 || e.source >= vertex_count_ || e.target < 0 || e.target >= vertex_count_) {
      throw Error(ErrorCode::invalid_argument, "edge endpoint outside [0, vertex_count)");
    }
    ++degree[e.source];
    ++degree[e.target];
  }
  for (int v = 0; v < vertex_count_; ++v) {
    if (degree[v] == 0) {
      throw Error(ErrorCode::invalid_argument, "vertex " + std::to_string(v) + " has no incident edge");
    }
  }
}

int OrientedMultigraph::out_degree(int v) const {
  return static_cast<int>(std::count_if(edges_.begin(), edges_.end(), [v](const Edge& e) { return e.source == v; }));
}

int OrientedMultigraph::in_degree(int v) const {
  return static_cast<int>(std::count_if(edges_.begin(), edges_.end(), [v](const Edge& e) { return e.target == v; }));
}

OrientedMultigraph OrientedMultigraph::relabeled(std::span<const int> relabel) const {
  std::vector<Edge> out;
  out.reserve(edges_.size());
  for (const auto& e : edges_) out.push_back({relabel[e.source], relabel[e.target]});
  return {vertex_count_, std::move(out)};
}

OrientedMultigraph OrientedMultigraph::reversed() const {
  std::vector<Edge> out;
  out.reserve(edges_.size());
  for (const auto& e : edges_) out.push_back({e.target, e.source});
  return {vertex_count_, std::move(out)};
}

IndexPatternGraph from_index_pattern(std::span<const std::pair<long long, long long>> index_pairs) {
  if (index_pairs.empty()) throw Error(ErrorCode::invalid_argument, "index pattern is empty");
  std::map<long long, int> vertex_of;
  auto vertex = [&vertex_of](long long raw) {
    auto [it, inserted] = vertex_of.try_emplace(raw, static_cast<int>(vertex_of.size()));
    return it->second;
  };
  std::vector<Edge> edges;
  edges.reserve(index_pairs.size());
  for (const auto& [i, j] : index_pairs) {
    const int s = vertex(i);
    const int t = vertex(j);
    edges.push_back({s, t});
  }
  const int v = static_cast<int>(vertex_of.size());
  return {OrientedMultigraph(v, std::move(edges)), std::move(vertex_of)};
}

bool is_eulerian(const OrientedMultigraph& g) { return unbalanced_vertex_count(g) == 0; }

int unbalanced_vertex_count(const OrientedMultigraph& g) {
  std::vector<int> balance(g.vertex_count(), 0);
  for (const auto& e : g.edges()) {
    ++balance[e.source];
    --balance[e.target];
  }
  return static_cast<int>(std::count_if(balance.begin(), balance.end(), [](int b) { return b != 0; }));
}

int connected_components(const OrientedMultigraph& g) {
  DisjointSets sets(g.vertex_count());
  for (const auto& e : g.edges()) sets.unite(e.source, e.target);
  int count = 0;
  for (int v = 0; v < g.vertex_count(); ++v) count += sets.find(v) == v ? 1 : 0;
  return count;
}

Rational scaling_exponent(const OrientedMultigraph& g) {
  return Rational(g.vertex_count() - connected_components(g)) - Rational(g.edge_count(), 2);
}

std::uint64_t automorphism_count(const OrientedMultigraph& g, int vertex_limit) {
  require_vertex_limit(g, vertex_limit);
  std::vector<Edge> reference = g.edges();
  std::sort(reference.begin(), reference.end());
  std::uint64_t count = 0;
  for_each_relabeling(g, [&](const std::vector<int>&, const std::vector<Edge>& edges) {
    if (edges == reference) ++count;
  });
  return count;
}

std::uint64_t symmetry_factor(const OrientedMultigraph& g, int vertex_limit) {
  std::vector<Edge> sorted = g.edges();
  std::sort(sorted.begin(), sorted.end());
  std::uint64_t parallel = 1;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    parallel *= factorial(static_cast<int>(j - i));
    i = j;
  }
  return automorphism_count(g, vertex_limit) * parallel;
}

OrientedMultigraph canonical_graph(const OrientedMultigraph& g, int vertex_limit) {
  require_vertex_limit(g, vertex_limit);
  std::vector<Edge> best;
  bool first = true;
  for_each_relabeling(g, [&](const std::vector<int>&, const std::vector<Edge>& edges) {
    if (first || edges < best) {
      best = edges;
      first = false;
    }
  });
  return {g.vertex_count(), std::move(best)};
}

CanonicalGraphKey canonical_key(const OrientedMultigraph& g, int vertex_limit) {
  const auto c = canonical_graph(g, vertex_limit);
  return {encode(c.vertex_count(), c.edges())};
}

OrientedMultigraph graph_from_key(const CanonicalGraphKey& key) {
  const auto& b = key.encoding;
  if (b.size() < 2) throw Error(ErrorCode::invalid_argument, "malformed graph key");
  const int v = static_cast<unsigned char>(b[0]);
  const int e = static_cast<unsigned char>(b[1]);
  if (b.size() != static_cast<std::size_t>(2 + 2 * e)) throw Error(ErrorCode::invalid_argument, "malformed graph key");
  std::vector<Edge> edges;
  edges.reserve(e);
  for (int k = 0; k < e; ++k) {
    edges.push_back({static_cast<unsigned char>(b[2 + 2 * k]), static_cast<unsigned char>(b[3 + 2 * k])});
  }
  return {v, std::move(edges)};
}

std::vector<OrientedMultigraph> enumerate_graphs(int max_vertices, int max_edges) {
  if (max_vertices < 1 || max_edges < 1) throw Error(ErrorCode::invalid_argument, "enumeration limits must be positive");
  double candidates = 0;
  for (int v = 1; v <= max_vertices; ++v) {
    for (int e = 1; e <= max_edges; ++e) candidates += binomial(v * v + e - 1, e) * static_cast<double>(factorial(v));
  }
  if (max_vertices > kDefaultVertexLimit || candidates > 5e7) {
    throw Error(ErrorCode::limit_exceeded, "enumeration of (" + std::to_string(max_vertices) + ", " +
                                               std::to_string(max_edges) + ") graphs is too expensive");
  }

  std::set<CanonicalGraphKey> seen;
  for (int v = 1; v <= max_vertices; ++v) {
    const int slots = v * v;
    for (int e = 1; e <= max_edges; ++e) {
      if (2 * e < v) continue;  // not enough half-edges to touch every vertex
      std::vector<int> pick(e, 0);
      while (true) {
        std::vector<Edge> edges;
        edges.reserve(e);
        std::vector<bool> touched(v, false);
        for (int s : pick) {
          edges.push_back({s / v, s % v});
          touched[s / v] = touched[s % v] = true;
        }
        if (std::all_of(touched.begin(), touched.end(), [](bool t) { return t; })) {
          seen.insert(canonical_key(OrientedMultigraph(v, std::move(edges))));
        }
        // next nondecreasing sequence over [0, slots)
        int pos = e - 1;
        while (pos >= 0 && pick[pos] == slots - 1) --pos;
        if (pos < 0) break;
        ++pick[pos];
        for (int q = pos + 1; q < e; ++q) pick[q] = pick[pos];
      }
    }
  }
  std::vector<OrientedMultigraph> out;
  out.reserve(seen.size());
  for (const auto& k : seen) out.push_back(graph_from_key(k));
  // std::set order on the encoding already sorts by (v, e, edges).
  return out;
}

bool check_euler_lemma(const OrientedMultigraph& g) {
  if (connected_components(g) != 1) throw Error(ErrorCode::not_connected, "lemma applies to connected graphs");
  return is_eulerian(g) != (unbalanced_vertex_count(g) >= 2);
}

nlohmann::json to_json(const OrientedMultigraph& g) {
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& e : g.edges()) edges.push_back({e.source, e.target});
  return {{"v", g.vertex_count()}, {"edges", std::move(edges)}};
}

OrientedMultigraph graph_from_json(const nlohmann::json& j) {
  try {
    std::vector<Edge> edges;
    for (const auto& pair : j.at("edges")) edges.push_back({pair.at(0).get<int>(), pair.at(1).get<int>()});
    return {j.at("v").get<int>(), std::move(edges)};
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::invalid_spec, std::string("graph JSON: ") + ex.what());
  }
}

std::string describe(const OrientedMultigraph& g) {
  std::ostringstream os;
  os << "v=" << g.vertex_count() << " [";
  for (std::size_t k = 0; k < g.edges().size(); ++k) {
    if (k) os << ' ';
    os << g.edges()[k].source << "->" << g.edges()[k].target;
  }
  os << ']';
  return os.str();
}

}  // namespace wigner
