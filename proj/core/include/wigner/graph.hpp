#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "wigner/exact.hpp"

namespace wigner {

struct Edge {
  int source = 0;
  int target = 0;

  bool is_loop() const noexcept { return source == target; }
  auto operator<=>(const Edge&) const = default;
};

// Canonical form, automorphisms and enumeration cost factorial time in the vertex count.
inline constexpr int kDefaultVertexLimit = 8;

/// Oriented multigraph labelling a joint cumulant: one vertex per distinct matrix
/// index, one edge i -> j per factor M_ij. Loops and parallel edges are allowed;
/// every vertex must carry at least one edge.
class OrientedMultigraph {
 public:
  OrientedMultigraph(int vertex_count, std::vector<Edge> edges);

  int vertex_count() const noexcept { return vertex_count_; }
  int edge_count() const noexcept { return static_cast<int>(edges_.size()); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  int out_degree(int v) const;
  int in_degree(int v) const;

  /// Same graph with vertex v renamed to relabel[v].
  OrientedMultigraph relabeled(std::span<const int> relabel) const;
  /// Reverses every edge (the graph of the conjugate cumulant).
  OrientedMultigraph reversed() const;

  friend bool operator==(const OrientedMultigraph&, const OrientedMultigraph&) = default;

 private:
  int vertex_count_;
  std::vector<Edge> edges_;
};

/// Isomorphism-invariant byte encoding: the lexicographically smallest sorted
/// edge list over all vertex relabelings, prefixed by vertex and edge counts.
struct CanonicalGraphKey {
  std::string encoding;

  auto operator<=>(const CanonicalGraphKey&) const = default;
  bool operator==(const CanonicalGraphKey&) const = default;
};

struct CanonicalGraphKeyHash {
  std::size_t operator()(const CanonicalGraphKey& k) const noexcept {
    return std::hash<std::string>{}(k.encoding);
  }
};

struct IndexPatternGraph {
  OrientedMultigraph graph;
  std::map<long long, int> vertex_of_index;
};

// Distinct raw indices become distinct vertices, numbered by first appearance.
IndexPatternGraph from_index_pattern(std::span<const std::pair<long long, long long>> index_pairs);

bool is_eulerian(const OrientedMultigraph& g);

// Weak connectivity.
int connected_components(const OrientedMultigraph& g);

/// v(G) - c(G) - e(G)/2, exactly.
Rational scaling_exponent(const OrientedMultigraph& g);

/// Vertex permutations that map the edge multiset onto itself.
std::uint64_t automorphism_count(const OrientedMultigraph& g, int vertex_limit = kDefaultVertexLimit);

/// Order of the full symmetry group, parallel-edge permutations included. This is
/// the |Aut(G)| weighting the graph expansion of the cumulant generating function.
std::uint64_t symmetry_factor(const OrientedMultigraph& g, int vertex_limit = kDefaultVertexLimit);

CanonicalGraphKey canonical_key(const OrientedMultigraph& g, int vertex_limit = kDefaultVertexLimit);

/// The representative whose sorted edge list is the canonical encoding.
OrientedMultigraph canonical_graph(const OrientedMultigraph& g, int vertex_limit = kDefaultVertexLimit);

OrientedMultigraph graph_from_key(const CanonicalGraphKey& key);

/// One representative per isomorphism class with 1..max_vertices vertices and
/// 1..max_edges edges, sorted by (vertices, edges, key).
std::vector<OrientedMultigraph> enumerate_graphs(int max_vertices, int max_edges);

/// Lemma check on connected graphs: Eulerian xor at least two unbalanced vertices.
bool check_euler_lemma(const OrientedMultigraph& g);

int unbalanced_vertex_count(const OrientedMultigraph& g);

nlohmann::json to_json(const OrientedMultigraph& g);
OrientedMultigraph graph_from_json(const nlohmann::json& j);

std::string describe(const OrientedMultigraph& g);

}  // namespace wigner
