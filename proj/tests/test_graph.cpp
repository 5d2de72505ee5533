#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include "wigner/error.hpp"
#include "wigner/graph.hpp"
#include "wigner/partitions.hpp"

using namespace wigner;

namespace {

OrientedMultigraph two_cycle() { return OrientedMultigraph(2, {{0, 1}, {1, 0}}); }

OrientedMultigraph figure_one() {
  const std::vector<std::pair<long long, long long>> pairs{{1, 2}, {1, 2}, {2, 3}, {4, 4}};
  return from_index_pattern(pairs).graph;
}

OrientedMultigraph cycle(int k) {
  std::vector<Edge> edges;
  for (int v = 0; v < k; ++v) edges.push_back({v, (v + 1) % k});
  return OrientedMultigraph(k, edges);
}

// Sorted edge list after relabeling; minimum over all relabelings identifies the class.
using EdgeList = std::vector<std::pair<int, int>>;

EdgeList oracle_form(int v, const EdgeList& edges) {
  std::vector<int> perm(v);
  std::iota(perm.begin(), perm.end(), 0);
  EdgeList best;
  bool first = true;
  do {
    EdgeList e;
    for (auto [s, t] : edges) e.emplace_back(perm[s], perm[t]);
    std::sort(e.begin(), e.end());
    if (first || e < best) best = e;
    first = false;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

// Exhaustive generation of edge multisets on exactly v vertices, then dedup.
std::size_t oracle_class_count(int max_v, int max_e) {
  std::size_t total = 0;
  for (int v = 1; v <= max_v; ++v) {
    std::vector<std::pair<int, int>> slots;
    for (int s = 0; s < v; ++s)
      for (int t = 0; t < v; ++t) slots.emplace_back(s, t);
    std::set<std::pair<int, EdgeList>> classes;
    for (int e = 1; e <= max_e; ++e) {
      std::vector<int> pick(e, 0);
      while (true) {
        EdgeList edges;
        std::vector<int> degree(v, 0);
        for (int p : pick) {
          edges.push_back(slots[p]);
          ++degree[slots[p].first];
          ++degree[slots[p].second];
        }
        if (std::all_of(degree.begin(), degree.end(), [](int d) { return d > 0; }))
          classes.insert({v, oracle_form(v, edges)});
        int i = e - 1;
        while (i >= 0 && pick[i] == static_cast<int>(slots.size()) - 1) --i;
        if (i < 0) break;
        ++pick[i];
        for (int j = i + 1; j < e; ++j) pick[j] = pick[i];
      }
    }
    total += classes.size();
  }
  return total;
}

std::uint64_t factorial(int n) { return n <= 1 ? 1 : n * factorial(n - 1); }

}  // namespace

TEST_CASE("index patterns become graphs") {
  const std::vector<std::pair<long long, long long>> loop{{3, 3}};
  auto g = from_index_pattern(loop);
  CHECK(g.graph.vertex_count() == 1);
  CHECK(g.graph.edge_count() == 1);
  CHECK(g.graph.edges()[0].is_loop());

  const std::vector<std::pair<long long, long long>> pair{{1, 2}, {2, 1}};
  CHECK(canonical_key(from_index_pattern(pair).graph) == canonical_key(two_cycle()));

  const auto fig = from_index_pattern(std::vector<std::pair<long long, long long>>{{1, 2}, {1, 2}, {2, 3}, {4, 4}});
  CHECK(fig.graph.vertex_count() == 4);
  const int a = fig.vertex_of_index.at(1), b = fig.vertex_of_index.at(2), c = fig.vertex_of_index.at(3),
            d = fig.vertex_of_index.at(4);
  std::vector<Edge> expected{{a, b}, {a, b}, {b, c}, {d, d}};
  auto got = fig.graph.edges();
  std::sort(expected.begin(), expected.end());
  std::sort(got.begin(), got.end());
  CHECK(got == expected);
}

TEST_CASE("Eulerian classification and components") {
  CHECK(is_eulerian(two_cycle()));
  CHECK_FALSE(is_eulerian(OrientedMultigraph(2, {{0, 1}})));
  CHECK_FALSE(is_eulerian(figure_one()));
  CHECK(is_eulerian(OrientedMultigraph(2, {{0, 0}, {1, 1}})));

  CHECK(connected_components(two_cycle()) == 1);
  CHECK(connected_components(OrientedMultigraph(2, {{0, 0}, {1, 1}})) == 2);
  CHECK(connected_components(figure_one()) == 2);
}

TEST_CASE("scaling exponent is exact") {
  CHECK(scaling_exponent(two_cycle()) == 0);
  CHECK(scaling_exponent(cycle(4)) == 1);
  CHECK(scaling_exponent(OrientedMultigraph(1, {{0, 0}})) == Rational(-1, 2));
  for (int k = 1; k <= 6; ++k) CHECK(scaling_exponent(cycle(k)) == Rational(k, 2) - 1);
}

TEST_CASE("automorphisms") {
  CHECK(automorphism_count(OrientedMultigraph(1, {{0, 0}})) == 1);
  CHECK(automorphism_count(two_cycle()) == 2);
  CHECK(automorphism_count(OrientedMultigraph(2, {{0, 0}, {1, 1}})) == 2);
  CHECK(automorphism_count(cycle(4)) == 4);
  CHECK_THROWS_AS(automorphism_count(cycle(9)), Error);
  try {
    canonical_key(cycle(9));
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::limit_exceeded);
  }
}

TEST_CASE("canonical key") {
  CHECK(canonical_key(OrientedMultigraph(2, {{0, 1}, {1, 0}})) == canonical_key(OrientedMultigraph(2, {{1, 0}, {0, 1}})));
  CHECK(canonical_key(OrientedMultigraph(1, {{0, 0}})) != canonical_key(OrientedMultigraph(2, {{0, 1}})));

  const auto fig = figure_one();
  const auto key = canonical_key(fig);
  std::vector<int> perm{0, 1, 2, 3};
  int seen = 0;
  do {
    CHECK(canonical_key(fig.relabeled(perm)) == key);
    ++seen;
  } while (std::next_permutation(perm.begin(), perm.end()));
  CHECK(seen == 24);

  CHECK(canonical_key(graph_from_key(key)) == key);
  CHECK(canonical_key(canonical_graph(fig)) == key);
}

TEST_CASE("enumeration matches an exhaustive oracle") {
  CHECK(enumerate_graphs(1, 1).size() == 1);

  const auto two_one = enumerate_graphs(2, 1);
  CHECK(two_one.size() == 2);
  for (const auto& g : two_one) CHECK(g.edge_count() == 1);

  for (auto [v, e] : {std::pair{2, 2}, std::pair{3, 3}, std::pair{3, 2}, std::pair{4, 4}}) {
    CAPTURE(v);
    CAPTURE(e);
    const auto graphs = enumerate_graphs(v, e);
    CHECK(graphs.size() == oracle_class_count(v, e));
    std::set<CanonicalGraphKey> keys;
    for (const auto& g : graphs) keys.insert(canonical_key(g));
    CHECK(keys.size() == graphs.size());
  }
}

TEST_CASE("Euler lemma on every connected graph up to four vertices and edges") {
  int connected = 0;
  for (const auto& g : enumerate_graphs(4, 4)) {
    if (connected_components(g) != 1) continue;
    ++connected;
    CHECK(check_euler_lemma(g));
    CHECK((unbalanced_vertex_count(g) == 0) == is_eulerian(g));
  }
  CHECK(connected > 0);
  CHECK(check_euler_lemma(two_cycle()));
  CHECK(check_euler_lemma(OrientedMultigraph(2, {{0, 1}})));
  try {
    check_euler_lemma(OrientedMultigraph(2, {{0, 0}, {1, 1}}));
    FAIL("disconnected graph accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::not_connected);
  }
}

TEST_CASE("graph invariants over the enumeration") {
  std::mt19937_64 rng(11);
  for (const auto& g : enumerate_graphs(4, 4)) {
    int out = 0, in = 0;
    for (int v = 0; v < g.vertex_count(); ++v) {
      out += g.out_degree(v);
      in += g.in_degree(v);
    }
    CHECK(out == g.edge_count());
    CHECK(in == g.edge_count());
    CHECK(factorial(g.vertex_count()) % automorphism_count(g) == 0);
    CHECK(symmetry_factor(g) % automorphism_count(g) == 0);

    // Eulerian graphs made of disjoint oriented cycles: each cycle contributes k/2 - 1.
    if (is_eulerian(g) && g.edge_count() == g.vertex_count()) {
      CHECK(scaling_exponent(g) == Rational(g.edge_count(), 2) - connected_components(g));
    }

    const auto key = canonical_key(g);
    std::vector<int> perm(g.vertex_count());
    std::iota(perm.begin(), perm.end(), 0);
    for (int r = 0; r < 100; ++r) {
      std::shuffle(perm.begin(), perm.end(), rng);
      CHECK(canonical_key(g.relabeled(perm)) == key);
    }
  }
}

TEST_CASE("graph JSON roundtrip") {
  const auto fig = figure_one();
  CHECK(graph_from_json(to_json(fig)) == fig);
  CHECK_THROWS_AS(OrientedMultigraph(3, {{0, 1}}), Error);
}

TEST_CASE("set partitions count as Bell numbers") {
  const std::vector<std::uint64_t> bell{1, 1, 2, 5, 15, 52, 203};
  for (int n = 0; n < static_cast<int>(bell.size()); ++n) {
    CHECK(bell_number(n) == bell[n]);
    std::uint64_t counted = 0;
    for_each_set_partition(n, [&](const SetPartition&) { ++counted; });
    CHECK(counted == bell[n]);
  }
  CHECK(mobius_coefficient(1) == 1);
  CHECK(mobius_coefficient(2) == -1);
  CHECK(mobius_coefficient(3) == 2);
  CHECK(mobius_coefficient(4) == -6);
}
