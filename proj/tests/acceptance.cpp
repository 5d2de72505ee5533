// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "wigner/cumulant.hpp"
#include "wigner/ensemble.hpp"
#include "wigner/error.hpp"
#include "wigner/flow.hpp"
#include "wigner/graph.hpp"
#include "wigner/harness.hpp"
#include "wigner/oracle.hpp"
#include "wigner/semicircle.hpp"
#include "wigner/spectral.hpp"

using namespace wigner;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " FAILED(" << what << ")";
    }
  }
};

// Every matrix drawn during the run, checked bit-exactly for criterion 8.
long long g_sampled = 0;
long long g_non_hermitian = 0;

std::vector<HermitianMatrix> draw(const EnsembleSpec& spec, int n, std::uint64_t seed, int count) {
  auto batch = sample_batch(spec, n, seed, count);
  for (const auto& m : batch) {
    ++g_sampled;
    if (!m.is_exactly_hermitian()) ++g_non_hermitian;
  }
  return batch;
}

bool within(double x, double lo, double hi) { return x >= lo && x <= hi; }

void semicircle_targets(Outcome& o, const std::vector<HermitianMatrix>& samples) {
  const std::vector<int> ks{2, 4, 6};
  const auto sp = analyze(samples, ks, 1, true);
  const double m2 = sp.trace_moments.at(2).estimate, m4 = sp.trace_moments.at(4).estimate,
               m6 = sp.trace_moments.at(6).estimate;
  const double ks_d = ks_distance(sp, SemicircleLaw{1.0});
  o.detail << "m2=" << m2 << " m4=" << m4 << " m6=" << m6 << " KS=" << ks_d;
  o.require(within(m2, 0.98, 1.02), "m2");
  o.require(within(m4, 1.9, 2.1), "m4");
  o.require(within(m6, 4.6, 5.4), "m6");
  o.require(ks_d <= 0.02, "KS");
}

Outcome criterion_1() {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  semicircle_targets(o, draw(GueSpec{1.0}, 512, 1, 100));
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  o.detail << " time=" << seconds << "s";
  o.require(seconds <= 300, "runtime");
  return o;
}

Outcome criterion_2() {
  Outcome o;
  const auto gue = CumulantSpec::gaussian(1.0);
  int compared = 0;
  for (long long N = 1; N <= 6; ++N) {
    for (int k : {2, 4, 6}) {
      const auto exact = exact_trace_moment(gue, N, k).exact;
      o.require(exact.has_value() && *exact == ComplexRational(wick_pairing_moment(k, N, Rational(1))),
                "N=" + std::to_string(N) + " k=" + std::to_string(k));
      if (k == 4) o.require(exact && *exact == ComplexRational(2 + Rational(1, N * N)), "2+1/N^2");
      ++compared;
    }
  }
  o.detail << compared << " exact comparisons, zero tolerance";
  return o;
}

Outcome criterion_3() {
  Outcome o;
  WignerIidSpec w;
  w.offdiag = {DistributionKind::rademacher, std::sqrt(0.5), 0.0};
  w.diagonal = {DistributionKind::uniform, std::sqrt(3.0), 0.0};
  semicircle_targets(o, draw(w, 512, 3, 100));
  return o;
}

Outcome criterion_4() {
  Outcome o;
  const std::vector<long long> grid{64, 256, 1024, 4096};
  const std::vector<int> k4{4};

  CommonNoiseSpec good;
  good.beta = 0.75;
  const auto good_report = run_condition_check(cumulant_spec_of(good), 4, 4, grid);
  const double good_m4 = analyze(draw(good, 256, 4, 100), k4, 1, false).trace_moments.at(4).estimate;
  o.detail << "beta=0.75: conditions " << (good_report.all_pass ? "pass" : "fail") << " m4=" << good_m4;
  o.require(good_report.all_pass, "beta=0.75 conditions");
  o.require(within(good_m4, 1.85, 2.15), "beta=0.75 m4");

  CommonNoiseSpec bad;
  bad.beta = 0.1;
  const auto bad_report = run_condition_check(cumulant_spec_of(bad), 4, 4, grid);
  const auto square = canonical_key(OrientedMultigraph(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}}));
  bool square_violates = false;
  double square_slope = 0;
  for (const auto& r : bad_report.records) {
    if (canonical_key(r.graph) != square) continue;
    square_violates = r.verdict == Verdict::violates && !r.pass;
    square_slope = r.slope.value_or(0);
  }
  const double bad_m4 = analyze(draw(bad, 256, 4, 100), k4, 1, false).trace_moments.at(4).estimate;
  o.detail << "; beta=0.1: 4-cycle slope " << square_slope << (square_violates ? " violates" : " passes")
           << " m4=" << bad_m4;
  o.require(square_violates, "4-cycle verdict");
  o.require(std::abs(square_slope - 0.6) < 1e-6, "4-cycle exponent");
  o.require(bad_m4 > 3, "beta=0.1 m4");
  return o;
}

Outcome criterion_5() {
  Outcome o;
  InvariantPotentialSpec quartic;
  quartic.couplings = {{4, 1.0}};
  quartic.steps = 20;
  const auto q = trace_moment(draw(quartic, 64, 5, 60), 4);
  const double z = std::abs(q.estimate - 2) / q.standard_error;
  o.detail << "g4=1: m4=" << q.estimate << " se=" << q.standard_error << " |m4-2|/se=" << z;
  o.require(z > 5, "quartic deviation");

  const auto chain = draw(InvariantPotentialSpec{}, 64, 6, 60);
  const auto direct = draw(GueSpec{1.0}, 64, 6, 60);
  double worst = 0;
  for (int k : {1, 2, 3, 4}) {
    const auto a = trace_moment(chain, k), b = trace_moment(direct, k);
    worst = std::max(worst, std::abs(a.estimate - b.estimate) / std::hypot(a.standard_error, b.standard_error));
  }
  o.detail << "; zero couplings vs GUE worst z=" << worst;
  o.require(worst < 3, "zero-coupling control");
  return o;
}

Outcome criterion_6() {
  Outcome o;
  const Rational a2(1);
  const double alpha = 1.0;
  const auto closed = green_closed_series(9, alpha);
  auto expected = [&](int p) -> Rational {
    if (p % 2 == 0) return 0;
    const int m = (p - 1) / 2;
    return Rational(catalan(m)) * rational_pow(a2, m);
  };

  // At t^4 the loop weight reaches 1/z^6; the higher coefficients need more orders.
  FlowTruncation t4;
  t4.max_t = 4;
  const auto four = green_series(run_flow(CumulantSpec::with_alpha_squared(a2), t4), 6);
  for (int p = 0; p <= 6; ++p) o.require(four.limit[p] == ComplexRational(expected(p)), "t^4 coefficient");
  bool refused = false;
  try {
    green_series(run_flow(CumulantSpec::with_alpha_squared(a2), t4), 9);
  } catch (const Error& e) {
    refused = e.code() == ErrorCode::insufficient_order;
  }
  o.require(refused, "t^4 cannot reach 1/z^9");

  FlowTruncation t7;
  t7.max_t = 7;
  t7.max_vertices = 8;
  t7.max_edges = 8;
  t7.prune_irrelevant = true;
  const auto seven = green_series(run_flow(CumulantSpec::with_alpha_squared(a2), t7), 9);
  double worst = 0;
  for (int p = 0; p <= 9; ++p) {
    o.require(seven.limit[p] == ComplexRational(expected(p)), "1/z^" + std::to_string(p));
    worst = std::max(worst, std::abs(seven.limit[p].to_complex().real() - closed[p]));
  }
  o.detail << "t^4 exact through 1/z^6; t^7 gives 1,1,2,5,14 exactly; |flow - closed form| <= " << worst;
  o.require(worst <= 1e-12, "closed-form series");
  return o;
}

Outcome criterion_7() {
  Outcome o;
  const auto triangle = canonical_key(OrientedMultigraph(3, {{0, 1}, {1, 2}, {2, 0}}));
  const auto edge = canonical_key(OrientedMultigraph(2, {{0, 1}}));
  FlowTruncation tr;
  tr.max_t = 4;

  const CumulantSpec mixed(1.0, {{triangle, ComplexRational(Rational(1, 2)), 1.0}, {edge, ComplexRational(1), 0.5}});
  const auto state = run_flow(mixed, tr);
  const auto report = verify_bound_propagation(state);
  std::map<int, bool> by_order;
  for (const auto& e : report.ledger) {
    auto [it, fresh] = by_order.try_emplace(e.t_power, true);
    it->second = it->second && e.pass;
  }
  bool every_order = by_order.size() == 5;
  for (const auto& [t, ok] : by_order) every_order = every_order && ok;
  o.detail << "mixed: " << report.ledger.size() << " ledger entries, orders 0-4 "
           << (every_order ? "pass" : "fail");
  o.require(report.hypotheses_hold && report.pass && every_order, "mixed ledger");
  o.require(state.stats.quadratic_events > 0, "quadratic events");
  o.require(state.stats.lemma_violations == 0, "Lemma 2 classification");
  o.detail << "; " << state.stats.quadratic_events << " quadratic events, " << state.stats.lemma_violations
           << " classification violations";

  const CumulantSpec eulerian(1.0, {{triangle, ComplexRational(1), 1.0}});
  const auto eu = check_bound_propagation(run_flow(eulerian, tr));
  long long eulerian_descendants = 0, non_vanishing = 0;
  for (const auto& e : eu.ledger) {
    if (e.sector != Sector::perturbation || !e.eulerian) continue;
    ++eulerian_descendants;
    if (!e.record.vanishing) ++non_vanishing;
  }
  o.detail << "; Eulerian-only: " << eulerian_descendants << " Eulerian descendants, " << non_vanishing
           << " non-vanishing";
  o.require(eulerian_descendants > 0 && non_vanishing == 0, "Eulerian-only input");
  o.require(eu.stats.lemma_violations == 0, "Lemma 2 classification (Eulerian-only)");
  return o;
}

Outcome criterion_8() {
  Outcome o;

  // Moment-cumulant roundtrip on random rational specs.
  const auto pool = enumerate_graphs(4, 4);
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> num(-9, 9), den(1, 7), pick(0, int(pool.size()) - 1), nterms(1, 6),
      order(1, 4);
  std::uniform_int_distribution<long long> idx(1, 3);
  int roundtrips = 0, roundtrip_failures = 0;
  for (int s = 0; s < 100; ++s) {
    std::map<CanonicalGraphKey, PerturbationTerm> chosen;
    const int count = nterms(rng);
    for (int t = 0; t < count; ++t) {
      const auto& g = pool[pick(rng)];
      const auto key = canonical_key(g), rev = canonical_key(g.reversed());
      if (chosen.count(key) || chosen.count(rev)) continue;
      chosen[key] = {key, ComplexRational(Rational(num(rng), den(rng)), Rational(num(rng), den(rng))), 0.0};
      if (key == rev) chosen[key].amplitude.im = 0;
    }
    std::vector<PerturbationTerm> terms;
    for (auto& [k, t] : chosen) terms.push_back(t);
    const auto spec = CumulantSpec::with_alpha_squared(Rational(den(rng), den(rng)), terms);
    for (int r = 0; r < 5; ++r) {
      std::vector<EntryIndex> e;
      const int k = order(rng);
      for (int i = 0; i < k; ++i) e.push_back({idx(rng), idx(rng)});
      auto moment = [&](std::span<const EntryIndex> sub) { return moments_from_cumulants_exact(sub, spec, 3).value(); };
      ++roundtrips;
      if (!(cumulants_from_moments_exact(moment, e) == spec.block_cumulant_exact(e, 3).value())) ++roundtrip_failures;
    }
  }
  o.detail << "roundtrip " << roundtrips - roundtrip_failures << "/" << roundtrips;
  o.require(roundtrip_failures == 0, "roundtrip");

  o.detail << "; hermitian " << g_sampled - g_non_hermitian << "/" << g_sampled;
  o.require(g_sampled > 0 && g_non_hermitian == 0, "Hermiticity");

  int connected = 0, lemma_failures = 0, relabelings = 0, key_failures = 0;
  for (const auto& g : pool) {
    if (connected_components(g) == 1) {
      ++connected;
      if (!check_euler_lemma(g)) ++lemma_failures;
    }
    const auto key = canonical_key(g);
    std::vector<int> perm(g.vertex_count());
    std::iota(perm.begin(), perm.end(), 0);
    for (int r = 0; r < 100; ++r) {
      std::shuffle(perm.begin(), perm.end(), rng);
      ++relabelings;
      if (canonical_key(g.relabeled(perm)) != key) ++key_failures;
    }
  }
  o.detail << "; Euler lemma " << connected - lemma_failures << "/" << connected << "; keys "
           << relabelings - key_failures << "/" << relabelings;
  o.require(lemma_failures == 0, "Euler lemma");
  o.require(key_failures == 0, "canonical key");

  // -(1/pi) Im G(lambda + i eps) against the density: error at most 2 eps and shrinking.
  double worst_ratio = 0;
  bool monotone = true;
  for (double lambda = -1.9; lambda <= 1.9; lambda += 0.1) {
    double previous = 1e9;
    for (double eps : {1e-2, 1e-3, 1e-4}) {
      const double boundary = -green_function_closed({lambda, eps}, 1.0).imag() / std::numbers::pi;
      const double err = std::abs(boundary - semicircle_density(lambda, 1.0));
      worst_ratio = std::max(worst_ratio, err / eps);
      monotone = monotone && err <= previous;
      previous = err;
    }
  }
  o.detail << "; Green boundary max err/eps=" << worst_ratio;
  o.require(worst_ratio <= 2 && monotone, "Green boundary");
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"semicircle moments, GUE N=512", criterion_1},
      {"finite-N oracle equals Wick pairings", criterion_2},
      {"Wigner universality, Rademacher/uniform N=512", criterion_3},
      {"common-noise dial beta=0.75 vs 0.1", criterion_4},
      {"quartic invariant potential deviates", criterion_5},
      {"flow reproduces Catalan coefficients", criterion_6},
      {"bound propagation ledger", criterion_7},
      {"property suites", criterion_8},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "exception: " << e.what();
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass) ++failed;
    std::printf("criterion %zu %s: %s [%s] (%.1fs)\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first.c_str(),
                o.detail.str().c_str(), seconds);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
