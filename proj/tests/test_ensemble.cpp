#include <doctest.h>

#include <cmath>
#include <cstring>
#include <limits>
#include <sstream>

#include "wigner/cumulant.hpp"
#include "wigner/ensemble.hpp"
#include "wigner/error.hpp"
#include "wigner/metropolis.hpp"
#include "wigner/spectral.hpp"

using namespace wigner;

namespace {

bool identical(const HermitianMatrix& a, const HermitianMatrix& b) {
  return a.dimension() == b.dimension() &&
         std::memcmp(a.dense().data(), b.dense().data(), sizeof(std::complex<double>) * a.dense().size()) == 0;
}

// Simpson rule for E[X^k] under a density on [lo, hi].
template <class F>
double simpson(F f, double lo, double hi, int panels = 20000) {
  const double h = (hi - lo) / panels;
  double s = f(lo) + f(hi);
  for (int i = 1; i < panels; ++i) s += f(lo + i * h) * (i % 2 ? 4 : 2);
  return s * h / 3;
}

}  // namespace

TEST_CASE("GUE basics") {
  const auto zero = sample(GueSpec{0.0}, 6, 1);
  CHECK(zero.dense().isZero(0));

  const auto a = sample(GueSpec{1.0}, 16, 99, 3);
  const auto b = sample(GueSpec{1.0}, 16, 99, 3);
  CHECK(identical(a, b));
  CHECK_FALSE(identical(a, sample(GueSpec{1.0}, 16, 99, 4)));
  CHECK(a.is_exactly_hermitian());

  // Batch draws do not depend on the worker count.
  const auto one = sample_batch(GueSpec{1.0}, 12, 5, 6, 1);
  const auto three = sample_batch(GueSpec{1.0}, 12, 5, 6, 3);
  for (int i = 0; i < 6; ++i) CHECK(identical(one[i], three[i]));
}

TEST_CASE("GUE entry covariances") {
  // E[M_ij M_kl] = alpha^2 delta_il delta_jk for all 16 index combinations at N = 2.
  const double alpha = 1.3;
  const int draws = 100000;
  std::complex<double> sum[2][2][2][2] = {};
  double sum_sq[2][2][2][2] = {};
  for (int d = 0; d < draws; ++d) {
    const auto m = sample(GueSpec{alpha}, 2, 7, d);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k)
          for (int l = 0; l < 2; ++l) {
            const auto p = m(i, j) * m(k, l);
            sum[i][j][k][l] += p;
            sum_sq[i][j][k][l] += std::norm(p);
          }
  }
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) {
          const auto mean = sum[i][j][k][l] / double(draws);
          const double var = sum_sq[i][j][k][l] / draws - std::norm(mean);
          const double se = std::sqrt(var / draws);
          const double expected = (i == l && j == k) ? alpha * alpha : 0.0;
          CAPTURE(i);
          CAPTURE(j);
          CAPTURE(k);
          CAPTURE(l);
          CHECK(std::abs(mean - expected) < 5 * se);
        }
}

TEST_CASE("common noise") {
  CommonNoiseSpec cn;
  cn.beta = std::numeric_limits<double>::infinity();
  const auto base = sample(GueSpec{cn.alpha}, 10, 3, 2);
  CHECK(identical(sample(cn, 10, 3, 2), base));

  cn.beta = 0.25;
  cn.pattern = SupportPattern::off_diagonal;
  const auto m = sample(cn, 10, 3, 2);
  CHECK(m.is_exactly_hermitian());
  for (int i = 0; i < 10; ++i) CHECK(m(i, i) == base(i, i));
  // One shared shift on every off-diagonal entry.
  const auto shift = m(0, 1) - base(0, 1);
  CHECK(shift.real() != 0.0);
  for (int i = 0; i < 10; ++i)
    for (int j = i + 1; j < 10; ++j) CHECK(std::abs(m(i, j) - base(i, j) - shift) < 1e-12);
}

TEST_CASE("analytic cumulants of the ensembles") {
  CHECK(cumulant_spec_of(GueSpec{2.0}).alpha_squared() == 4);
  CHECK_FALSE(cumulant_spec_of(GueSpec{2.0}).has_perturbations());

  // Uniform noise on [-c, c]: cumulants from numerically integrated moments.
  const double c = 1.5;
  auto uniform_moment = [&](int k) {
    return simpson([&](double x) { return std::pow(x, k) / (2 * c); }, -c, c);
  };
  const double m2 = uniform_moment(2), m4 = uniform_moment(4);
  const double k4 = m4 - 3 * m2 * m2;
  CHECK(m2 == doctest::Approx(c * c / 3).epsilon(1e-10));
  CHECK(k4 == doctest::Approx(-2 * std::pow(c, 4) / 15).epsilon(1e-10));

  CommonNoiseSpec cn;
  cn.noise = {DistributionKind::uniform, c, 0.0};
  cn.beta = 0.75;
  const auto spec = cumulant_spec_of(cn, 4);
  bool saw2 = false, saw4 = false;
  for (const auto& p : spec.pattern_terms()) {
    if (p.order == 2) {
      saw2 = true;
      CHECK(to_double(p.amplitude.re) == doctest::Approx(m2).epsilon(1e-10));
      CHECK(p.n_exponent == doctest::Approx(1.5));
    }
    if (p.order == 4) {
      saw4 = true;
      CHECK(to_double(p.amplitude.re) == doctest::Approx(k4).epsilon(1e-10));
      CHECK(p.n_exponent == doctest::Approx(3.0));
    }
    CHECK(p.order % 2 == 0);
  }
  CHECK(saw2);
  CHECK(saw4);

  // Rademacher real and imaginary parts with scale s: fourth cumulant of each part is -2 s^4.
  WignerIidSpec w;
  w.offdiag = {DistributionKind::rademacher, std::sqrt(0.5), 0.0};
  w.diagonal = {DistributionKind::gaussian, 1.0, 0.0};
  const auto ws = cumulant_spec_of(w, 4);
  CHECK(to_double(ws.alpha_squared()) == doctest::Approx(1.0).epsilon(1e-15));
  const auto k4r = w.offdiag.cumulants(4)[3];
  CHECK(to_double(k4r) == doctest::Approx(-2 * 0.25));

  // The Hermitian entry cumulant <M12 M12 M21 M21>_c = kappa4(re) + kappa4(im) for independent parts.
  const std::vector<EntryIndex> e{{1, 2}, {1, 2}, {2, 1}, {2, 1}};
  CHECK(to_double(ws.block_cumulant_exact(e, 4).value().re) == doctest::Approx(2 * to_double(k4r)));
  // M12^4: kappa4(re) + i^4 kappa4(im); three factors M12 and one M21: i^3 (-i) = -1 cancels them.
  const std::vector<EntryIndex> e4{{1, 2}, {1, 2}, {1, 2}, {1, 2}};
  CHECK(to_double(ws.block_cumulant_exact(e4, 4).value().re) == doctest::Approx(2 * to_double(k4r)));
  const std::vector<EntryIndex> e31{{1, 2}, {1, 2}, {1, 2}, {2, 1}};
  CHECK(ws.block_cumulant_exact(e31, 4).value().is_zero());

  WignerIidSpec skewed;
  skewed.offdiag = {DistributionKind::exponential, 1.0, 0.0};
  CHECK_THROWS_AS(cumulant_spec_of(skewed), Error);
  CHECK_THROWS_AS(cumulant_spec_of(InvariantPotentialSpec{}), Error);
}

TEST_CASE("entry moments of the samplers match their cumulant specs") {
  // Fourth moment of one off-diagonal entry pair, sampled against moments_from_cumulants.
  WignerIidSpec w;
  w.offdiag = {DistributionKind::uniform, 1.0, 0.0};
  w.diagonal = {DistributionKind::uniform, 1.0, 0.0};
  CommonNoiseSpec cn;
  cn.beta = 0.25;
  const std::vector<EntryIndex> e{{1, 2}, {2, 1}, {1, 2}, {2, 1}};
  const std::vector<EntryIndex> d{{1, 1}, {1, 1}, {2, 2}, {2, 2}};
  for (const EnsembleSpec& spec : {EnsembleSpec{w}, EnsembleSpec{cn}}) {
    const int n = 3;
    const auto cs = cumulant_spec_of(spec, 4);
    for (const auto& entries : {e, d}) {
      const double exact = moments_from_cumulants(entries, cs, n).real();
      double s = 0, s2 = 0;
      const int draws = 40000;
      for (int r = 0; r < draws; ++r) {
        const auto m = sample(spec, n, 31, r);
        std::complex<double> p = 1;
        for (const auto& x : entries) p *= m(int(x.row - 1), int(x.col - 1));
        s += p.real();
        s2 += p.real() * p.real();
      }
      const double mean = s / draws;
      const double se = std::sqrt((s2 / draws - mean * mean) / draws);
      CHECK(std::abs(mean - exact) < 4 * se);
    }
  }
}

TEST_CASE("validation") {
  WignerIidSpec w;
  w.offdiag.mean = 0.5;
  try {
    validate(EnsembleSpec{w});
    FAIL("nonzero off-diagonal mean accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::invalid_spec);
  }
  CHECK_THROWS_AS(validate(EnsembleSpec{GueSpec{-1.0}}), Error);
  CommonNoiseSpec cn;
  cn.beta = -0.5;
  CHECK_THROWS_AS(validate(EnsembleSpec{cn}), Error);
}

TEST_CASE("serialization") {
  CommonNoiseSpec cn;
  cn.beta = 0.3;
  cn.pattern = SupportPattern::off_diagonal;
  cn.noise = {DistributionKind::exponential, 2.0, 0.0};
  InvariantPotentialSpec pot;
  pot.couplings = {{4, 1.0}, {6, 0.5}};
  for (const EnsembleSpec& spec : {EnsembleSpec{GueSpec{0.7}}, EnsembleSpec{cn}, EnsembleSpec{pot}}) {
    CHECK(to_json(ensemble_from_json(to_json(spec))) == to_json(spec));
  }

  const auto m = sample(GueSpec{1.0}, 3, 4);
  std::stringstream buf;
  write_matrix_binary(buf, m);
  const std::string bytes = buf.str();
  REQUIRE(bytes.size() == 8 + 9 * 16);
  CHECK(static_cast<unsigned char>(bytes[0]) == 3);
  for (int i = 1; i < 8; ++i) CHECK(bytes[i] == 0);
  double re01 = 0;
  std::memcpy(&re01, bytes.data() + 8 + 16, 8);
  CHECK(re01 == m(0, 1).real());
  CHECK(identical(read_matrix_binary(buf), m));
}

TEST_CASE("Metropolis increments agree with full re-evaluation") {
  InvariantPotentialSpec pot;
  pot.couplings = {{3, 0.4}, {4, 1.0}};
  MetropolisChain chain(pot, 7, make_stream(1, 7, 0));
  CHECK(chain.incremental());
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  for (int round = 0; round < 5; ++round) {
    chain.sweep();
    for (int t = 0; t < 40; ++t) {
      const int i = int(rng() % 7), j = int(rng() % 7);
      std::complex<double> delta(g(rng), i == j ? 0.0 : g(rng));
      const double full = chain.delta_full(i, j, delta);
      CHECK(chain.delta_incremental(i, j, delta) == doctest::Approx(full).epsilon(1e-9).scale(1.0));
    }
  }
  CHECK(chain.state().is_exactly_hermitian());

  InvariantPotentialSpec sextic;
  sextic.couplings = {{6, 1.0}};
  CHECK_FALSE(MetropolisChain(sextic, 4, make_stream(1, 4, 0)).incremental());
}

TEST_CASE("Metropolis potentials") {
  InvariantPotentialSpec odd;
  odd.couplings = {{3, 1.0}};
  try {
    check_bounded(odd);
    FAIL("odd top power accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::unbounded_potential);
  }
  InvariantPotentialSpec negative;
  negative.couplings = {{4, -1.0}};
  CHECK_THROWS_AS(check_bounded(negative), Error);
  CHECK_NOTHROW(check_bounded(InvariantPotentialSpec{}));

  InvariantPotentialSpec quartic;
  quartic.couplings = {{4, 1.0}};
  MetropolisChain chain(quartic, 32, make_stream(2, 32, 0));
  chain.run_burn_in();
  chain.next_sample();
  CHECK(chain.acceptance_rate() > 0.1);
  CHECK(chain.acceptance_rate() < 0.9);

  const auto again = metropolis_invariant(quartic, 16, 8);
  CHECK(identical(again, metropolis_invariant(quartic, 16, 8)));
  CHECK(again.is_exactly_hermitian());
}

TEST_CASE("Metropolis with zero couplings is GUE") {
  // Four normalized trace moments against directly sampled GUE at N = 32.
  const int n = 32;
  const auto chain = sample_batch(InvariantPotentialSpec{}, n, 12, 100);
  const auto direct = sample_batch(GueSpec{1.0}, n, 12, 100);
  for (int k = 1; k <= 4; ++k) {
    const auto a = trace_moment(chain, k);
    const auto b = trace_moment(direct, k);
    CAPTURE(k);
    CHECK(std::abs(a.estimate - b.estimate) <
          3 * std::hypot(a.standard_error, b.standard_error) + 1e-12);
  }
}
