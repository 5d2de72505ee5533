#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "wigner/ensemble.hpp"
#include "wigner/error.hpp"
#include "wigner/semicircle.hpp"
#include "wigner/spectral.hpp"

using namespace wigner;

namespace {

double quadrature_moment(int k, double alpha) {
  boost::math::quadrature::tanh_sinh<double> integrator;
  return integrator.integrate(
      [&](double x) { return std::pow(x, k) * std::sqrt(4 * alpha * alpha - x * x) / (2 * std::numbers::pi * alpha * alpha); },
      -2 * alpha, 2 * alpha);
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

}  // namespace

TEST_CASE("eigenvalues") {
  const HermitianMatrix zero(5);
  for (double x : eigenvalues(zero)) CHECK(x == 0.0);

  HermitianMatrix d(3);
  for (int i = 0; i < 3; ++i) d.set(i, i, (i + 1) * std::sqrt(3.0));
  const auto ev = eigenvalues(d);
  REQUIRE(ev.size() == 3);
  for (int i = 0; i < 3; ++i) CHECK(ev[i] == doctest::Approx(i + 1).epsilon(1e-12));

  const auto g = sample(GueSpec{1.0}, 4, 21);
  const auto gv = eigenvalues(g);
  double sum = 0;
  for (double x : gv) sum += x;
  CHECK(std::abs(sum - g.dense().trace().real() / 2.0) < 1e-10);
  CHECK(std::is_sorted(gv.begin(), gv.end()));

  for (int s = 0; s < 5; ++s) CHECK(eigen_residual(sample(GueSpec{1.0}, 40, 3, s)) <= 1e-8);
  CHECK(default_backend().name().size() > 0);
}

TEST_CASE("trace moments") {
  HermitianMatrix id(4);
  for (int i = 0; i < 4; ++i) id.set(i, i, 1.0);
  const std::vector<HermitianMatrix> one{id};
  CHECK(trace_moment(one, 2).estimate == doctest::Approx(0.25));
  CHECK(trace_moment(one, 2).standard_error == 0.0);

  const std::vector<HermitianMatrix> none;
  try {
    trace_moment(none, 2);
    FAIL("empty sample accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::empty_input);
  }

  const auto samples = sample_batch(GueSpec{1.0}, 256, 4, 100);
  const auto m2 = trace_moment(samples, 2);
  CHECK(std::abs(m2.estimate - 1.0) < 4 * m2.standard_error + 1.0 / (256.0 * 256.0));
  CHECK(m2.standard_error < 0.01);
  const auto m1 = trace_moment(samples, 1);
  CHECK(std::abs(m1.estimate) < 4 * m1.standard_error);

  // Matrix powers against eigenvalue power sums.
  const std::vector<int> ks{1, 2, 3, 4, 6, 8};
  for (int s = 0; s < 4; ++s) {
    const auto& m = samples[s];
    const auto ev = eigenvalues(m);
    for (int k : ks) {
      double power_sum = 0;
      for (double x : ev) power_sum += std::pow(x, k);
      CHECK(normalized_trace(m, k) == doctest::Approx(power_sum / 256.0).epsilon(1e-8).scale(1.0));
    }
  }
}

TEST_CASE("semicircle law") {
  for (int k : {2, 4, 6, 8, 10}) {
    for (double alpha : {1.0, 0.6}) {
      CHECK(std::abs(semicircle_moment(k, alpha) - quadrature_moment(k, alpha)) < 1e-10);
    }
  }
  CHECK(semicircle_moment(3, 1.0) == 0.0);
  CHECK(semicircle_moment(2, 1.0) == 1.0);
  CHECK(semicircle_moment(4, 1.0) == 2.0);
  CHECK(semicircle_moment(6, 1.0) == 5.0);
  CHECK(semicircle_moment(8, 1.0) == 14.0);
  CHECK(semicircle_moment_exact(6, Rational(1, 4)) == Rational(5, 64));

  // m_{2k} / alpha^2 = sum_j m_{2j} m_{2(k-1-j)}.
  const double a = 0.8;
  for (int k = 1; k <= 6; ++k) {
    double conv = 0;
    for (int j = 0; j < k; ++j) conv += semicircle_moment(2 * j, a) * semicircle_moment(2 * (k - 1 - j), a);
    CHECK(semicircle_moment(2 * k, a) / (a * a) == doctest::Approx(conv).epsilon(1e-12));
  }

  CHECK(semicircle_density(0, 1) == doctest::Approx(1 / std::numbers::pi).epsilon(1e-14));
  CHECK(semicircle_density(2.5, 1) == 0.0);
  CHECK(semicircle_cdf(-2, 1) == 0.0);
  CHECK(semicircle_cdf(2, 1) == doctest::Approx(1.0).epsilon(1e-15));
  boost::math::quadrature::tanh_sinh<double> integrator;
  CHECK(std::abs(integrator.integrate([](double x) { return semicircle_density(x, 1.3); }, -2.6, 2.6) - 1) < 1e-10);
  double prev = 0;
  for (double x = -2; x <= 2; x += 0.01) {
    const double c = semicircle_cdf(x, 1);
    CHECK(c >= prev);
    prev = c;
  }
  const SemicircleLaw law{1.0};
  for (double u : {0.05, 0.3, 0.5, 0.9}) CHECK(law.cdf(law.quantile(u)) == doctest::Approx(u).epsilon(1e-9));
  CHECK(catalan(7) == 429);
}

TEST_CASE("KS distance") {
  const SemicircleLaw law{1.0};
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<double> exact;
  for (int i = 0; i < 100000; ++i) exact.push_back(law.quantile(u(rng)));
  CHECK(ks_distance(exact, law) <= 0.01);
  CHECK(ks_distance(std::vector<double>(50, 0.0), law) >= 0.5);
  CHECK_THROWS_AS(ks_distance(std::vector<double>{}, law), Error);
}

TEST_CASE("Green function of the semicircle") {
  CHECK(green_function_closed(10.0, 1.0).real() == doctest::Approx(0.1010205144).epsilon(1e-10));
  const double a = 0.9;
  for (std::complex<double> z : {std::complex<double>(0.3, 0.5), {-3.0, 0.1}, {2.5, -1.0}, {0.0, 4.0}}) {
    const auto g = green_function_closed(z, a);
    CHECK(std::abs(green_function_closed(std::conj(z), a) - std::conj(g)) < 1e-14);
    CHECK(std::abs(g - 1.0 / (z - a * a * g)) < 1e-12);
  }
  const auto large = green_function_closed({1e4, 1.0}, a);
  CHECK(std::abs(large * std::complex<double>(1e4, 1.0) - 1.0) < 1e-6);

  const auto series = green_closed_series(9, a);
  const double expected[] = {0, 1, 0, a * a, 0, 2 * std::pow(a, 4), 0, 5 * std::pow(a, 6), 0, 14 * std::pow(a, 8)};
  for (int p = 0; p <= 9; ++p) CHECK(std::abs(series[p] - expected[p]) < 1e-12);

  try {
    green_function_closed({0.5, 0.0}, 1.0);
    FAIL("point on the cut accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::on_cut);
  }

  // Boundary values converge to the density at rate O(eps).
  for (double lambda : {-1.5, -0.2, 0.0, 0.7, 1.9}) {
    double previous = 1;
    for (double eps : {1e-2, 1e-3, 1e-4}) {
      const double boundary = -green_function_closed({lambda, eps}, 1.0).imag() / std::numbers::pi;
      const double err = std::abs(boundary - semicircle_density(lambda, 1.0));
      CHECK(err <= 2 * eps);
      CHECK(err <= previous);
      previous = err;
    }
  }
}

TEST_CASE("histograms converge") {
  const SemicircleLaw law{1.0};
  double previous = 1e9;
  const std::vector<int> ks;
  for (int n : {64, 128, 256, 512}) {
    const auto samples = sample_batch(GueSpec{1.0}, n, 77, 8);
    const auto sp = analyze(samples, ks, 1, true);
    const auto h = histogram(sp, law, 41);
    CHECK(h.total == 8 * n);
    const double l1 = l1_distance(h, law);
    CAPTURE(n);
    CHECK(l1 < previous);
    previous = l1;
  }
}

TEST_CASE("CSV layouts") {
  const SemicircleLaw law{1.0};
  const std::vector<int> ks{2, 4};
  const auto sp = analyze(sample_batch(GueSpec{1.0}, 16, 1, 4), ks);
  std::ostringstream hist, moments;
  write_histogram_csv(hist, histogram(sp, law, 11), law);
  write_moment_table_csv(moments, sp, law);
  CHECK(first_line(hist.str()) == "bin_left,bin_right,count,empirical_density,semicircle_density");
  CHECK(first_line(moments.str()) == "k,estimate,stderr,semicircle,z_score");
  const std::string text = hist.str();
  CHECK(std::count(text.begin(), text.end(), '\n') == 12);
  CHECK(sp.eigenvalue_batches.size() == 4);
  for (const auto& b : sp.eigenvalue_batches) CHECK(std::is_sorted(b.begin(), b.end()));
}
