#include "wigner/metropolis.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "wigner/error.hpp"

namespace wigner {

namespace {

using Small = Eigen::Matrix2cd;

double trace_real(const Small& a) { return a.trace().real(); }

}  // namespace

void check_bounded(const InvariantPotentialSpec& spec) {
  for (auto it = spec.couplings.rbegin(); it != spec.couplings.rend(); ++it) {
    if (it->second == 0.0) continue;
    if (it->first % 2 != 0) throw Error(ErrorCode::unbounded_potential, "odd top power " + std::to_string(it->first));
    if (it->second < 0.0) throw Error(ErrorCode::unbounded_potential, "negative leading coupling");
    return;
  }
}

MetropolisChain::MetropolisChain(const InvariantPotentialSpec& spec, int n, std::mt19937_64 rng)
    : spec_(spec), n_(n), rng_(std::move(rng)), m_(n), step_(spec.step_size) {
  if (n < 1) throw Error(ErrorCode::invalid_argument, "N must be >= 1");
  validate(EnsembleSpec{spec});
  check_bounded(spec);
  coeff_[2] = 0.5;
  for (const auto& [p, g] : spec.couplings) {
    if (g == 0.0) continue;
    if (p > 4) {
      incremental_ = false;
      continue;
    }
    coeff_[p] += g * std::pow(double(n), 1.0 - p / 2.0) / p;
  }
  square_ = Eigen::MatrixXcd::Zero(n, n);
}

double MetropolisChain::potential(const HermitianMatrix& m) const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m.dense(), Eigen::EigenvaluesOnly);
  double total = 0.0;
  for (double lambda : solver.eigenvalues()) {
    double v = 0.5 * lambda * lambda;
    for (const auto& [p, g] : spec_.couplings) v += g * std::pow(double(n_), 1.0 - p / 2.0) / p * std::pow(lambda, p);
    total += v;
  }
  return total;
}

double MetropolisChain::potential() const { return potential(m_); }

double MetropolisChain::delta_full(int i, int j, std::complex<double> delta) const {
  HermitianMatrix moved = m_;
  moved.set(i, j, m_(i, j) + delta);
  return potential(moved) - potential(m_);
}

double MetropolisChain::delta_incremental(int i, int j, std::complex<double> delta) const {
  // Restrict every trace to the index set S = {i, j}: D = Delta_SS and
  // M1, M2, M3 the S-blocks of M, M^2, M^3.
  const int s = (i == j) ? 1 : 2;
  const int idx[2] = {i, j};
  Small d = Small::Zero(), m1 = Small::Zero(), m2 = Small::Zero(), m3 = Small::Zero();
  if (s == 1) {
    d(0, 0) = {delta.real(), 0.0};
  } else {
    d(0, 1) = delta;
    d(1, 0) = std::conj(delta);
  }
  const auto& m = m_.dense();
  for (int a = 0; a < s; ++a) {
    for (int b = 0; b < s; ++b) {
      m1(a, b) = m(idx[a], idx[b]);
      m2(a, b) = square_(idx[a], idx[b]);
    }
  }
  if (coeff_[4] != 0.0) {
    for (int a = 0; a < s; ++a) {
      for (int b = 0; b < s; ++b) {
        m3(a, b) = (square_.row(idx[a]) * m.col(idx[b]))(0, 0);
      }
    }
  }
  const Small d2 = d * d;
  double change = coeff_[2] * (2 * trace_real(d * m1) + trace_real(d2));
  if (coeff_[3] != 0.0) {
    change += coeff_[3] * (3 * trace_real(d * m2) + 3 * trace_real(d2 * m1) + trace_real(d2 * d));
  }
  if (coeff_[4] != 0.0) {
    change += coeff_[4] * (4 * trace_real(d * m3) + 4 * trace_real(d2 * m2) + 2 * trace_real(d * m1 * d * m1) +
                           4 * trace_real(d2 * d * m1) + trace_real(d2 * d2));
  }
  return change;
}

void MetropolisChain::apply(int i, int j, std::complex<double> delta) {
  if (incremental_) {
    // (M + D)^2 = M^2 + D M + M D + D^2, with D supported on rows/columns i, j.
    const auto& m = m_.dense();
    if (i == j) {
      const double x = delta.real();
      const Eigen::RowVectorXcd row = x * m.row(i);
      const Eigen::VectorXcd col = x * m.col(i);
      square_.row(i) += row;
      square_.col(i) += col;
      square_(i, i) += x * x;
    } else {
      const std::complex<double> dc = std::conj(delta);
      const Eigen::RowVectorXcd row_i = delta * m.row(j);
      const Eigen::RowVectorXcd row_j = dc * m.row(i);
      const Eigen::VectorXcd col_j = m.col(i) * delta;
      const Eigen::VectorXcd col_i = m.col(j) * dc;
      square_.row(i) += row_i;
      square_.row(j) += row_j;
      square_.col(j) += col_j;
      square_.col(i) += col_i;
      const double norm = std::norm(delta);
      square_(i, i) += norm;
      square_(j, j) += norm;
    }
  }
  m_.set(i, j, m_(i, j) + delta);
}

void MetropolisChain::refresh_square() {
  if (incremental_) square_ = m_.dense() * m_.dense();
}

void MetropolisChain::sweep() {
  std::uniform_int_distribution<int> pick(0, n_ - 1);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const long long moves = static_cast<long long>(n_) * (n_ + 1) / 2;
  for (long long move = 0; move < moves; ++move) {
    int i = pick(rng_);
    int j = pick(rng_);
    if (i > j) std::swap(i, j);
    std::complex<double> delta;
    if (i == j) {
      delta = {step_ * gauss(rng_), 0.0};
    } else {
      const double scale = step_ / std::sqrt(2.0);
      const double re = gauss(rng_);
      const double im = gauss(rng_);
      delta = {scale * re, scale * im};
    }
    const double change = incremental_ ? delta_incremental(i, j, delta) : delta_full(i, j, delta);
    ++proposals_;
    if (change <= 0.0 || unit(rng_) < std::exp(-change)) {
      apply(i, j, delta);
      ++accepted_;
    }
  }
  refresh_square();
}

void MetropolisChain::run_burn_in() {
  // Tune in blocks of 10 sweeps during the first half, then freeze the step.
  const int tuning = spec_.burn_in / 2;
  for (int s = 0; s < spec_.burn_in; ++s) {
    if (s < tuning && s % 10 == 0) {
      proposals_ = accepted_ = 0;
    }
    sweep();
    if (s < tuning && s % 10 == 9) {
      const double rate = acceptance_rate();
      step_ *= std::clamp(std::exp(2.0 * (rate - 0.5)), 0.5, 2.0);
    }
  }
  proposals_ = accepted_ = 0;
}

const HermitianMatrix& MetropolisChain::next_sample() {
  for (int s = 0; s < spec_.steps; ++s) sweep();
  return m_;
}

HermitianMatrix metropolis_invariant(const InvariantPotentialSpec& spec, int n, std::uint64_t seed) {
  MetropolisChain chain(spec, n, make_stream(seed, static_cast<std::uint64_t>(n), 0));
  chain.run_burn_in();
  return chain.state();
}

}  // namespace wigner
