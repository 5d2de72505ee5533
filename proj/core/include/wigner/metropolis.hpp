#pragma once

#include <array>
#include <cstdint>
#include <random>

#include "wigner/ensemble.hpp"

namespace wigner {

/// Entry-wise Metropolis chain for rho(M) ~ exp(-Tr V(M)). Each proposal shifts
/// one diagonal entry or one conjugate pair (M_ij, M_ji) by a Gaussian step.
/// Tr V differences are computed from M and M^2 in O(N) when the top power is at
/// most 4, and by full re-evaluation otherwise.
class MetropolisChain {
 public:
  MetropolisChain(const InvariantPotentialSpec& spec, int n, std::mt19937_64 rng);

  // N(N+1)/2 proposals at uniformly random positions.
  void sweep();
  // burn_in sweeps; the step size is tuned toward 50% acceptance on the way.
  void run_burn_in();
  // Advances `steps` sweeps and returns the state.
  const HermitianMatrix& next_sample();

  const HermitianMatrix& state() const noexcept { return m_; }
  double acceptance_rate() const noexcept { return proposals_ ? double(accepted_) / double(proposals_) : 0.0; }
  double step_size() const noexcept { return step_; }
  bool incremental() const noexcept { return incremental_; }

  // Tr V of the current state, by eigenvalues.
  double potential() const;
  double potential(const HermitianMatrix& m) const;
  // Change of Tr V if entry (i, j) moved by delta (and (j, i) by conj(delta)).
  double delta_incremental(int i, int j, std::complex<double> delta) const;
  double delta_full(int i, int j, std::complex<double> delta) const;

 private:
  void apply(int i, int j, std::complex<double> delta);
  void refresh_square();

  InvariantPotentialSpec spec_;
  int n_;
  std::mt19937_64 rng_;
  HermitianMatrix m_;
  Eigen::MatrixXcd square_;
  std::array<double, 5> coeff_{};  // coefficients of Tr M^p, p <= 4
  bool incremental_ = true;
  double step_;
  long long proposals_ = 0;
  long long accepted_ = 0;
};

// Throws UnboundedPotential when Tr V is not bounded below.
void check_bounded(const InvariantPotentialSpec& spec);

/// Fresh chain, burn-in, one state.
HermitianMatrix metropolis_invariant(const InvariantPotentialSpec& spec, int n, std::uint64_t seed);

}  // namespace wigner
