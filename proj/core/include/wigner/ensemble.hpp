#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <random>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "wigner/cumulant.hpp"
#include "wigner/distributions.hpp"
#include "wigner/matrix.hpp"

namespace wigner {

/// rho(M) ~ exp(-Tr M^2 / (2 alpha^2)).
struct GueSpec {
  double alpha = 1.0;
};

/// Independent entries: real diagonal, off-diagonal real and imaginary parts iid.
struct WignerIidSpec {
  ScalarDistribution diagonal;
  ScalarDistribution offdiag;
};

/// GUE base plus (s / N^beta) P with one scalar s shared by every entry of the
/// 0/1 pattern P. Its order-e cumulants are kappa_e(s) N^(-e beta) on every graph
/// supported on P.
struct CommonNoiseSpec {
  double alpha = 1.0;
  ScalarDistribution noise{DistributionKind::uniform, 1.0, 0.0};
  double beta = 0.5;
  SupportPattern pattern = SupportPattern::all_ones;
};

/// rho(M) ~ exp(-Tr V(M)), V(M) = M^2/2 + sum_p g_p N^(1-p/2) M^p / p.
struct InvariantPotentialSpec {
  std::map<int, double> couplings;
  int steps = 10;           // sweeps between returned samples
  double step_size = 1.0;   // initial proposal scale, adapted during burn-in
  int burn_in = 200;        // sweeps
};

using EnsembleSpec = std::variant<GueSpec, WignerIidSpec, CommonNoiseSpec, InvariantPotentialSpec>;

void validate(const EnsembleSpec& spec);

/// Independent stream for (seed, N, sample index); results do not depend on scheduling.
std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t n, std::uint64_t sample_index);

/// One draw, deterministic in (spec, N, seed, sample_index). Invariant potentials
/// run a fresh chain through burn-in.
HermitianMatrix sample(const EnsembleSpec& spec, int n, std::uint64_t seed, std::uint64_t sample_index = 0);

/// `count` draws. Direct samplers run on `workers` threads; invariant potentials
/// use one chain and return every `steps`-th sweep after burn-in.
std::vector<HermitianMatrix> sample_batch(const EnsembleSpec& spec, int n, std::uint64_t seed, int count,
                                          int workers = 1);

/// Analytic cumulants of the ensemble, orders up to max_order.
CumulantSpec cumulant_spec_of(const EnsembleSpec& spec, int max_order = 6);

nlohmann::json to_json(const EnsembleSpec& spec);
EnsembleSpec ensemble_from_json(const nlohmann::json& j);

// Little-endian: u64 dimension, then N*N (re, im) doubles row-major.
void write_matrix_binary(std::ostream& os, const HermitianMatrix& m);
HermitianMatrix read_matrix_binary(std::istream& is);

}  // namespace wigner
