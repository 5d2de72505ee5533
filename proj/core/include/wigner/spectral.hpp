#pragma once

#include <iosfwd>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "wigner/matrix.hpp"
#include "wigner/semicircle.hpp"

namespace wigner {

/// Dense Hermitian eigensolver. Implementations return eigenvalues in any order;
/// callers sort.
class EigenBackend {
 public:
  virtual ~EigenBackend() = default;
  virtual std::string name() const = 0;
  virtual Eigen::VectorXd eigenvalues(const Eigen::MatrixXcd& m) const = 0;
  // Eigenpairs, used for residual checks.
  virtual std::pair<Eigen::VectorXd, Eigen::MatrixXcd> eigensystem(const Eigen::MatrixXcd& m) const = 0;
};

// Eigen's SelfAdjointEigenSolver.
const EigenBackend& default_backend();

/// Sorted eigenvalues of M / sqrt(N).
std::vector<double> eigenvalues(const HermitianMatrix& m, const EigenBackend& backend = default_backend());

// max_i |(A v_i - l_i v_i)| / |A| for A = M / sqrt(N).
double eigen_residual(const HermitianMatrix& m, const EigenBackend& backend = default_backend());

struct MomentEstimate {
  double estimate = 0.0;
  double standard_error = 0.0;
};

// Tr M^k / N^(1 + k/2) for one matrix, by matrix products.
double normalized_trace(const HermitianMatrix& m, int k);
// Same for several k sharing the powers.
std::map<int, double> normalized_traces(const HermitianMatrix& m, std::span<const int> ks);

MomentEstimate mean_and_error(std::span<const double> values);

MomentEstimate trace_moment(std::span<const HermitianMatrix> samples, int k, int workers = 1);

struct SpectralSample {
  int n = 0;
  std::vector<std::vector<double>> eigenvalue_batches;
  std::map<int, MomentEstimate> trace_moments;
};

SpectralSample analyze(std::span<const HermitianMatrix> samples, std::span<const int> ks, int workers = 1,
                       bool with_eigenvalues = true);

// sup |F_empirical - F_law| over the pooled sample.
double ks_distance(std::vector<double> values, const SemicircleLaw& law);
double ks_distance(const SpectralSample& sample, const SemicircleLaw& law);

struct Histogram {
  std::vector<double> edges;  // bins + 1
  std::vector<long long> counts;
  long long total = 0;

  double empirical_density(std::size_t bin) const;
};

// Bins span [-lim, lim] with lim slightly beyond the law's edge (or the sample range if wider).
Histogram histogram(const SpectralSample& sample, const SemicircleLaw& law, int bins = 61);

// Integral of |empirical density - law density| over the histogram support.
double l1_distance(const Histogram& h, const SemicircleLaw& law);

void write_histogram_csv(std::ostream& os, const Histogram& h, const SemicircleLaw& law);
void write_moment_table_csv(std::ostream& os, const SpectralSample& sample, const SemicircleLaw& law);

}  // namespace wigner
