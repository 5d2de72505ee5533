#include "wigner/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <Eigen/Eigenvalues>

#include "wigner/error.hpp"
#include "wigner/parallel.hpp"

namespace wigner {

namespace {

class SelfAdjointBackend final : public EigenBackend {
 public:
  std::string name() const override { return "eigen-selfadjoint"; }

  Eigen::VectorXd eigenvalues(const Eigen::MatrixXcd& m) const override {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw Error(ErrorCode::backend_failure, "eigensolver did not converge");
    return solver.eigenvalues();
  }

  std::pair<Eigen::VectorXd, Eigen::MatrixXcd> eigensystem(const Eigen::MatrixXcd& m) const override {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m, Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success) throw Error(ErrorCode::backend_failure, "eigensolver did not converge");
    return {solver.eigenvalues(), solver.eigenvectors()};
  }
};

// Re Tr(A B) for Hermitian A, B.
double trace_product(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  return (a.array() * b.transpose().array()).sum().real();
}

}  // namespace

const EigenBackend& default_backend() {
  static const SelfAdjointBackend backend;
  return backend;
}

std::vector<double> eigenvalues(const HermitianMatrix& m, const EigenBackend& backend) {
  const double scale = 1.0 / std::sqrt(double(m.dimension()));
  const Eigen::VectorXd values = backend.eigenvalues(m.dense() * scale);
  std::vector<double> out(values.data(), values.data() + values.size());
  for (double v : out) {
    if (!std::isfinite(v)) throw Error(ErrorCode::backend_failure, "non-finite eigenvalue");
  }
  std::sort(out.begin(), out.end());
  return out;
}

double eigen_residual(const HermitianMatrix& m, const EigenBackend& backend) {
  const Eigen::MatrixXcd a = m.dense() / std::sqrt(double(m.dimension()));
  const auto [values, vectors] = backend.eigensystem(a);
  const double norm = a.norm();
  if (norm == 0.0) return 0.0;
  double worst = 0.0;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    worst = std::max(worst, (a * vectors.col(i) - values(i) * vectors.col(i)).norm());
  }
  return worst / norm;
}

std::map<int, double> normalized_traces(const HermitianMatrix& m, std::span<const int> ks) {
  std::map<int, double> out;
  if (ks.empty()) return out;
  const int kmax = *std::max_element(ks.begin(), ks.end());
  if (*std::min_element(ks.begin(), ks.end()) < 1) throw Error(ErrorCode::invalid_argument, "k must be >= 1");
  // powers[p] = M^p for p <= ceil(kmax / 2); Tr M^k = Tr(M^a M^b) with a + b = k.
  const int half = (kmax + 1) / 2;
  std::vector<Eigen::MatrixXcd> powers(half + 1);
  powers[1] = m.dense();
  for (int p = 2; p <= half; ++p) powers[p] = powers[p - 1] * powers[1];
  const double n = m.dimension();
  for (int k : ks) {
    double tr;
    if (k == 1) {
      tr = m.dense().trace().real();
    } else {
      const int a = k / 2;
      tr = trace_product(powers[a], powers[k - a]);
    }
    out[k] = tr / std::pow(n, 1.0 + k / 2.0);
  }
  return out;
}

double normalized_trace(const HermitianMatrix& m, int k) {
  const int ks[] = {k};
  return normalized_traces(m, ks).at(k);
}

MomentEstimate mean_and_error(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorCode::empty_input, "no values");
  const double count = double(values.size());
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= count;
  if (values.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / (count - 1) / count)};
}

MomentEstimate trace_moment(std::span<const HermitianMatrix> samples, int k, int workers) {
  if (samples.empty()) throw Error(ErrorCode::empty_input, "no samples");
  std::vector<double> values(samples.size());
  parallel_for(static_cast<int>(samples.size()), workers,
               [&](int s) { values[s] = normalized_trace(samples[s], k); });
  return mean_and_error(values);
}

SpectralSample analyze(std::span<const HermitianMatrix> samples, std::span<const int> ks, int workers,
                       bool with_eigenvalues) {
  if (samples.empty()) throw Error(ErrorCode::empty_input, "no samples");
  SpectralSample out;
  out.n = samples.front().dimension();
  const int count = static_cast<int>(samples.size());
  std::vector<std::map<int, double>> traces(count);
  if (with_eigenvalues) out.eigenvalue_batches.resize(count);
  parallel_for(count, workers, [&](int s) {
    if (samples[s].dimension() != out.n) throw Error(ErrorCode::invalid_argument, "mixed dimensions");
    traces[s] = normalized_traces(samples[s], ks);
    if (with_eigenvalues) out.eigenvalue_batches[s] = eigenvalues(samples[s]);
  });
  for (int k : ks) {
    std::vector<double> values(count);
    for (int s = 0; s < count; ++s) values[s] = traces[s].at(k);
    out.trace_moments[k] = mean_and_error(values);
  }
  return out;
}

double ks_distance(std::vector<double> values, const SemicircleLaw& law) {
  if (values.empty()) throw Error(ErrorCode::empty_input, "no eigenvalues");
  std::sort(values.begin(), values.end());
  const double n = double(values.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double f = law.cdf(values[i]);
    worst = std::max({worst, std::abs(double(i + 1) / n - f), std::abs(f - double(i) / n)});
  }
  return worst;
}

double ks_distance(const SpectralSample& sample, const SemicircleLaw& law) {
  std::vector<double> pooled;
  for (const auto& batch : sample.eigenvalue_batches) pooled.insert(pooled.end(), batch.begin(), batch.end());
  return ks_distance(std::move(pooled), law);
}

double Histogram::empirical_density(std::size_t bin) const {
  if (total == 0) return 0.0;
  return double(counts[bin]) / (double(total) * (edges[bin + 1] - edges[bin]));
}

Histogram histogram(const SpectralSample& sample, const SemicircleLaw& law, int bins) {
  if (bins < 1) throw Error(ErrorCode::invalid_argument, "bins must be >= 1");
  double lim = 2.2 * law.alpha;
  bool any = false;
  for (const auto& batch : sample.eigenvalue_batches) {
    for (double v : batch) {
      lim = std::max(lim, std::abs(v) * (1 + 1e-12));
      any = true;
    }
  }
  if (!any) throw Error(ErrorCode::empty_input, "no eigenvalues");
  if (lim == 0.0) lim = 1.0;
  Histogram h;
  h.edges.resize(bins + 1);
  for (int b = 0; b <= bins; ++b) h.edges[b] = -lim + 2 * lim * b / bins;
  h.counts.assign(bins, 0);
  for (const auto& batch : sample.eigenvalue_batches) {
    for (double v : batch) {
      int b = static_cast<int>(std::floor((v + lim) / (2 * lim) * bins));
      b = std::clamp(b, 0, bins - 1);
      ++h.counts[b];
      ++h.total;
    }
  }
  return h;
}

double l1_distance(const Histogram& h, const SemicircleLaw& law) {
  double total = 0.0;
  for (std::size_t b = 0; b < h.counts.size(); ++b) {
    const double lo = h.edges[b], hi = h.edges[b + 1];
    const double expected = (law.cdf(hi) - law.cdf(lo)) / (hi - lo);
    total += std::abs(h.empirical_density(b) - expected) * (hi - lo);
  }
  return total;
}

void write_histogram_csv(std::ostream& os, const Histogram& h, const SemicircleLaw& law) {
  os << "bin_left,bin_right,count,empirical_density,semicircle_density\n";
  for (std::size_t b = 0; b < h.counts.size(); ++b) {
    const double mid = 0.5 * (h.edges[b] + h.edges[b + 1]);
    os << h.edges[b] << ',' << h.edges[b + 1] << ',' << h.counts[b] << ',' << h.empirical_density(b) << ','
       << law.density(mid) << '\n';
  }
}

void write_moment_table_csv(std::ostream& os, const SpectralSample& sample, const SemicircleLaw& law) {
  os << "k,estimate,stderr,semicircle,z_score\n";
  for (const auto& [k, m] : sample.trace_moments) {
    const double target = law.moment(k);
    const double z = m.standard_error > 0 ? (m.estimate - target) / m.standard_error : 0.0;
    os << k << ',' << m.estimate << ',' << m.standard_error << ',' << target << ',' << z << '\n';
  }
}

}  // namespace wigner
