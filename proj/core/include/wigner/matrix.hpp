#pragma once

#include <Eigen/Dense>

namespace wigner {

/// Dense Hermitian matrix. The lower triangle is always the exact conjugate of
/// the upper one and the diagonal is exactly real.
class HermitianMatrix {
 public:
  explicit HermitianMatrix(int n) : m_(Eigen::MatrixXcd::Zero(n, n)) {}

  // Symmetrizes from the upper triangle (diagonal real part kept).
  static HermitianMatrix from_upper(const Eigen::MatrixXcd& m);

  int dimension() const noexcept { return static_cast<int>(m_.rows()); }
  const Eigen::MatrixXcd& dense() const noexcept { return m_; }
  std::complex<double> operator()(int i, int j) const { return m_(i, j); }

  // Writes (i, j) and the mirrored (j, i) entry together.
  void set(int i, int j, std::complex<double> value);

  bool is_exactly_hermitian() const;

 private:
  Eigen::MatrixXcd m_;
};

}  // namespace wigner
