#include "minvar/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <string>

namespace minvar {

SymEig sym_eig(const Matrix& a) {
  if (a.rows() != a.cols()) {
    throw DimensionError("sym_eig: input must be square, got " +
                         std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  }
  if (a.rows() == 0) {
    throw DimensionError("sym_eig: empty input");
  }
  require_finite("sym_eig", a);
  const double scale = a.cwiseAbs().maxCoeff();
  const double asym = (a - a.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-10 * std::max(scale, 1e-300)) {
    throw DimensionError("sym_eig: input is not symmetric (max|A - A^T| = " +
                         std::to_string(asym) + ")");
  }

  const Matrix sym = 0.5 * (a + a.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw NumericError("sym_eig: eigensolver failed to converge");
  }

  SymEig result;
  result.eigenvalues = solver.eigenvalues();
  result.eigenvectors = solver.eigenvectors();
  // Canonical sign: largest-magnitude entry of each column positive.
  for (Eigen::Index j = 0; j < result.eigenvectors.cols(); ++j) {
    Eigen::Index arg = 0;
    result.eigenvectors.col(j).cwiseAbs().maxCoeff(&arg);
    if (result.eigenvectors(arg, j) < 0.0) result.eigenvectors.col(j) *= -1.0;
  }
  return result;
}

Matrix orthonormal_columns(const Matrix& a, const char* name) {
  const Eigen::Index n = a.rows();
  const Eigen::Index k = a.cols();
  if (k < 1 || n < k) {
    throw DimensionError(std::string("orthonormal_columns: ") + name +
                         " must be n x k with n >= k >= 1");
  }
  require_finite(name, a);
  Eigen::ColPivHouseholderQR<Matrix> qr(a);
  if (qr.rank() < k) {
    throw RankError(std::string("principal angles: input ") + name +
                    " is rank-deficient (rank " + std::to_string(qr.rank()) +
                    " < " + std::to_string(k) + " columns)");
  }
  Matrix q = qr.householderQ() * Matrix::Identity(n, k);
  return q;
}

std::vector<double> principal_angle_cosines(const Matrix& a, const Matrix& b,
                                            const char* name_a,
                                            const char* name_b) {
  if (a.rows() != b.rows()) {
    throw DimensionError("principal angles: inputs live in different spaces (" +
                         std::to_string(a.rows()) + " vs " +
                         std::to_string(b.rows()) + " rows)");
  }
  const Matrix qa = orthonormal_columns(a, name_a);
  const Matrix qb = orthonormal_columns(b, name_b);
  const Matrix overlap = qa.transpose() * qb;
  Eigen::JacobiSVD<Matrix> svd(overlap);
  Vector sv = svd.singularValues();  // descending
  std::vector<double> cosines(sv.size());
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    cosines[i] = std::clamp(sv[i], 0.0, 1.0);
  }
  return cosines;
}

Matrix random_orthogonal(int n, Rng& rng) {
  Matrix g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = rng.normal();
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    if (r(j, j) < 0.0) q.col(j) *= -1.0;
  }
  return q;
}

}  // namespace minvar
