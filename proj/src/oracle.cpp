#include "minvar/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "minvar/objectives.hpp"
#include "minvar/rng.hpp"

namespace minvar {

Matrix build_laplacian(const Matrix& points, double sigma) {
  if (points.rows() < 2) {
    throw ParameterError("build_laplacian: needs at least 2 points");
  }
  Matrix lap = kernel_matrix(points, sigma);
  const Vector degree = lap.rowwise().sum();
  lap *= -1.0;
  lap += degree.asDiagonal();
  return lap;
}

SpectralOracle spectral_embedding(const Matrix& points, double sigma, int p,
                                  bool drop_constant) {
  const Eigen::Index n = points.rows();
  if (p < 1) throw ParameterError("spectral_embedding: p must be >= 1");
  if (n <= p + 1) {
    throw ParameterError("spectral_embedding: needs n > p + 1, got n = " +
                         std::to_string(n) + ", p = " + std::to_string(p));
  }
  const Matrix lap = build_laplacian(points, sigma);
  const SymEig eig = sym_eig(lap);

  const int start = drop_constant ? 1 : 0;
  SpectralOracle oracle;
  oracle.includes_constant = !drop_constant;
  oracle.eigenvalues = eig.eigenvalues.segment(start, p);
  oracle.embedding =
      std::sqrt(static_cast<double>(n)) * eig.eigenvectors.middleCols(start, p);
  return oracle;
}

Matrix free_embedding_descent(const Matrix& points, double sigma, int p,
                              double lambda, int steps, std::uint64_t seed,
                              double learning_rate) {
  const Eigen::Index n = points.rows();
  if (n <= p) throw ParameterError("free_embedding_descent: needs n > p");
  if (steps < 0) throw ParameterError("free_embedding_descent: steps must be >= 0");

  const Matrix w = kernel_matrix(points, sigma);
  const Vector degree = w.rowwise().sum();
  const double n2 = static_cast<double>(n) * static_cast<double>(n);

  Rng rng(seed);
  Matrix phi(n, p);
  for (Eigen::Index i = 0; i < n; ++i)
    for (int j = 0; j < p; ++j) phi(i, j) = rng.normal();

  Matrix grad(n, p);
  for (int step = 0; step < steps; ++step) {
    grad.noalias() = degree.asDiagonal() * phi;
    grad.noalias() -= w * phi;
    grad *= 4.0 / n2;
    if (lambda > 0.0) {
      grad += lambda * zero_mean_orthogonality_penalty(phi).grad;
    }
    phi -= learning_rate * grad;
    if (!phi.allFinite()) {
      throw TrainingError("free_embedding_descent diverged", step);
    }
  }
  return phi;
}

ProbeModel probe_fit(const Matrix& features, const std::vector<int>& labels,
                     double ridge) {
  const Eigen::Index n = features.rows();
  const Eigen::Index p = features.cols();
  if (static_cast<Eigen::Index>(labels.size()) != n) {
    throw DimensionError("probe_fit: features/labels size mismatch");
  }
  if (!(ridge >= 0.0)) throw ParameterError("probe_fit: ridge must be >= 0");
  std::array<int, 4> counts{0, 0, 0, 0};
  for (int label : labels) {
    if (label < 0 || label > 3) {
      throw DataError("probe_fit: label out of range 0..3");
    }
    ++counts[label];
  }
  for (int c = 0; c < 4; ++c) {
    if (counts[c] == 0) {
      throw DataError("probe_fit: class " + std::to_string(c) +
                      " missing from training labels");
    }
  }

  Matrix x(n, p + 1);
  x.leftCols(p) = features;
  x.col(p).setOnes();
  Matrix targets = Matrix::Zero(n, 4);
  for (Eigen::Index i = 0; i < n; ++i) targets(i, labels[i]) = 1.0;

  Matrix gram = x.transpose() * x;
  gram += ridge * Matrix::Identity(p + 1, p + 1);
  const SymEig eig = sym_eig(gram);
  // Pseudo-inverse through the eigendecomposition; tiny eigenvalues are
  // dropped so ridge = 0 still works on rank-deficient designs.
  const double cutoff = 1e-12 * std::max(eig.eigenvalues.maxCoeff(), 0.0) +
                        1e-300;
  Vector inv = eig.eigenvalues;
  for (Eigen::Index i = 0; i < inv.size(); ++i) {
    inv[i] = eig.eigenvalues[i] > cutoff ? 1.0 / eig.eigenvalues[i] : 0.0;
  }
  ProbeModel model;
  model.weights = eig.eigenvectors * inv.asDiagonal() *
                  (eig.eigenvectors.transpose() * (x.transpose() * targets));
  return model;
}

std::vector<int> probe_predict(const ProbeModel& model, const Matrix& features) {
  const Eigen::Index p = model.weights.rows() - 1;
  if (features.cols() != p) {
    throw DimensionError("probe_predict: feature width mismatch");
  }
  Matrix scores = features * model.weights.topRows(p);
  scores.rowwise() += model.weights.row(p);
  std::vector<int> predictions(features.rows());
  for (Eigen::Index i = 0; i < features.rows(); ++i) {
    int best = 0;
    for (int c = 1; c < 4; ++c) {
      if (scores(i, c) > scores(i, best)) best = c;  // ties keep the smaller class
    }
    predictions[i] = best;
  }
  return predictions;
}

double probe_accuracy(const ProbeModel& model, const Matrix& features,
                      const std::vector<int>& labels) {
  if (static_cast<Eigen::Index>(labels.size()) != features.rows()) {
    throw DimensionError("probe_accuracy: features/labels size mismatch");
  }
  const std::vector<int> predictions = probe_predict(model, features);
  int hits = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (predictions[i] == labels[i]) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(labels.size());
}

std::vector<double> align(const Matrix& learned, const Matrix& oracle,
                          bool append_constant) {
  if (learned.rows() != oracle.rows()) {
    throw DimensionError("align: learned and oracle must cover the same points");
  }
  if (!append_constant) {
    return principal_angle_cosines(learned, oracle, "learned", "oracle");
  }
  Matrix learned_aug(learned.rows(), learned.cols() + 1);
  learned_aug.leftCols(learned.cols()) = learned;
  learned_aug.col(learned.cols()).setOnes();
  Matrix oracle_aug(oracle.rows(), oracle.cols() + 1);
  oracle_aug.leftCols(oracle.cols()) = oracle;
  oracle_aug.col(oracle.cols()).setOnes();
  return principal_angle_cosines(learned_aug, oracle_aug, "learned", "oracle");
}

std::pair<double, double> off_manifold_magnitude(const Network& net,
                                                 const Matrix& grid,
                                                 const Matrix& data,
                                                 double margin) {
  if (!(margin > 0.0)) {
    throw ParameterError("off_manifold_magnitude: margin must be positive");
  }
  const Matrix features = forward_batch(net, grid).output;
  double on_sum = 0.0, off_sum = 0.0;
  long on_count = 0, off_count = 0;
  const double margin2 = margin * margin;
  for (Eigen::Index g = 0; g < grid.rows(); ++g) {
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < data.rows(); ++i) {
      best = std::min(best, (grid.row(g) - data.row(i)).squaredNorm());
      if (best <= 0.0) break;
    }
    const double magnitude = features.row(g).norm();
    if (best <= margin2) {
      on_sum += magnitude;
      ++on_count;
    } else {
      off_sum += magnitude;
      ++off_count;
    }
  }
  if (on_count == 0) {
    throw DataError("off_manifold_magnitude: no grid point within margin of "
                    "the data (on-manifold side empty)");
  }
  if (off_count == 0) {
    throw DataError("off_manifold_magnitude: every grid point lies within "
                    "margin of the data (off-manifold side empty)");
  }
  return {on_sum / on_count, off_sum / off_count};
}

}  // namespace minvar
