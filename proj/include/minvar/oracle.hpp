#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "minvar/linalg.hpp"
#include "minvar/matrix.hpp"
#include "minvar/network.hpp"

namespace minvar {

// Unnormalized graph Laplacian diag(W 1) - W with the Gaussian kernel.
// Symmetric, positive semidefinite, rows sum to zero.
Matrix build_laplacian(const Matrix& points, double sigma);

struct SpectralOracle {
  Vector eigenvalues;  // ascending, one per embedding column
  Matrix embedding;    // n x p, scaled so (1/n) Phi^T Phi = I
  bool includes_constant = false;
};

// Bottom eigenvectors of the Laplacian, each scaled by sqrt(n). With
// drop_constant the first (constant) eigenvector is skipped.
SpectralOracle spectral_embedding(const Matrix& points, double sigma, int p,
                                  bool drop_constant);

// Gradient descent directly on the embedding entries ("table model"):
// graph energy plus lambda times the zero-mean orthogonality penalty, from a
// seeded standard-normal init. Converges to the bottom non-constant
// eigenspace, matching the spectral oracle up to orthogonal transforms.
Matrix free_embedding_descent(const Matrix& points, double sigma, int p,
                              double lambda, int steps, std::uint64_t seed,
                              double learning_rate = 2.0);

struct ProbeModel {
  Matrix weights;  // (p + 1) x 4, last row is the intercept
};

// One-vs-rest ridge least squares on features with an appended constant
// column; every class 0..3 must appear in the labels.
ProbeModel probe_fit(const Matrix& features, const std::vector<int>& labels,
                     double ridge);

std::vector<int> probe_predict(const ProbeModel& model, const Matrix& features);

double probe_accuracy(const ProbeModel& model, const Matrix& features,
                      const std::vector<int>& labels);

// Principal-angle cosines between the learned and oracle feature spans,
// evaluated on the same points. With append_constant a constant column is
// added to both sides first, so recovery is judged modulo the constant
// direction.
std::vector<double> align(const Matrix& learned, const Matrix& oracle,
                          bool append_constant);

// Mean feature magnitude ||phi|| over grid points within `margin` of the
// data (on) and farther away (off).
std::pair<double, double> off_manifold_magnitude(const Network& net,
                                                 const Matrix& grid,
                                                 const Matrix& data,
                                                 double margin);

}  // namespace minvar
