#pragma once

#include <string>

#include "minvar/matrix.hpp"
#include "minvar/network.hpp"
#include "minvar/rng.hpp"

namespace minvar {

enum class ObjectiveKind { kSsl, kGraphLaplacian, kDirichlet };

ObjectiveKind parse_objective(const std::string& name);
std::string objective_name(ObjectiveKind kind);

struct EnergyValue {
  double objective = 0.0;
  double penalty = 0.0;
  double lambda = 0.0;
  double total = 0.0;  // objective + lambda * penalty
};

// exp(-||x - y||^2 / sigma^2); 1 iff x == y.
double gaussian_kernel(const Vector& x, const Vector& y, double sigma);

// Dense kernel matrix with unit diagonal; rows of `points` are samples.
Matrix kernel_matrix(const Matrix& points, double sigma);

struct ValueGrad {
  double value = 0.0;
  ParamGradient grad;
};

// (1/m) sum_i ||phi(x_i) - phi(x_i + sigma xi_i)||^2 with xi drawn fresh from
// rng at every call; the gradient is exact for the drawn xi.
ValueGrad ssl_energy(const Network& net, const Matrix& batch, double sigma,
                     Rng& rng);

// (1/n^2) sum_{ij} W_ij ||Phi_i - Phi_j||^2 for a precomputed kernel matrix.
double graph_energy(const Matrix& embedding, const Matrix& weights);

// Same energy with W built from the batch, gradient through the network.
ValueGrad graph_energy_grad(const Network& net, const Matrix& batch,
                            double sigma);

// (1/m) sum_i ||D phi(x_i)||_F^2 via double backpropagation.
ValueGrad dirichlet_energy(const Network& net, const Matrix& batch);

struct PenaltyValueGrad {
  double value = 0.0;
  Matrix grad;  // with respect to the embedding entries
};

// || (1/n) Phi^T Phi - I ||_F^2; zero iff the columns of Phi / sqrt(n) are
// orthonormal. Gradient (4/n) Phi (C - I).
PenaltyValueGrad orthogonality_penalty(const Matrix& embedding);

// Training form: the same second-moment penalty plus 4 ||mean(Phi)||^2. The
// extra term keeps the constant feature direction out of the learned frame;
// without it the mean is the cheapest way to fill a covariance deficit and
// one feature drifts to a constant. Zero iff (1/n) Phi^T Phi = I and the
// column means vanish.
PenaltyValueGrad zero_mean_orthogonality_penalty(const Matrix& embedding);

// (1/n) sum_i || d_i Phi_i - (1/n) sum_j W_ij Phi_j ||^2 with
// d_i = (1/n) sum_j W_ij; kernel-smoothed variation diagnostic.
double smoothed_energy(const Matrix& embedding, const Matrix& points,
                       double sigma);

// Fused training step evaluation: objective value and, when lambda_pen > 0,
// the zero-mean orthogonality penalty on the batch embedding, with the
// parameter gradient of (objective + lambda_pen * penalty) accumulated into
// grad. penalty_only drops the objective term entirely.
struct BatchTerms {
  double objective = 0.0;
  double penalty = 0.0;
};
BatchTerms objective_with_penalty(const Network& net, ObjectiveKind kind,
                                  const Matrix& batch, double sigma, Rng& rng,
                                  double lambda_pen, bool penalty_only,
                                  const Matrix* batch_kernel,
                                  ParamGradient& grad);

}  // namespace minvar
