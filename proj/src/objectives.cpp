#include "minvar/objectives.hpp"

#include <cmath>
#include <string>

namespace minvar {

ObjectiveKind parse_objective(const std::string& name) {
  if (name == "ssl") return ObjectiveKind::kSsl;
  if (name == "graph") return ObjectiveKind::kGraphLaplacian;
  if (name == "dirichlet") return ObjectiveKind::kDirichlet;
  throw ParameterError("unknown objective '" + name +
                       "' (expected ssl, graph or dirichlet)");
}

std::string objective_name(ObjectiveKind kind) {
  switch (kind) {
    case ObjectiveKind::kSsl: return "ssl";
    case ObjectiveKind::kGraphLaplacian: return "graph";
    case ObjectiveKind::kDirichlet: return "dirichlet";
  }
  return "?";
}

double gaussian_kernel(const Vector& x, const Vector& y, double sigma) {
  if (!(sigma > 0.0)) {
    throw ParameterError("gaussian_kernel: sigma must be positive");
  }
  if (x.size() != y.size()) {
    throw DimensionError("gaussian_kernel: point dimensions differ");
  }
  return std::exp(-(x - y).squaredNorm() / (sigma * sigma));
}

Matrix kernel_matrix(const Matrix& points, double sigma) {
  if (!(sigma > 0.0)) {
    throw ParameterError("kernel_matrix: sigma must be positive");
  }
  const Eigen::Index n = points.rows();
  const double inv = 1.0 / (sigma * sigma);
  Matrix w(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    w(i, i) = 1.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double d2 = (points.row(i) - points.row(j)).squaredNorm();
      const double value = std::exp(-d2 * inv);
      w(i, j) = value;
      w(j, i) = value;
    }
  }
  return w;
}

namespace {

// d(E)/d(Phi) upstream for the graph energy given the batch kernel.
Matrix graph_upstream(const Matrix& weights, const Matrix& embedding) {
  const double n = static_cast<double>(embedding.rows());
  const Vector degree = weights.rowwise().sum();
  Matrix lap_phi = degree.asDiagonal() * embedding;
  lap_phi.noalias() -= weights * embedding;
  return (4.0 / (n * n)) * lap_phi;
}

double graph_value(const Matrix& weights, const Matrix& embedding) {
  const double n = static_cast<double>(embedding.rows());
  const Vector degree = weights.rowwise().sum();
  Matrix lap_phi = degree.asDiagonal() * embedding;
  lap_phi.noalias() -= weights * embedding;
  return (2.0 / (n * n)) * (embedding.array() * lap_phi.array()).sum();
}

}  // namespace

ValueGrad ssl_energy(const Network& net, const Matrix& batch, double sigma,
                     Rng& rng) {
  if (batch.rows() < 1) throw ParameterError("ssl_energy: empty batch");
  if (!(sigma > 0.0)) throw ParameterError("ssl_energy: sigma must be positive");
  const Eigen::Index m = batch.rows();
  Matrix augmented(m, batch.cols());
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index c = 0; c < batch.cols(); ++c)
      augmented(i, c) = batch(i, c) + sigma * rng.normal();

  ForwardCache clean = forward_batch(net, batch);
  ForwardCache shifted = forward_batch(net, augmented);
  const Matrix diff = clean.output - shifted.output;

  ValueGrad out;
  out.value = diff.squaredNorm() / static_cast<double>(m);
  out.grad = ParamGradient::zeros_like(net);
  const Matrix upstream = (2.0 / static_cast<double>(m)) * diff;
  backward_batch(net, clean, upstream, out.grad);
  backward_batch(net, shifted, Matrix(-upstream), out.grad);
  return out;
}

double graph_energy(const Matrix& embedding, const Matrix& weights) {
  if (weights.rows() != weights.cols() || weights.rows() != embedding.rows()) {
    throw DimensionError("graph_energy: kernel/embedding shape mismatch");
  }
  const double scale = weights.cwiseAbs().maxCoeff();
  if ((weights - weights.transpose()).cwiseAbs().maxCoeff() >
      1e-10 * std::max(scale, 1e-300)) {
    throw DimensionError("graph_energy: kernel matrix must be symmetric");
  }
  return graph_value(weights, embedding);
}

ValueGrad graph_energy_grad(const Network& net, const Matrix& batch,
                            double sigma) {
  if (batch.rows() < 2) {
    throw ParameterError("graph_energy_grad: batch must hold at least 2 points");
  }
  const Matrix weights = kernel_matrix(batch, sigma);
  ForwardCache cache = forward_batch(net, batch);
  ValueGrad out;
  out.value = graph_value(weights, cache.output);
  out.grad = ParamGradient::zeros_like(net);
  backward_batch(net, cache, graph_upstream(weights, cache.output), out.grad);
  return out;
}

ValueGrad dirichlet_energy(const Network& net, const Matrix& batch) {
  if (batch.rows() < 1) throw ParameterError("dirichlet_energy: empty batch");
  const double m = static_cast<double>(batch.rows());
  ForwardCache cache = forward_batch(net, batch);
  ValueGrad out;
  out.grad = ParamGradient::zeros_like(net);
  out.value = jacobian_sqnorm_backward(net, cache, 1.0 / m, nullptr, out.grad) / m;
  return out;
}

PenaltyValueGrad orthogonality_penalty(const Matrix& embedding) {
  const Eigen::Index n = embedding.rows();
  const Eigen::Index p = embedding.cols();
  if (n < p) {
    throw ParameterError("orthogonality_penalty: needs n >= p (constraint "
                         "infeasible otherwise)");
  }
  const Matrix c = (embedding.transpose() * embedding) / static_cast<double>(n);
  const Matrix deficit = c - Matrix::Identity(p, p);
  PenaltyValueGrad out;
  out.value = deficit.squaredNorm();
  out.grad = (4.0 / static_cast<double>(n)) * (embedding * deficit);
  return out;
}

PenaltyValueGrad zero_mean_orthogonality_penalty(const Matrix& embedding) {
  PenaltyValueGrad out = orthogonality_penalty(embedding);
  const double n = static_cast<double>(embedding.rows());
  const Eigen::RowVectorXd mean = embedding.colwise().mean();
  out.value += 4.0 * mean.squaredNorm();
  out.grad.rowwise() += (8.0 / n) * mean;
  return out;
}

double smoothed_energy(const Matrix& embedding, const Matrix& points,
                       double sigma) {
  if (points.rows() != embedding.rows()) {
    throw DimensionError("smoothed_energy: points/embedding row mismatch");
  }
  if (points.rows() < 2) {
    throw ParameterError("smoothed_energy: needs at least 2 points");
  }
  const double n = static_cast<double>(points.rows());
  const Matrix w = kernel_matrix(points, sigma);
  const Vector degree = w.rowwise().sum() / n;
  Matrix conv = (w * embedding) / n;
  conv -= degree.asDiagonal() * embedding;
  return conv.squaredNorm() / n;
}

BatchTerms objective_with_penalty(const Network& net, ObjectiveKind kind,
                                  const Matrix& batch, double sigma, Rng& rng,
                                  double lambda_pen, bool penalty_only,
                                  const Matrix* batch_kernel,
                                  ParamGradient& grad) {
  BatchTerms terms;
  const Eigen::Index m = batch.rows();

  if (penalty_only) {
    ForwardCache cache = forward_batch(net, batch);
    PenaltyValueGrad pen = zero_mean_orthogonality_penalty(cache.output);
    terms.penalty = pen.value;
    backward_batch(net, cache, Matrix(lambda_pen * pen.grad), grad);
    return terms;
  }

  switch (kind) {
    case ObjectiveKind::kSsl: {
      Matrix augmented(m, batch.cols());
      for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index c = 0; c < batch.cols(); ++c)
          augmented(i, c) = batch(i, c) + sigma * rng.normal();
      ForwardCache clean = forward_batch(net, batch);
      ForwardCache shifted = forward_batch(net, augmented);
      const Matrix diff = clean.output - shifted.output;
      terms.objective = diff.squaredNorm() / static_cast<double>(m);
      Matrix upstream = (2.0 / static_cast<double>(m)) * diff;
      PenaltyValueGrad pen = zero_mean_orthogonality_penalty(clean.output);
      terms.penalty = pen.value;
      if (lambda_pen > 0.0) upstream += lambda_pen * pen.grad;
      backward_batch(net, clean, upstream, grad);
      backward_batch(net, shifted,
                     Matrix((-2.0 / static_cast<double>(m)) * diff), grad);
      return terms;
    }
    case ObjectiveKind::kGraphLaplacian: {
      Matrix local;
      const Matrix* weights = batch_kernel;
      if (weights == nullptr) {
        local = kernel_matrix(batch, sigma);
        weights = &local;
      }
      ForwardCache cache = forward_batch(net, batch);
      terms.objective = graph_value(*weights, cache.output);
      Matrix upstream = graph_upstream(*weights, cache.output);
      PenaltyValueGrad pen = zero_mean_orthogonality_penalty(cache.output);
      terms.penalty = pen.value;
      if (lambda_pen > 0.0) upstream += lambda_pen * pen.grad;
      backward_batch(net, cache, upstream, grad);
      return terms;
    }
    case ObjectiveKind::kDirichlet: {
      ForwardCache cache = forward_batch(net, batch);
      const Matrix* upstream = nullptr;
      Matrix pen_upstream;
      PenaltyValueGrad pen = zero_mean_orthogonality_penalty(cache.output);
      terms.penalty = pen.value;
      if (lambda_pen > 0.0) {
        pen_upstream = lambda_pen * pen.grad;
        upstream = &pen_upstream;
      }
      terms.objective = jacobian_sqnorm_backward(
                            net, cache, 1.0 / static_cast<double>(m), upstream,
                            grad) /
                        static_cast<double>(m);
      return terms;
    }
  }
  throw ParameterError("objective_with_penalty: unknown objective");
}

}  // namespace minvar
