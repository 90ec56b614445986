#pragma once

#include <cstdint>
#include <vector>

#include "minvar/matrix.hpp"

namespace minvar {

struct NetworkConfig {
  int input_dim = 2;
  int output_dim = 2;
  int hidden_layers = 5;  // 0 gives a plain affine map
  int hidden_width = 100;
  std::uint64_t init_seed = 0;
};

// Fully-connected feature map with tanh hidden units and an affine output
// layer. Weights are stored out x in, so weights[0] is hidden_width x
// input_dim and weights.back() is output_dim x hidden_width.
struct Network {
  NetworkConfig config;
  std::vector<Matrix> weights;
  std::vector<Vector> biases;

  int num_layers() const { return static_cast<int>(weights.size()); }
  long param_count() const;
};

// Glorot-uniform weights, zero biases, deterministic in config.init_seed.
Network init_network(const NetworkConfig& config);

// Parameter-shaped accumulator for gradients.
struct ParamGradient {
  std::vector<Matrix> weights;
  std::vector<Vector> biases;

  static ParamGradient zeros_like(const Network& net);
  void add_scaled(const ParamGradient& other, double scale);
  void scale(double factor);
  double max_abs() const;
  bool finite() const;
};

// Updates parameters in place: net -= step * grad.
void apply_update(Network& net, const ParamGradient& grad, double step);

// Batch activations kept for the reverse passes. Rows are samples.
struct ForwardCache {
  Matrix input;               // m x input_dim
  std::vector<Matrix> act;    // tanh outputs per hidden layer, m x width
  std::vector<Matrix> dact;   // tanh' = 1 - act^2 per hidden layer
  Matrix output;              // m x output_dim
};

ForwardCache forward_batch(const Network& net, const Matrix& x);

Vector forward(const Network& net, const Vector& x);

// Gradient of sum_i <upstream_i, phi(x_i)> with respect to every parameter,
// accumulated into grad.
void backward_batch(const Network& net, const ForwardCache& cache,
                    const Matrix& upstream, ParamGradient& grad);

// Exact gradient of <upstream, phi(x)>.
ParamGradient grad_params(const Network& net, const Vector& x,
                          const Vector& upstream);

// Exact Jacobian D phi(x), output_dim x input_dim, by forward-mode tangents.
Matrix input_jacobian(const Network& net, const Vector& x);

// Sum over the batch of ||D phi(x_i)||_F^2, with no gradient work.
double jacobian_sqnorm_batch(const Network& net, const ForwardCache& cache);

// One fused reverse sweep for losses that mix the squared Jacobian norm with
// an ordinary output upstream. Accumulates into grad the parameter gradient
// of
//   jac_weight * sum_i ||D phi(x_i)||_F^2 + sum_i <upstream_i, phi(x_i)>
// (upstream may be null) and returns sum_i ||D phi(x_i)||_F^2. The Jacobian
// part differentiates through the tangent propagation, i.e. double
// backpropagation.
double jacobian_sqnorm_backward(const Network& net, const ForwardCache& cache,
                                double jac_weight, const Matrix* upstream,
                                ParamGradient& grad);

// Value ||D phi(x)||_F^2 and its exact parameter gradient at one point.
std::pair<double, ParamGradient> dirichlet_point_value_and_grad(
    const Network& net, const Vector& x);

}  // namespace minvar
