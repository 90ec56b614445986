#include "minvar/network.hpp"

#include <cmath>
#include <string>

#include "minvar/rng.hpp"

namespace minvar {

long Network::param_count() const {
  long count = 0;
  for (const auto& w : weights) count += w.size();
  for (const auto& b : biases) count += b.size();
  return count;
}

Network init_network(const NetworkConfig& config) {
  if (config.input_dim < 1 || config.output_dim < 1 || config.hidden_width < 1 ||
      config.hidden_layers < 0) {
    throw ParameterError("init_network: invalid architecture");
  }
  Network net;
  net.config = config;
  const int layers = config.hidden_layers + 1;
  net.weights.reserve(layers);
  net.biases.reserve(layers);
  Rng rng(config.init_seed);
  for (int l = 0; l < layers; ++l) {
    const int fan_in = (l == 0) ? config.input_dim : config.hidden_width;
    const int fan_out = (l == layers - 1) ? config.output_dim : config.hidden_width;
    const double limit = std::sqrt(6.0 / (fan_in + fan_out));
    Matrix w(fan_out, fan_in);
    for (int r = 0; r < fan_out; ++r)
      for (int c = 0; c < fan_in; ++c) w(r, c) = limit * (2.0 * rng.uniform() - 1.0);
    net.weights.push_back(std::move(w));
    net.biases.push_back(Vector::Zero(fan_out));
  }
  return net;
}

ParamGradient ParamGradient::zeros_like(const Network& net) {
  ParamGradient g;
  g.weights.reserve(net.weights.size());
  g.biases.reserve(net.biases.size());
  for (const auto& w : net.weights) g.weights.push_back(Matrix::Zero(w.rows(), w.cols()));
  for (const auto& b : net.biases) g.biases.push_back(Vector::Zero(b.size()));
  return g;
}

void ParamGradient::add_scaled(const ParamGradient& other, double scale) {
  for (std::size_t l = 0; l < weights.size(); ++l) {
    weights[l] += scale * other.weights[l];
    biases[l] += scale * other.biases[l];
  }
}

void ParamGradient::scale(double factor) {
  for (auto& w : weights) w *= factor;
  for (auto& b : biases) b *= factor;
}

double ParamGradient::max_abs() const {
  double m = 0.0;
  for (const auto& w : weights) m = std::max(m, w.cwiseAbs().maxCoeff());
  for (const auto& b : biases)
    if (b.size() > 0) m = std::max(m, b.cwiseAbs().maxCoeff());
  return m;
}

bool ParamGradient::finite() const {
  for (const auto& w : weights)
    if (!w.allFinite()) return false;
  for (const auto& b : biases)
    if (!b.allFinite()) return false;
  return true;
}

void apply_update(Network& net, const ParamGradient& grad, double step) {
  for (std::size_t l = 0; l < net.weights.size(); ++l) {
    net.weights[l] -= step * grad.weights[l];
    net.biases[l] -= step * grad.biases[l];
  }
}

ForwardCache forward_batch(const Network& net, const Matrix& x) {
  if (x.cols() != net.config.input_dim) {
    throw DimensionError("forward: expected " + std::to_string(net.config.input_dim) +
                         " input columns, got " + std::to_string(x.cols()));
  }
  require_finite("forward input", x);

  const int hidden = net.config.hidden_layers;
  ForwardCache cache;
  cache.input = x;
  cache.act.reserve(hidden);
  cache.dact.reserve(hidden);
  const Matrix* prev = &cache.input;
  for (int l = 0; l < hidden; ++l) {
    Matrix z = (*prev * net.weights[l].transpose()).rowwise() +
               net.biases[l].transpose();
    Matrix a = z.array().tanh().matrix();
    cache.dact.push_back((1.0 - a.array().square()).matrix());
    cache.act.push_back(std::move(a));
    prev = &cache.act.back();
  }
  cache.output = (*prev * net.weights[hidden].transpose()).rowwise() +
                 net.biases[hidden].transpose();
  require_finite("forward output", cache.output);
  return cache;
}

Vector forward(const Network& net, const Vector& x) {
  const ForwardCache cache = forward_batch(net, Matrix(x.transpose()));
  return cache.output.row(0).transpose();
}

void backward_batch(const Network& net, const ForwardCache& cache,
                    const Matrix& upstream, ParamGradient& grad) {
  const int hidden = net.config.hidden_layers;
  if (upstream.rows() != cache.output.rows() ||
      upstream.cols() != cache.output.cols()) {
    throw DimensionError("backward: upstream shape mismatch");
  }
  const Matrix& last_act = hidden > 0 ? cache.act[hidden - 1] : cache.input;
  grad.weights[hidden].noalias() += upstream.transpose() * last_act;
  grad.biases[hidden] += upstream.colwise().sum().transpose();

  Matrix delta;
  for (int l = hidden - 1; l >= 0; --l) {
    if (l == hidden - 1) {
      delta.noalias() = upstream * net.weights[hidden];
    } else {
      delta = (delta * net.weights[l + 1]).eval();
    }
    delta.array() *= cache.dact[l].array();
    const Matrix& prev = l > 0 ? cache.act[l - 1] : cache.input;
    grad.weights[l].noalias() += delta.transpose() * prev;
    grad.biases[l] += delta.colwise().sum().transpose();
  }
}

ParamGradient grad_params(const Network& net, const Vector& x,
                          const Vector& upstream) {
  if (upstream.size() != net.config.output_dim) {
    throw DimensionError("grad_params: upstream size mismatch");
  }
  ForwardCache cache = forward_batch(net, Matrix(x.transpose()));
  ParamGradient grad = ParamGradient::zeros_like(net);
  backward_batch(net, cache, Matrix(upstream.transpose()), grad);
  return grad;
}

namespace {

// Tangent states per input coordinate: u[k][l] is the pre-activation tangent
// of hidden layer l for input direction k, t[k][l] the post-activation one.
struct TangentStates {
  std::vector<std::vector<Matrix>> u;
  std::vector<std::vector<Matrix>> t;
  std::vector<Matrix> jac;  // output tangents, m x output_dim per direction
};

TangentStates propagate_tangents(const Network& net, const ForwardCache& cache) {
  const int hidden = net.config.hidden_layers;
  const int dims = net.config.input_dim;
  const Eigen::Index m = cache.input.rows();

  TangentStates s;
  s.u.resize(dims);
  s.t.resize(dims);
  s.jac.resize(dims);
  for (int k = 0; k < dims; ++k) {
    s.u[k].reserve(hidden);
    s.t[k].reserve(hidden);
    for (int l = 0; l < hidden; ++l) {
      Matrix u;
      if (l == 0) {
        // Input tangent is the constant basis vector e_k.
        u = net.weights[0].col(k).transpose().replicate(m, 1);
      } else {
        u.noalias() = s.t[k][l - 1] * net.weights[l].transpose();
      }
      s.t[k].push_back((cache.dact[l].array() * u.array()).matrix());
      s.u[k].push_back(std::move(u));
    }
    if (hidden > 0) {
      s.jac[k].noalias() = s.t[k][hidden - 1] * net.weights[hidden].transpose();
    } else {
      s.jac[k] = net.weights[0].col(k).transpose().replicate(m, 1);
    }
  }
  return s;
}

}  // namespace

Matrix input_jacobian(const Network& net, const Vector& x) {
  const ForwardCache cache = forward_batch(net, Matrix(x.transpose()));
  const TangentStates s = propagate_tangents(net, cache);
  Matrix jac(net.config.output_dim, net.config.input_dim);
  for (int k = 0; k < net.config.input_dim; ++k) {
    jac.col(k) = s.jac[k].row(0).transpose();
  }
  return jac;
}

double jacobian_sqnorm_batch(const Network& net, const ForwardCache& cache) {
  const TangentStates s = propagate_tangents(net, cache);
  double value = 0.0;
  for (const Matrix& j : s.jac) value += j.squaredNorm();
  return value;
}

double jacobian_sqnorm_backward(const Network& net, const ForwardCache& cache,
                                double jac_weight, const Matrix* upstream,
                                ParamGradient& grad) {
  const int hidden = net.config.hidden_layers;
  const int dims = net.config.input_dim;
  const Eigen::Index m = cache.input.rows();
  const TangentStates s = propagate_tangents(net, cache);

  double value = 0.0;
  for (const Matrix& j : s.jac) value += j.squaredNorm();

  // Output layer. The Jacobian path seeds the tangent adjoints; the plain
  // upstream path seeds the activation adjoint.
  const Matrix& last_act = hidden > 0 ? cache.act[hidden - 1] : cache.input;
  std::vector<Matrix> t_bar(dims);  // adjoint of t[k][hidden-1]
  for (int k = 0; k < dims; ++k) {
    if (hidden > 0) {
      grad.weights[hidden].noalias() +=
          (2.0 * jac_weight) * (s.jac[k].transpose() * s.t[k][hidden - 1]);
      t_bar[k].noalias() = (2.0 * jac_weight) * (s.jac[k] * net.weights[hidden]);
    } else {
      grad.weights[0].col(k) +=
          (2.0 * jac_weight) * s.jac[k].colwise().sum().transpose();
    }
  }
  Matrix a_bar;
  if (upstream != nullptr) {
    grad.weights[hidden].noalias() += upstream->transpose() * last_act;
    grad.biases[hidden] += upstream->colwise().sum().transpose();
    if (hidden > 0) a_bar.noalias() = *upstream * net.weights[hidden];
  }
  if (hidden > 0 && a_bar.size() == 0) {
    a_bar = Matrix::Zero(m, net.config.hidden_width);
  }

  for (int l = hidden - 1; l >= 0; --l) {
    const Matrix& act = cache.act[l];
    const Matrix& dact = cache.dact[l];
    const Matrix& prev_act = l > 0 ? cache.act[l - 1] : cache.input;

    // Adjoints through t[l] = dact[l] .* u[l].
    Matrix s_bar = Matrix::Zero(m, act.cols());
    for (int k = 0; k < dims; ++k) {
      s_bar.array() += t_bar[k].array() * s.u[k][l].array();
      Matrix u_bar = (t_bar[k].array() * dact.array()).matrix();
      if (l > 0) {
        grad.weights[l].noalias() += u_bar.transpose() * s.t[k][l - 1];
        t_bar[k].noalias() = u_bar * net.weights[l];
      } else {
        grad.weights[0].col(k) += u_bar.colwise().sum().transpose();
      }
    }

    // Adjoint through z: act = tanh(z), dact = 1 - act^2.
    Matrix z_bar = (a_bar.array() * dact.array() -
                    2.0 * s_bar.array() * act.array() * dact.array())
                       .matrix();
    grad.weights[l].noalias() += z_bar.transpose() * prev_act;
    grad.biases[l] += z_bar.colwise().sum().transpose();
    if (l > 0) a_bar.noalias() = z_bar * net.weights[l];
  }
  return value;
}

std::pair<double, ParamGradient> dirichlet_point_value_and_grad(
    const Network& net, const Vector& x) {
  ForwardCache cache = forward_batch(net, Matrix(x.transpose()));
  ParamGradient grad = ParamGradient::zeros_like(net);
  const double value = jacobian_sqnorm_backward(net, cache, 1.0, nullptr, grad);
  return {value, std::move(grad)};
}

}  // namespace minvar
