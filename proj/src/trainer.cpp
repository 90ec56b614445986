#include "minvar/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <string>

namespace minvar {

namespace {

constexpr double kLambdaEps = 1e-8;
constexpr double kLambdaCap = 1e6;

void validate(const TrainConfig& config, int n) {
  if (n < 1) throw ParameterError("train: empty dataset");
  if (!(config.learning_rate >= 0.0)) {
    throw ParameterError("train: learning_rate must be >= 0");
  }
  if (config.epochs < 1) throw ParameterError("train: epochs must be >= 1");
  if (config.batch_size < 64) {
    throw ParameterError("train: batch_size must be >= 64 (the penalty needs "
                         "large batches)");
  }
  if (!config.penalty_only && config.objective != ObjectiveKind::kDirichlet &&
      !(config.sigma > 0.0)) {
    throw ParameterError("train: sigma must be positive");
  }
  if (!config.lambda_auto && !(config.lambda >= 0.0)) {
    throw ParameterError("train: lambda must be >= 0");
  }
  if (!(config.lr_decay_factor > 0.0) || !(config.lr_decay_factor <= 1.0)) {
    throw ParameterError("train: lr_decay_factor must lie in (0, 1]");
  }
}

double full_data_objective(const Network& net, const Matrix& points,
                           const TrainConfig& config, Rng& rng) {
  switch (config.objective) {
    case ObjectiveKind::kSsl: {
      Matrix augmented(points.rows(), points.cols());
      for (Eigen::Index i = 0; i < points.rows(); ++i)
        for (Eigen::Index c = 0; c < points.cols(); ++c)
          augmented(i, c) = points(i, c) + config.sigma * rng.normal();
      const Matrix clean = forward_batch(net, points).output;
      const Matrix shifted = forward_batch(net, augmented).output;
      return (clean - shifted).squaredNorm() / static_cast<double>(points.rows());
    }
    case ObjectiveKind::kGraphLaplacian: {
      const Matrix w = kernel_matrix(points, config.sigma);
      return graph_energy(forward_batch(net, points).output, w);
    }
    case ObjectiveKind::kDirichlet: {
      ForwardCache cache = forward_batch(net, points);
      return jacobian_sqnorm_batch(net, cache) /
             static_cast<double>(points.rows());
    }
  }
  return 0.0;
}

}  // namespace

double auto_lambda(const Network& net, const Dataset& data,
                   const TrainConfig& config) {
  if (config.penalty_only) return 1.0;
  Rng rng = Rng(config.seed).fork(3);
  const double energy = full_data_objective(net, data.points, config, rng);
  const Matrix embedding = forward_batch(net, data.points).output;
  const double omega = zero_mean_orthogonality_penalty(embedding).value;
  return std::min(energy / std::max(omega, kLambdaEps), kLambdaCap);
}

TrainResult train(Network net, const Dataset& data, const TrainConfig& config) {
  const int n = data.size();
  validate(config, n);
  const int batch = std::min(config.batch_size, n);
  const int num_batches = (n + batch - 1) / batch;

  const double lambda =
      config.penalty_only ? 1.0
      : config.lambda_auto ? auto_lambda(net, data, config)
                           : config.lambda;
  // The paper's coupling: the step is divided by lambda so the penalty
  // always moves at the configured learning rate.
  const double lambda_div = (config.penalty_only || lambda <= 0.0) ? 1.0 : lambda;

  // Decay boundaries in epochs, sorted.
  std::vector<int> decay_epochs;
  for (double f : config.lr_decay_points) {
    if (f > 0.0 && f < 1.0)
      decay_epochs.push_back(static_cast<int>(f * config.epochs));
  }
  std::sort(decay_epochs.begin(), decay_epochs.end());

  Rng root(config.seed);
  Rng shuffle_rng = root.fork(1);
  Rng ssl_rng = root.fork(2);

  // For the graph objective the full kernel is computed once and batch
  // submatrices are gathered; recomputing exp() per batch dominates
  // otherwise.
  Matrix full_kernel;
  const bool use_kernel = !config.penalty_only &&
                          config.objective == ObjectiveKind::kGraphLaplacian;
  if (use_kernel) full_kernel = kernel_matrix(data.points, config.sigma);

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);

  TrainHistory history;
  history.lambda = lambda;
  history.epochs.reserve(config.epochs);

  ParamGradient grad = ParamGradient::zeros_like(net);
  Matrix batch_points;
  Matrix batch_kernel;

  double lr = config.learning_rate;
  std::size_t next_decay = 0;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    const auto tick = std::chrono::steady_clock::now();
    while (next_decay < decay_epochs.size() && epoch >= decay_epochs[next_decay]) {
      lr *= config.lr_decay_factor;
      ++next_decay;
    }

    for (int i = n - 1; i > 0; --i) {
      const int j = std::min(static_cast<int>(shuffle_rng.uniform() * (i + 1)), i);
      std::swap(order[i], order[j]);
    }

    double objective_sum = 0.0;
    double penalty_sum = 0.0;
    for (int b = 0; b < num_batches; ++b) {
      // Balanced contiguous chunks of the shuffled order.
      const int begin = static_cast<int>(static_cast<long>(n) * b / num_batches);
      const int end = static_cast<int>(static_cast<long>(n) * (b + 1) / num_batches);
      const int m = end - begin;
      batch_points.resize(m, data.points.cols());
      for (int r = 0; r < m; ++r)
        batch_points.row(r) = data.points.row(order[begin + r]);
      const Matrix* kernel_ptr = nullptr;
      if (use_kernel) {
        batch_kernel.resize(m, m);
        for (int r = 0; r < m; ++r)
          for (int c = 0; c < m; ++c)
            batch_kernel(r, c) = full_kernel(order[begin + r], order[begin + c]);
        kernel_ptr = &batch_kernel;
      }

      grad = ParamGradient::zeros_like(net);
      BatchTerms terms;
      try {
        terms = objective_with_penalty(net, config.objective, batch_points,
                                       config.sigma, ssl_rng, lambda,
                                       config.penalty_only, kernel_ptr, grad);
      } catch (const NumericError& err) {
        throw TrainingError(std::string("training diverged: ") + err.what(),
                            epoch);
      }
      objective_sum += terms.objective * m;
      penalty_sum += terms.penalty * m;
      apply_update(net, grad, lr / lambda_div);
    }

    EpochRecord record;
    record.epoch = epoch;
    record.objective = objective_sum / n;
    record.penalty = penalty_sum / n;
    record.total = record.objective + lambda * record.penalty;
    record.learning_rate = lr;
    record.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - tick)
            .count();
    if (!std::isfinite(record.total)) {
      throw TrainingError("training diverged (non-finite loss)", epoch);
    }
    history.epochs.push_back(record);
  }

  for (const auto& w : net.weights) {
    if (!w.allFinite()) {
      throw TrainingError("training diverged (non-finite parameters)",
                          config.epochs - 1);
    }
  }
  return {std::move(net), std::move(history)};
}

}  // namespace minvar
