#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "minvar/linalg.hpp"
#include "minvar/trainer.hpp"

using minvar::Dataset;
using minvar::Matrix;
using minvar::MoonParams;
using minvar::Network;
using minvar::NetworkConfig;
using minvar::ObjectiveKind;
using minvar::Rng;
using minvar::TrainConfig;
using minvar::Vector;

namespace {

Network small_net(int p, std::uint64_t seed, int hidden = 2, int width = 24) {
  NetworkConfig config;
  config.output_dim = p;
  config.hidden_layers = hidden;
  config.hidden_width = width;
  config.init_seed = seed;
  return minvar::init_network(config);
}

Dataset small_moons(int n, std::uint64_t seed) {
  MoonParams params;
  params.n = n;
  params.noise_std = 0.1;
  params.seed = seed;
  return minvar::make_moons(params);
}

TrainConfig quick_config(ObjectiveKind objective, int epochs, double lr,
                         double lambda) {
  TrainConfig config;
  config.objective = objective;
  config.lambda_auto = false;
  config.lambda = lambda;
  config.sigma = 0.1;
  config.learning_rate = lr;
  config.epochs = epochs;
  config.batch_size = 128;
  config.seed = 11;
  return config;
}

}  // namespace

TEST_SUITE_BEGIN("trainer");

TEST_CASE("zero learning rate leaves parameters bitwise unchanged") {
  const Dataset data = small_moons(128, 1);
  const Network net = small_net(2, 5);
  TrainConfig config = quick_config(ObjectiveKind::kDirichlet, 3, 0.0, 1.0);
  const auto result = minvar::train(net, data, config);
  for (int l = 0; l < net.num_layers(); ++l) {
    CHECK((result.net.weights[l] - net.weights[l]).cwiseAbs().maxCoeff() == 0.0);
    CHECK((result.net.biases[l] - net.biases[l]).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("identical config and seed reproduce the history exactly") {
  const Dataset data = small_moons(256, 2);
  const Network net = small_net(2, 6);
  TrainConfig config = quick_config(ObjectiveKind::kSsl, 12, 0.004, 0.5);
  const auto a = minvar::train(net, data, config);
  const auto b = minvar::train(net, data, config);
  REQUIRE(a.history.epochs.size() == b.history.epochs.size());
  REQUIRE(static_cast<int>(a.history.epochs.size()) == config.epochs);
  for (std::size_t e = 0; e < a.history.epochs.size(); ++e) {
    CHECK(a.history.epochs[e].objective == b.history.epochs[e].objective);
    CHECK(a.history.epochs[e].penalty == b.history.epochs[e].penalty);
    CHECK(a.history.epochs[e].total == b.history.epochs[e].total);
  }
  for (int l = 0; l < a.net.num_layers(); ++l) {
    CHECK((a.net.weights[l] - b.net.weights[l]).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("history stays finite and follows the decay schedule") {
  const Dataset data = small_moons(128, 3);
  const Network net = small_net(2, 7);
  TrainConfig config = quick_config(ObjectiveKind::kGraphLaplacian, 20, 0.003, 0.1);
  config.lr_decay_points = {0.5};
  config.lr_decay_factor = 0.1;
  const auto result = minvar::train(net, data, config);
  for (const auto& record : result.history.epochs) {
    CHECK(std::isfinite(record.total));
    CHECK(record.total ==
          doctest::Approx(record.objective +
                          result.history.lambda * record.penalty));
  }
  CHECK(result.history.epochs[4].learning_rate == doctest::Approx(0.003));
  CHECK(result.history.epochs[15].learning_rate == doctest::Approx(0.0003));
}

TEST_CASE("config validation") {
  const Dataset data = small_moons(128, 4);
  const Network net = small_net(2, 8);
  TrainConfig config = quick_config(ObjectiveKind::kDirichlet, 5, 0.001, 1.0);
  config.batch_size = 32;
  CHECK_THROWS_AS(minvar::train(net, data, config), minvar::ParameterError);
  config.batch_size = 128;
  config.epochs = 0;
  CHECK_THROWS_AS(minvar::train(net, data, config), minvar::ParameterError);
  config.epochs = 5;
  config.objective = ObjectiveKind::kSsl;
  config.sigma = 0.0;
  CHECK_THROWS_AS(minvar::train(net, data, config), minvar::ParameterError);
}

TEST_CASE("divergence raises a training error carrying the epoch") {
  const Dataset data = small_moons(128, 5);
  const Network net = small_net(2, 9, 3, 32);
  TrainConfig config = quick_config(ObjectiveKind::kDirichlet, 400, 30.0, 1.0);
  try {
    minvar::train(net, data, config);
    FAIL("expected divergence");
  } catch (const minvar::TrainingError& err) {
    CHECK(err.epoch >= 0);
    CHECK(err.epoch < 400);
  }
}

TEST_CASE("auto_lambda balances the initial objective against the penalty") {
  const Dataset data = small_moons(256, 6);
  const Network net = small_net(3, 10);
  TrainConfig config;
  config.objective = ObjectiveKind::kDirichlet;
  config.sigma = 0.1;
  config.seed = 6;
  const double lambda = minvar::auto_lambda(net, data, config);
  const double energy = minvar::dirichlet_energy(net, data.points).value;
  const Matrix features = minvar::forward_batch(net, data.points).output;
  const double omega = minvar::zero_mean_orthogonality_penalty(features).value;
  CHECK(lambda == doctest::Approx(energy / std::max(omega, 1e-8)).epsilon(1e-12));
  CHECK(minvar::auto_lambda(net, data, config) == lambda);
}

TEST_CASE("auto_lambda cap guards a vanishing penalty") {
  // A linear map on a frame that is already orthonormal and centered gives
  // Omega(init) ~ 0, so the ratio hits the cap.
  NetworkConfig net_config;
  net_config.output_dim = 2;
  net_config.hidden_layers = 0;
  net_config.hidden_width = 1;
  Network net = minvar::init_network(net_config);
  net.weights[0] = Matrix::Identity(2, 2);
  net.biases[0].setZero();

  const int n = 64;
  Dataset data;
  Rng rng(7);
  Matrix g(n, 2);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < 2; ++j) g(i, j) = rng.normal();
  g.rowwise() -= g.colwise().mean();
  const Matrix q = minvar::orthonormal_columns(g, "init");
  data.points = std::sqrt(static_cast<double>(n)) * q;
  data.moon.assign(n, 0);
  data.quadrant.assign(n, 0);
  data.t_param.assign(n, 0.0);

  TrainConfig config;
  config.objective = ObjectiveKind::kDirichlet;
  config.seed = 8;
  CHECK(minvar::auto_lambda(net, data, config) == doctest::Approx(1e6));
}

TEST_CASE("total loss trends downward over training") {
  const Dataset data = small_moons(256, 9);
  const Network net = small_net(2, 12);
  TrainConfig config = quick_config(ObjectiveKind::kDirichlet, 150, 0.002, 2.0);
  const auto result = minvar::train(net, data, config);
  const int n = static_cast<int>(result.history.epochs.size());
  const int window = n / 5;
  double best_head = 1e300, best_tail = 1e300;
  for (int e = 0; e < window; ++e) {
    best_head = std::min(best_head, result.history.epochs[e].total);
  }
  for (int e = n - window; e < n; ++e) {
    best_tail = std::min(best_tail, result.history.epochs[e].total);
  }
  CHECK(best_tail <= best_head);
}

TEST_CASE("penalty-only run drives the orthonormality defect down") {
  // The tuning procedure: sole minimization of the penalty on a 2x100 net.
  MoonParams params;
  params.n = 1000;
  params.noise_std = 0.1;
  params.seed = 10;
  const Dataset data = minvar::make_moons(params);
  const Network net = small_net(2, 13, 2, 100);
  TrainConfig config;
  config.objective = ObjectiveKind::kDirichlet;  // ignored in penalty-only mode
  config.penalty_only = true;
  config.learning_rate = 0.01;
  config.epochs = 500;
  config.batch_size = 512;
  config.seed = 13;
  const auto result = minvar::train(net, data, config);
  const Matrix features = minvar::forward_batch(result.net, data.points).output;
  CHECK(minvar::orthogonality_penalty(features).value < 1e-2);
}

TEST_SUITE_END();
