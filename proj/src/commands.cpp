#include "minvar/commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "minvar/oracle.hpp"
#include "minvar/rng.hpp"

namespace minvar {

namespace {

using nlohmann::json;

std::string out_path(const RunConfig& config, const std::string& name) {
  std::filesystem::create_directories(config.out);
  return (std::filesystem::path(config.out) / name).string();
}

// Top eigenvalue of the centered feature covariance; the collapse metric.
double covariance_top_eigenvalue(const Matrix& features) {
  const Eigen::RowVectorXd mean = features.colwise().mean();
  const Matrix centered = features.rowwise() - mean;
  const Matrix cov =
      (centered.transpose() * centered) / static_cast<double>(features.rows());
  const SymEig eig = sym_eig(cov);
  return eig.eigenvalues[eig.eigenvalues.size() - 1];
}

Matrix data_grid(const RunConfig& config, const Matrix& points) {
  const double pad = config.grid_padding;
  return make_grid(points.col(0).minCoeff() - pad, points.col(0).maxCoeff() + pad,
                   points.col(1).minCoeff() - pad, points.col(1).maxCoeff() + pad,
                   config.grid_resolution);
}

double full_objective_value(const Network& net, const Matrix& points,
                            ObjectiveKind kind, double sigma, Rng&& rng) {
  switch (kind) {
    case ObjectiveKind::kSsl: {
      Matrix augmented(points.rows(), points.cols());
      for (Eigen::Index i = 0; i < points.rows(); ++i)
        for (Eigen::Index c = 0; c < points.cols(); ++c)
          augmented(i, c) = points(i, c) + sigma * rng.normal();
      const Matrix clean = forward_batch(net, points).output;
      const Matrix shifted = forward_batch(net, augmented).output;
      return (clean - shifted).squaredNorm() / static_cast<double>(points.rows());
    }
    case ObjectiveKind::kGraphLaplacian:
      return graph_energy(forward_batch(net, points).output,
                          kernel_matrix(points, sigma));
    case ObjectiveKind::kDirichlet: {
      ForwardCache cache = forward_batch(net, points);
      return jacobian_sqnorm_batch(net, cache) /
             static_cast<double>(points.rows());
    }
  }
  return 0.0;
}

}  // namespace

std::string default_checkpoint_path(const RunConfig& config) {
  return out_path(config, "checkpoint.txt");
}

std::string default_oracle_path(const RunConfig& config) {
  return out_path(config, "oracle_embedding.csv");
}

void cmd_generate(const RunConfig& config) {
  const Dataset data = make_moons(config.moon_params());
  const std::string path = out_path(config, "dataset.csv");
  write_dataset_csv(path, data);
  std::printf("wrote %s (%d points)\n", path.c_str(), data.size());
}

void cmd_train(const RunConfig& config, bool print_config) {
  if (print_config) {
    std::fputs(serialize_config(config).c_str(), stdout);
  }
  const Dataset data = make_moons(config.moon_params());
  const auto [train_rows, test_rows] =
      split_indices(data, config.train_fraction, config.seed);
  const Dataset train_set = subset(data, train_rows);

  Network net = init_network(config.network_config());
  const double initial_top = covariance_top_eigenvalue(
      forward_batch(net, train_set.points).output);

  TrainResult result = train(std::move(net), train_set, config.train_config());

  const Matrix final_features =
      forward_batch(result.net, train_set.points).output;
  const double final_top = covariance_top_eigenvalue(final_features);
  const double omega = orthogonality_penalty(final_features).value;
  const EpochRecord& last = result.history.epochs.back();

  std::printf("objective=%s lambda=%.6g epochs=%d\n",
              config.objective.c_str(), result.history.lambda,
              static_cast<int>(result.history.epochs.size()));
  std::printf("final objective=%.6g penalty=%.6g omega=%.6g\n", last.objective,
              last.penalty, omega);
  std::printf("feature covariance top eigenvalue: initial=%.6g final=%.6g ratio=%.3g\n",
              initial_top, final_top, final_top / initial_top);
  if (final_top < 1e-3 * initial_top) {
    std::printf("collapse detected: representation variance fell below 1e-3 "
                "of its initial value\n");
  }

  const std::string checkpoint = out_path(config, "checkpoint.txt");
  const std::string history = out_path(config, "history.csv");
  save_network(checkpoint, result.net);
  write_history_csv(history, result.history);
  std::printf("wrote %s\nwrote %s\n", checkpoint.c_str(), history.c_str());
}

void cmd_oracle(const RunConfig& config) {
  const Dataset data = make_moons(config.moon_params());
  if (data.size() <= config.output_dim + 1) {
    throw ParameterError("oracle: needs n > p + 1");
  }
  const SpectralOracle oracle =
      spectral_embedding(data.points, config.resolved_sigma(), config.output_dim,
                         config.drop_constant);
  const std::string values_path = out_path(config, "oracle_eigenvalues.csv");
  const std::string embedding_path = out_path(config, "oracle_embedding.csv");
  write_oracle_eigenvalues_csv(values_path, oracle, config.drop_constant);
  write_embedding_csv(embedding_path, data.points, oracle.embedding);
  std::printf("wrote %s\nwrote %s\n", values_path.c_str(), embedding_path.c_str());
}

void cmd_eval(const RunConfig& config, const std::string& checkpoint_path,
              const std::string& oracle_path) {
  const Dataset data = make_moons(config.moon_params());
  const auto [train_rows, test_rows] =
      split_indices(data, config.train_fraction, config.seed);
  const Dataset train_set = subset(data, train_rows);
  const Dataset test_set = subset(data, test_rows);

  const Network net = load_network(checkpoint_path);
  const Matrix oracle_embedding = read_embedding_csv(oracle_path);
  if (oracle_embedding.rows() != data.size()) {
    throw DataError("eval: oracle embedding rows do not match the dataset");
  }

  const Matrix train_features = forward_batch(net, train_set.points).output;
  const Matrix test_features = forward_batch(net, test_set.points).output;

  // Probe accuracy over repeated split seeds; repeat 0 is the canonical
  // split the network was trained against.
  std::vector<double> accuracies;
  for (int r = 0; r < std::max(config.probe_repeats, 1); ++r) {
    const auto [fit_rows, eval_rows] =
        split_indices(data, config.train_fraction, config.seed + r);
    const Dataset fit_set = subset(data, fit_rows);
    const Dataset eval_set = subset(data, eval_rows);
    const Matrix fit_features = forward_batch(net, fit_set.points).output;
    const Matrix eval_features = forward_batch(net, eval_set.points).output;
    const ProbeModel probe = probe_fit(fit_features, fit_set.quadrant, config.ridge);
    accuracies.push_back(probe_accuracy(probe, eval_features, eval_set.quadrant));
  }
  double mean = 0.0;
  for (double a : accuracies) mean += a;
  mean /= accuracies.size();
  double var = 0.0;
  for (double a : accuracies) var += (a - mean) * (a - mean);
  const double stddev =
      accuracies.size() > 1 ? std::sqrt(var / (accuracies.size() - 1)) : 0.0;

  // Alignment against the oracle on the training points.
  Matrix oracle_train(train_rows.size(), oracle_embedding.cols());
  for (std::size_t i = 0; i < train_rows.size(); ++i) {
    oracle_train.row(i) = oracle_embedding.row(train_rows[i]);
  }
  const std::vector<double> cosines = align(train_features, oracle_train, true);

  // Energy of the final model on the training set, with the same lambda the
  // trainer resolved (auto_lambda is deterministic in config + seed).
  const TrainConfig tc = config.train_config();
  const double lambda =
      tc.lambda_auto ? auto_lambda(init_network(config.network_config()),
                                   train_set, tc)
                     : tc.lambda;
  EnergyValue energy;
  energy.objective = full_objective_value(net, train_set.points, tc.objective,
                                          tc.sigma, Rng(tc.seed).fork(4));
  energy.penalty = zero_mean_orthogonality_penalty(train_features).value;
  energy.lambda = lambda;
  energy.total = energy.objective + lambda * energy.penalty;

  const double omega = orthogonality_penalty(train_features).value;
  const double smoothed =
      smoothed_energy(train_features, train_set.points, tc.sigma);

  const Matrix grid = data_grid(config, data.points);
  const auto [on_mean, off_mean] = off_manifold_magnitude(
      net, grid, data.points, config.resolved_margin());

  json report;
  json config_echo;
  {
    std::istringstream lines(serialize_config(config));
    std::string line;
    while (std::getline(lines, line)) {
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      std::string key = line.substr(0, eq);
      std::string value = line.substr(eq + 1);
      while (!key.empty() && key.back() == ' ') key.pop_back();
      while (!value.empty() && value.front() == ' ') value.erase(value.begin());
      config_echo[key] = value;
    }
  }
  report["config"] = config_echo;
  report["energy"] = {{"objective", energy.objective},
                      {"penalty", energy.penalty},
                      {"lambda", energy.lambda},
                      {"total", energy.total}};
  report["penalty_second_moment"] = omega;
  report["probe"] = {{"mean", mean},
                     {"std", stddev},
                     {"repeats", static_cast<int>(accuracies.size())},
                     {"accuracies", accuracies}};
  report["alignment"] = {{"cosines", cosines},
                         {"append_constant", true},
                         {"oracle_columns", oracle_embedding.cols()}};
  report["smoothed_energy"] = smoothed;
  report["off_manifold"] = {{"on_mean", on_mean},
                            {"off_mean", off_mean},
                            {"margin", config.resolved_margin()}};
  report["feature_covariance_top_eigenvalue"] =
      covariance_top_eigenvalue(train_features);
  report["versions"] = {{"minvar", "0.1.0"}};
  report["seeds"] = {{"seed", config.seed}};
  report["metadata"] = {
      {"timestamp",
       static_cast<long>(std::chrono::duration_cast<std::chrono::seconds>(
                             std::chrono::system_clock::now().time_since_epoch())
                             .count())}};

  const std::string path = out_path(config, "report.json");
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << report.dump(2) << '\n';
  std::printf("probe accuracy %.4f +/- %.4f over %d repeats\n", mean, stddev,
              static_cast<int>(accuracies.size()));
  std::printf("wrote %s\n", path.c_str());
}

void cmd_grid(const RunConfig& config, const std::string& checkpoint_path) {
  const Dataset data = make_moons(config.moon_params());
  const Network net = load_network(checkpoint_path);
  const Matrix grid = data_grid(config, data.points);
  const Matrix features = forward_batch(net, grid).output;
  const std::string path = out_path(config, "grid.csv");
  write_grid_csv(path, grid, features);
  std::printf("wrote %s (%ld rows)\n", path.c_str(),
              static_cast<long>(grid.rows()));
}

}  // namespace minvar
