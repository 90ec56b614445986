#pragma once

#include <map>
#include <string>
#include <vector>

#include "minvar/dataset.hpp"
#include "minvar/network.hpp"
#include "minvar/oracle.hpp"
#include "minvar/trainer.hpp"

namespace minvar {

// All text exports use %.17g so doubles round-trip exactly.
std::string format_double(double value);

void write_dataset_csv(const std::string& path, const Dataset& data);

// Text checkpoint with a shape header; load(save(net)) is value-exact.
void save_network(const std::string& path, const Network& net);
Network load_network(const std::string& path);

void write_history_csv(const std::string& path, const TrainHistory& history);

void write_oracle_eigenvalues_csv(const std::string& path,
                                  const SpectralOracle& oracle,
                                  bool drop_constant);
void write_embedding_csv(const std::string& path, const Matrix& points,
                         const Matrix& embedding);
Matrix read_embedding_csv(const std::string& path, int* out_point_cols = nullptr);

void write_grid_csv(const std::string& path, const Matrix& grid,
                    const Matrix& features);

// Flat key = value configuration with '#' comments. Unknown keys are
// rejected. Every field has a default, so an empty file is runnable.
struct RunConfig {
  // data
  int n = 1000;
  double noise_std = 0.1;
  double train_fraction = 0.5;
  // network
  int output_dim = 2;
  int hidden_layers = 5;
  int hidden_width = 100;
  // training
  std::string objective = "dirichlet";
  // "default" picks the per-objective tuned weight; "auto" balances the
  // objective and penalty values at init; otherwise a nonnegative real.
  std::string lambda = "default";
  std::string sigma = "auto";  // "auto" tracks noise_std
  double learning_rate = 0.005;
  int epochs = 3000;
  int batch_size = 512;
  std::vector<double> lr_decay_points = {0.6, 0.8};
  double lr_decay_factor = 0.3;
  bool penalty_only = false;
  // evaluation
  double ridge = 1e-6;
  int probe_repeats = 5;
  std::string margin = "auto";  // "auto" = 3 * noise_std
  int grid_resolution = 100;
  double grid_padding = 0.5;  // around the data bounding box
  bool drop_constant = true;
  // run
  std::uint64_t seed = 0;
  std::string out = "out";

  double resolved_sigma() const;
  double resolved_margin() const;
  bool lambda_is_auto() const;
  double lambda_value() const;

  MoonParams moon_params() const;
  NetworkConfig network_config() const;
  TrainConfig train_config() const;
};

RunConfig parse_config_file(const std::string& path);
void apply_config_line(RunConfig& config, const std::string& key,
                       const std::string& value);
std::string serialize_config(const RunConfig& config);

}  // namespace minvar
