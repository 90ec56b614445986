#pragma once

#include <cstdint>
#include <vector>

#include "minvar/dataset.hpp"
#include "minvar/network.hpp"
#include "minvar/objectives.hpp"

namespace minvar {

struct TrainConfig {
  ObjectiveKind objective = ObjectiveKind::kDirichlet;
  bool lambda_auto = true;  // balance objective and penalty at init
  double lambda = 1.0;      // used when lambda_auto is false; 0 disables Omega
  double sigma = 0.1;       // augmentation scale and kernel scale
  double learning_rate = 0.005;
  int epochs = 3000;
  int batch_size = 512;  // clamped to n; >= 64 so the batch penalty estimate
                         // stays usable (the penalty is not an average of
                         // per-sample terms)
  std::uint64_t seed = 0;
  std::vector<double> lr_decay_points = {0.6, 0.8};  // fractions of epochs
  double lr_decay_factor = 0.3;
  bool penalty_only = false;  // minimize the penalty alone (tuning run)
};

struct EpochRecord {
  int epoch = 0;
  double objective = 0.0;
  double penalty = 0.0;
  double total = 0.0;
  double learning_rate = 0.0;
  double seconds = 0.0;
};

struct TrainHistory {
  std::vector<EpochRecord> epochs;
  double lambda = 0.0;  // resolved value actually used
};

struct TrainResult {
  Network net;
  TrainHistory history;
};

// lambda = E(phi_init) / max(Omega(phi_init), 1e-8), capped at 1e6, from one
// full-data pass at initialization. Omega is the zero-mean orthogonality
// penalty the trainer minimizes.
double auto_lambda(const Network& net, const Dataset& data,
                   const TrainConfig& config);

// Minimizes E + lambda * Omega by seeded SGD with the step scaled by
// 1 / lambda, i.e. theta -= (lr / lambda) * grad(E + lambda * Omega). The
// penalty gradient is computed on each batch as a whole. Deterministic in
// config.seed.
TrainResult train(Network net, const Dataset& data, const TrainConfig& config);

}  // namespace minvar
