#pragma once

#include <stdexcept>
#include <string>

namespace minvar {

// Mismatched shapes, non-square or asymmetric inputs.
struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Out-of-range or inconsistent parameters (odd n, sigma <= 0, ...).
struct ParameterError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Rank-deficient input where full column rank is required.
struct RankError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Missing classes, empty partitions and similar data problems.
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Eigensolver non-convergence, non-finite values, numerical failure.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Divergence during optimization; carries the epoch it was detected at.
struct TrainingError : NumericError {
  TrainingError(const std::string& message, int epoch_index)
      : NumericError(message + " (epoch " + std::to_string(epoch_index) + ")"),
        epoch(epoch_index) {}
  int epoch;
};

// Filesystem and parse failures for configs, checkpoints and exports.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace minvar
