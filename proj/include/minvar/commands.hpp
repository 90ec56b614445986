#pragma once

#include <string>

#include "minvar/io.hpp"

namespace minvar {

// CLI entry points. Each writes its artifacts under config.out and throws
// ParameterError / IoError for usage problems, NumericError (incl.
// TrainingError) for numerical failures.

// dataset.csv
void cmd_generate(const RunConfig& config);

// checkpoint.txt + history.csv; optionally prints the resolved config.
void cmd_train(const RunConfig& config, bool print_config = false);

// oracle_eigenvalues.csv + oracle_embedding.csv
void cmd_oracle(const RunConfig& config);

// report.json
void cmd_eval(const RunConfig& config, const std::string& checkpoint_path,
              const std::string& oracle_path);

// grid.csv with phi evaluated on a regular lattice
void cmd_grid(const RunConfig& config, const std::string& checkpoint_path);

std::string default_checkpoint_path(const RunConfig& config);
std::string default_oracle_path(const RunConfig& config);

}  // namespace minvar
