#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "minvar/commands.hpp"

namespace {

struct CommonOpts {
  std::string config_path;
  std::string out;
  long long seed = -1;
  bool seed_set = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_path, "flat key = value config file");
  cmd->add_option("--out", opts.out, "output directory (overrides the config)");
  cmd->add_option("--seed", opts.seed, "seed (overrides the config)")
      ->each([&opts](const std::string&) { opts.seed_set = true; });
}

minvar::RunConfig resolve(const CommonOpts& opts) {
  minvar::RunConfig config;
  if (!opts.config_path.empty()) {
    config = minvar::parse_config_file(opts.config_path);
  }
  if (!opts.out.empty()) config.out = opts.out;
  if (opts.seed_set) config.seed = static_cast<std::uint64_t>(opts.seed);
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"minimal-variation embeddings of 2-D point clouds"};
  app.require_subcommand(1);

  CommonOpts generate_opts, train_opts, oracle_opts, eval_opts, grid_opts;
  bool print_config = false;
  std::string checkpoint_path, oracle_path;

  CLI::App* generate = app.add_subcommand("generate", "sample the dataset");
  add_common(generate, generate_opts);

  CLI::App* train = app.add_subcommand("train", "fit the feature map");
  add_common(train, train_opts);
  train->add_flag("--print-config", print_config,
                  "print the fully-resolved config before training");

  CLI::App* oracle = app.add_subcommand("oracle", "spectral ground truth");
  add_common(oracle, oracle_opts);

  CLI::App* eval = app.add_subcommand("eval", "probe, alignment and diagnostics");
  add_common(eval, eval_opts);
  eval->add_option("--checkpoint", checkpoint_path, "trained network file");
  eval->add_option("--oracle", oracle_path, "oracle embedding file");

  CLI::App* grid = app.add_subcommand("grid", "evaluate phi on a lattice");
  add_common(grid, grid_opts);
  grid->add_option("--checkpoint", checkpoint_path, "trained network file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (generate->parsed()) {
      minvar::cmd_generate(resolve(generate_opts));
    } else if (train->parsed()) {
      minvar::cmd_train(resolve(train_opts), print_config);
    } else if (oracle->parsed()) {
      minvar::cmd_oracle(resolve(oracle_opts));
    } else if (eval->parsed()) {
      const minvar::RunConfig config = resolve(eval_opts);
      minvar::cmd_eval(config,
                       checkpoint_path.empty()
                           ? minvar::default_checkpoint_path(config)
                           : checkpoint_path,
                       oracle_path.empty() ? minvar::default_oracle_path(config)
                                           : oracle_path);
    } else if (grid->parsed()) {
      const minvar::RunConfig config = resolve(grid_opts);
      minvar::cmd_grid(config, checkpoint_path.empty()
                                   ? minvar::default_checkpoint_path(config)
                                   : checkpoint_path);
    }
  } catch (const minvar::ParameterError& err) {
    std::fprintf(stderr, "error: %s\n", err.what());
    return 1;
  } catch (const minvar::DimensionError& err) {
    std::fprintf(stderr, "error: %s\n", err.what());
    return 1;
  } catch (const minvar::IoError& err) {
    std::fprintf(stderr, "error: %s\n", err.what());
    return 1;
  } catch (const minvar::NumericError& err) {
    std::fprintf(stderr, "numerical failure: %s\n", err.what());
    return 2;
  } catch (const std::exception& err) {
    std::fprintf(stderr, "numerical failure: %s\n", err.what());
    return 2;
  }
  return 0;
}
