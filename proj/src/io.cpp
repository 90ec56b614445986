#include "minvar/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace minvar {

std::string format_double(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  return in;
}

double parse_double(const std::string& text, const std::string& context) {
  char* end = nullptr;
  const double value = std::strtod(text.c_str(), &end);
  if (end == text.c_str() || *end != '\0') {
    throw IoError("cannot parse number '" + text + "' in " + context);
  }
  return value;
}

long parse_long(const std::string& text, const std::string& context) {
  char* end = nullptr;
  const long value = std::strtol(text.c_str(), &end, 10);
  if (end == text.c_str() || *end != '\0') {
    throw IoError("cannot parse integer '" + text + "' in " + context);
  }
  return value;
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(field);
  return fields;
}

}  // namespace

void write_dataset_csv(const std::string& path, const Dataset& data) {
  std::ofstream out = open_out(path);
  out << "x,y,moon,quadrant,t\n";
  for (int i = 0; i < data.size(); ++i) {
    out << format_double(data.points(i, 0)) << ','
        << format_double(data.points(i, 1)) << ',' << data.moon[i] << ','
        << data.quadrant[i] << ',' << format_double(data.t_param[i]) << '\n';
  }
}

void save_network(const std::string& path, const Network& net) {
  std::ofstream out = open_out(path);
  out << "minvar-network 1\n";
  out << "input_dim " << net.config.input_dim << '\n';
  out << "output_dim " << net.config.output_dim << '\n';
  out << "hidden_layers " << net.config.hidden_layers << '\n';
  out << "hidden_width " << net.config.hidden_width << '\n';
  out << "init_seed " << net.config.init_seed << '\n';
  for (int l = 0; l < net.num_layers(); ++l) {
    const Matrix& w = net.weights[l];
    out << "layer " << l << ' ' << w.rows() << ' ' << w.cols() << '\n';
    for (Eigen::Index r = 0; r < w.rows(); ++r) {
      for (Eigen::Index c = 0; c < w.cols(); ++c) {
        out << format_double(w(r, c)) << (c + 1 < w.cols() ? ' ' : '\n');
      }
    }
    out << "bias";
    for (Eigen::Index r = 0; r < net.biases[l].size(); ++r) {
      out << ' ' << format_double(net.biases[l][r]);
    }
    out << '\n';
  }
}

Network load_network(const std::string& path) {
  std::ifstream in = open_in(path);
  std::string magic;
  int version = 0;
  in >> magic >> version;
  if (magic != "minvar-network" || version != 1) {
    throw IoError("'" + path + "' is not a minvar network checkpoint");
  }
  NetworkConfig config;
  std::string key;
  in >> key >> config.input_dim;
  in >> key >> config.output_dim;
  in >> key >> config.hidden_layers;
  in >> key >> config.hidden_width;
  in >> key >> config.init_seed;
  if (!in) throw IoError("truncated checkpoint header in '" + path + "'");

  Network net;
  net.config = config;
  const int layers = config.hidden_layers + 1;
  for (int l = 0; l < layers; ++l) {
    int index = 0;
    Eigen::Index rows = 0, cols = 0;
    in >> key >> index >> rows >> cols;
    if (!in || key != "layer" || index != l) {
      throw IoError("malformed layer header in '" + path + "'");
    }
    Matrix w(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r)
      for (Eigen::Index c = 0; c < cols; ++c) in >> w(r, c);
    Vector b(rows);
    in >> key;
    if (key != "bias") throw IoError("malformed bias line in '" + path + "'");
    for (Eigen::Index r = 0; r < rows; ++r) in >> b[r];
    if (!in) throw IoError("truncated parameters in '" + path + "'");
    net.weights.push_back(std::move(w));
    net.biases.push_back(std::move(b));
  }
  return net;
}

void write_history_csv(const std::string& path, const TrainHistory& history) {
  std::ofstream out = open_out(path);
  out << "epoch,objective,penalty,total,lr,seconds\n";
  for (const EpochRecord& r : history.epochs) {
    out << r.epoch << ',' << format_double(r.objective) << ','
        << format_double(r.penalty) << ',' << format_double(r.total) << ','
        << format_double(r.learning_rate) << ',' << format_double(r.seconds)
        << '\n';
  }
}

void write_oracle_eigenvalues_csv(const std::string& path,
                                  const SpectralOracle& oracle,
                                  bool drop_constant) {
  std::ofstream out = open_out(path);
  out << "index,eigenvalue\n";
  const int offset = drop_constant ? 1 : 0;
  for (Eigen::Index i = 0; i < oracle.eigenvalues.size(); ++i) {
    out << (offset + i) << ',' << format_double(oracle.eigenvalues[i]) << '\n';
  }
}

void write_embedding_csv(const std::string& path, const Matrix& points,
                         const Matrix& embedding) {
  if (points.rows() != embedding.rows()) {
    throw DimensionError("write_embedding_csv: row mismatch");
  }
  std::ofstream out = open_out(path);
  out << "x,y";
  for (Eigen::Index j = 0; j < embedding.cols(); ++j) out << ",phi_" << j;
  out << '\n';
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    out << format_double(points(i, 0)) << ',' << format_double(points(i, 1));
    for (Eigen::Index j = 0; j < embedding.cols(); ++j) {
      out << ',' << format_double(embedding(i, j));
    }
    out << '\n';
  }
}

Matrix read_embedding_csv(const std::string& path, int* out_point_cols) {
  std::ifstream in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty embedding file '" + path + "'");
  const auto header = split_csv_line(trim(line));
  int phi_begin = 0;
  while (phi_begin < static_cast<int>(header.size()) &&
         header[phi_begin].rfind("phi_", 0) != 0) {
    ++phi_begin;
  }
  const int total = static_cast<int>(header.size());
  if (phi_begin == total) throw IoError("no phi_* columns in '" + path + "'");
  if (out_point_cols) *out_point_cols = phi_begin;

  std::vector<double> values;
  Eigen::Index rows = 0;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (static_cast<int>(fields.size()) != total) {
      throw IoError("ragged row in '" + path + "'");
    }
    for (int j = phi_begin; j < total; ++j) {
      values.push_back(parse_double(fields[j], path));
    }
    ++rows;
  }
  const int cols = total - phi_begin;
  Matrix embedding(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) embedding(i, j) = values[i * cols + j];
  return embedding;
}

void write_grid_csv(const std::string& path, const Matrix& grid,
                    const Matrix& features) {
  write_embedding_csv(path, grid, features);
}

double RunConfig::resolved_sigma() const {
  if (sigma == "auto") return noise_std;
  return parse_double(sigma, "sigma");
}

double RunConfig::resolved_margin() const {
  if (margin == "auto") return 3.0 * noise_std;
  return parse_double(margin, "margin");
}

bool RunConfig::lambda_is_auto() const { return lambda == "auto"; }

double RunConfig::lambda_value() const {
  if (lambda_is_auto()) return -1.0;
  if (lambda == "default") {
    // Tuned per objective so the penalized optimum keeps every feature
    // direction inflated (end-of-training omega stays below 0.1).
    const ObjectiveKind kind = parse_objective(objective);
    switch (kind) {
      case ObjectiveKind::kSsl: return 0.2;
      case ObjectiveKind::kGraphLaplacian: return 1e-3;
      case ObjectiveKind::kDirichlet: return 20.0;
    }
  }
  return parse_double(lambda, "lambda");
}

MoonParams RunConfig::moon_params() const {
  MoonParams params;
  params.n = n;
  params.noise_std = noise_std;
  params.seed = seed;
  return params;
}

NetworkConfig RunConfig::network_config() const {
  NetworkConfig net;
  net.input_dim = 2;
  net.output_dim = output_dim;
  net.hidden_layers = hidden_layers;
  net.hidden_width = hidden_width;
  net.init_seed = seed + 1;
  return net;
}

TrainConfig RunConfig::train_config() const {
  TrainConfig train;
  train.objective = parse_objective(objective);
  train.lambda_auto = lambda_is_auto();
  if (!train.lambda_auto) train.lambda = lambda_value();
  train.sigma = resolved_sigma();
  train.learning_rate = learning_rate;
  train.epochs = epochs;
  train.batch_size = batch_size;
  train.seed = seed + 2;
  train.lr_decay_points = lr_decay_points;
  train.lr_decay_factor = lr_decay_factor;
  train.penalty_only = penalty_only;
  return train;
}

void apply_config_line(RunConfig& config, const std::string& key,
                       const std::string& value) {
  const std::string context = "config key '" + key + "'";
  if (key == "n") config.n = static_cast<int>(parse_long(value, context));
  else if (key == "noise_std") config.noise_std = parse_double(value, context);
  else if (key == "train_fraction") config.train_fraction = parse_double(value, context);
  else if (key == "output_dim" || key == "p") config.output_dim = static_cast<int>(parse_long(value, context));
  else if (key == "hidden_layers") config.hidden_layers = static_cast<int>(parse_long(value, context));
  else if (key == "hidden_width") config.hidden_width = static_cast<int>(parse_long(value, context));
  else if (key == "objective") config.objective = value;
  else if (key == "lambda") config.lambda = value;
  else if (key == "sigma") config.sigma = value;
  else if (key == "learning_rate") config.learning_rate = parse_double(value, context);
  else if (key == "epochs") config.epochs = static_cast<int>(parse_long(value, context));
  else if (key == "batch_size") config.batch_size = static_cast<int>(parse_long(value, context));
  else if (key == "lr_decay_points") {
    config.lr_decay_points.clear();
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (!item.empty()) config.lr_decay_points.push_back(parse_double(item, context));
    }
  }
  else if (key == "lr_decay_factor") config.lr_decay_factor = parse_double(value, context);
  else if (key == "penalty_only") config.penalty_only = (value == "true" || value == "1");
  else if (key == "ridge") config.ridge = parse_double(value, context);
  else if (key == "probe_repeats") config.probe_repeats = static_cast<int>(parse_long(value, context));
  else if (key == "margin") config.margin = value;
  else if (key == "grid_resolution") config.grid_resolution = static_cast<int>(parse_long(value, context));
  else if (key == "grid_padding") config.grid_padding = parse_double(value, context);
  else if (key == "drop_constant") config.drop_constant = (value == "true" || value == "1");
  else if (key == "seed") config.seed = static_cast<std::uint64_t>(parse_long(value, context));
  else if (key == "out") config.out = value;
  else throw ParameterError("unknown config key '" + key + "'");
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in = open_in(path);
  RunConfig config;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParameterError("config '" + path + "' line " +
                           std::to_string(line_number) + ": expected key = value");
    }
    apply_config_line(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return config;
}

std::string serialize_config(const RunConfig& c) {
  std::ostringstream out;
  out << "n = " << c.n << '\n';
  out << "noise_std = " << format_double(c.noise_std) << '\n';
  out << "train_fraction = " << format_double(c.train_fraction) << '\n';
  out << "output_dim = " << c.output_dim << '\n';
  out << "hidden_layers = " << c.hidden_layers << '\n';
  out << "hidden_width = " << c.hidden_width << '\n';
  out << "objective = " << c.objective << '\n';
  out << "lambda = " << c.lambda << '\n';
  out << "sigma = " << c.sigma << '\n';
  out << "learning_rate = " << format_double(c.learning_rate) << '\n';
  out << "epochs = " << c.epochs << '\n';
  out << "batch_size = " << c.batch_size << '\n';
  out << "lr_decay_points = ";
  for (std::size_t i = 0; i < c.lr_decay_points.size(); ++i) {
    out << (i ? "," : "") << format_double(c.lr_decay_points[i]);
  }
  out << '\n';
  out << "lr_decay_factor = " << format_double(c.lr_decay_factor) << '\n';
  out << "penalty_only = " << (c.penalty_only ? "true" : "false") << '\n';
  out << "ridge = " << format_double(c.ridge) << '\n';
  out << "probe_repeats = " << c.probe_repeats << '\n';
  out << "margin = " << c.margin << '\n';
  out << "grid_resolution = " << c.grid_resolution << '\n';
  out << "grid_padding = " << format_double(c.grid_padding) << '\n';
  out << "drop_constant = " << (c.drop_constant ? "true" : "false") << '\n';
  out << "seed = " << c.seed << '\n';
  out << "out = " << c.out << '\n';
  return out.str();
}

}  // namespace minvar
