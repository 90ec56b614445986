#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "minvar/dataset.hpp"
#include "minvar/io.hpp"
#include "minvar/linalg.hpp"
#include "minvar/network.hpp"
#include "minvar/objectives.hpp"
#include "minvar/oracle.hpp"
#include "minvar/rng.hpp"
#include "minvar/trainer.hpp"

namespace py = pybind11;
using namespace minvar;

namespace {

TrainConfig make_train_config(const std::string& objective, py::object lambda,
                              double sigma, double learning_rate, int epochs,
                              int batch_size, std::uint64_t seed,
                              std::vector<double> lr_decay_points,
                              double lr_decay_factor, bool penalty_only) {
  TrainConfig config;
  config.objective = parse_objective(objective);
  if (lambda.is_none() || (py::isinstance<py::str>(lambda) &&
                           lambda.cast<std::string>() == "auto")) {
    config.lambda_auto = true;
  } else {
    config.lambda_auto = false;
    config.lambda = lambda.cast<double>();
  }
  config.sigma = sigma;
  config.learning_rate = learning_rate;
  config.epochs = epochs;
  config.batch_size = batch_size;
  config.seed = seed;
  config.lr_decay_points = std::move(lr_decay_points);
  config.lr_decay_factor = lr_decay_factor;
  config.penalty_only = penalty_only;
  return config;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Minimal-variation embeddings: SSL, graph-Laplacian and Dirichlet "
            "objectives with a spectral oracle";

  py::register_exception<ParameterError>(m, "ParameterError", PyExc_ValueError);
  py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);
  py::register_exception<RankError>(m, "RankError", PyExc_ValueError);
  py::register_exception<DataError>(m, "DataError", PyExc_RuntimeError);
  py::register_exception<NumericError>(m, "NumericError", PyExc_RuntimeError);

  py::class_<Rng>(m, "Rng")
      .def(py::init<std::uint64_t>(), py::arg("seed"))
      .def("normal", &Rng::normal)
      .def("uniform", &Rng::uniform)
      .def("fork", &Rng::fork, py::arg("stream"));

  py::class_<Dataset>(m, "Dataset")
      .def_readonly("points", &Dataset::points)
      .def_readonly("moon", &Dataset::moon)
      .def_readonly("quadrant", &Dataset::quadrant)
      .def_readonly("t_param", &Dataset::t_param)
      .def("__len__", &Dataset::size);

  m.def(
      "make_moons",
      [](int n, double noise_std, std::uint64_t seed) {
        return make_moons(MoonParams{n, noise_std, seed});
      },
      py::arg("n") = 1000, py::arg("noise_std") = 0.1, py::arg("seed") = 0);
  m.def("make_grid", &make_grid, py::arg("x0"), py::arg("x1"), py::arg("y0"),
        py::arg("y1"), py::arg("resolution"));
  m.def(
      "split",
      [](const Dataset& data, double fraction, std::uint64_t seed) {
        return split(data, fraction, seed);
      },
      py::arg("data"), py::arg("train_fraction"), py::arg("seed"));
  m.def("split_indices", &split_indices, py::arg("data"),
        py::arg("train_fraction"), py::arg("seed"));

  py::class_<NetworkConfig>(m, "NetworkConfig")
      .def(py::init([](int input_dim, int output_dim, int hidden_layers,
                       int hidden_width, std::uint64_t init_seed) {
             return NetworkConfig{input_dim, output_dim, hidden_layers,
                                  hidden_width, init_seed};
           }),
           py::arg("input_dim") = 2, py::arg("output_dim") = 2,
           py::arg("hidden_layers") = 5, py::arg("hidden_width") = 100,
           py::arg("init_seed") = 0)
      .def_readwrite("input_dim", &NetworkConfig::input_dim)
      .def_readwrite("output_dim", &NetworkConfig::output_dim)
      .def_readwrite("hidden_layers", &NetworkConfig::hidden_layers)
      .def_readwrite("hidden_width", &NetworkConfig::hidden_width)
      .def_readwrite("init_seed", &NetworkConfig::init_seed);

  py::class_<Network>(m, "Network")
      .def_readonly("config", &Network::config)
      .def_property_readonly("weights",
                             [](const Network& net) { return net.weights; })
      .def_property_readonly("biases",
                             [](const Network& net) { return net.biases; })
      .def("param_count", &Network::param_count);

  m.def("init_network", &init_network, py::arg("config"));
  m.def(
      "forward",
      [](const Network& net, const Matrix& x) {
        return forward_batch(net, x).output;
      },
      py::arg("net"), py::arg("points"));
  m.def("input_jacobian", &input_jacobian, py::arg("net"), py::arg("x"));
  m.def(
      "grad_params",
      [](const Network& net, const Vector& x, const Vector& upstream) {
        const ParamGradient g = grad_params(net, x, upstream);
        return py::make_tuple(g.weights, g.biases);
      },
      py::arg("net"), py::arg("x"), py::arg("upstream"));
  m.def(
      "dirichlet_point_value_and_grad",
      [](const Network& net, const Vector& x) {
        const auto [value, g] = dirichlet_point_value_and_grad(net, x);
        return py::make_tuple(value, g.weights, g.biases);
      },
      py::arg("net"), py::arg("x"));

  m.def("gaussian_kernel", &gaussian_kernel, py::arg("x"), py::arg("y"),
        py::arg("sigma"));
  m.def("kernel_matrix", &kernel_matrix, py::arg("points"), py::arg("sigma"));
  m.def(
      "ssl_energy",
      [](const Network& net, const Matrix& batch, double sigma, Rng& rng) {
        return ssl_energy(net, batch, sigma, rng).value;
      },
      py::arg("net"), py::arg("batch"), py::arg("sigma"), py::arg("rng"));
  m.def("graph_energy", &graph_energy, py::arg("embedding"), py::arg("weights"));
  m.def(
      "graph_energy_value",
      [](const Network& net, const Matrix& batch, double sigma) {
        return graph_energy_grad(net, batch, sigma).value;
      },
      py::arg("net"), py::arg("batch"), py::arg("sigma"));
  m.def(
      "dirichlet_energy",
      [](const Network& net, const Matrix& batch) {
        return dirichlet_energy(net, batch).value;
      },
      py::arg("net"), py::arg("batch"));
  m.def(
      "orthogonality_penalty",
      [](const Matrix& embedding) {
        const auto p = orthogonality_penalty(embedding);
        return py::make_tuple(p.value, p.grad);
      },
      py::arg("embedding"));
  m.def(
      "zero_mean_orthogonality_penalty",
      [](const Matrix& embedding) {
        const auto p = zero_mean_orthogonality_penalty(embedding);
        return py::make_tuple(p.value, p.grad);
      },
      py::arg("embedding"));
  m.def("smoothed_energy", &smoothed_energy, py::arg("embedding"),
        py::arg("points"), py::arg("sigma"));

  py::class_<EpochRecord>(m, "EpochRecord")
      .def_readonly("epoch", &EpochRecord::epoch)
      .def_readonly("objective", &EpochRecord::objective)
      .def_readonly("penalty", &EpochRecord::penalty)
      .def_readonly("total", &EpochRecord::total)
      .def_readonly("learning_rate", &EpochRecord::learning_rate)
      .def_readonly("seconds", &EpochRecord::seconds);

  py::class_<TrainHistory>(m, "TrainHistory")
      .def_readonly("epochs", &TrainHistory::epochs)
      .def_property_readonly("lambda_",
                             [](const TrainHistory& h) { return h.lambda; });

  m.def(
      "train",
      [](const Network& net, const Dataset& data, const std::string& objective,
         py::object lambda, double sigma, double learning_rate, int epochs,
         int batch_size, std::uint64_t seed, std::vector<double> lr_decay_points,
         double lr_decay_factor, bool penalty_only) {
        TrainConfig config = make_train_config(
            objective, lambda, sigma, learning_rate, epochs, batch_size, seed,
            std::move(lr_decay_points), lr_decay_factor, penalty_only);
        TrainResult result = train(net, data, config);
        return py::make_tuple(result.net, result.history);
      },
      py::arg("net"), py::arg("data"), py::arg("objective") = "dirichlet",
      py::arg("lambda_") = py::none(), py::arg("sigma") = 0.1,
      py::arg("learning_rate") = 0.005, py::arg("epochs") = 3000,
      py::arg("batch_size") = 512, py::arg("seed") = 0,
      py::arg("lr_decay_points") = std::vector<double>{0.6, 0.8},
      py::arg("lr_decay_factor") = 0.3, py::arg("penalty_only") = false);
  m.def(
      "auto_lambda",
      [](const Network& net, const Dataset& data, const std::string& objective,
         double sigma, std::uint64_t seed) {
        TrainConfig config;
        config.objective = parse_objective(objective);
        config.sigma = sigma;
        config.seed = seed;
        return auto_lambda(net, data, config);
      },
      py::arg("net"), py::arg("data"), py::arg("objective"), py::arg("sigma"),
      py::arg("seed") = 0);

  m.def("sym_eig", [](const Matrix& a) {
    const SymEig eig = sym_eig(a);
    return py::make_tuple(eig.eigenvalues, eig.eigenvectors);
  });
  m.def(
      "principal_angle_cosines",
      [](const Matrix& a, const Matrix& b) {
        return principal_angle_cosines(a, b);
      },
      py::arg("a"), py::arg("b"));
  m.def("random_orthogonal", &random_orthogonal, py::arg("n"), py::arg("rng"));

  m.def("build_laplacian", &build_laplacian, py::arg("points"), py::arg("sigma"));
  py::class_<SpectralOracle>(m, "SpectralOracle")
      .def_readonly("eigenvalues", &SpectralOracle::eigenvalues)
      .def_readonly("embedding", &SpectralOracle::embedding)
      .def_readonly("includes_constant", &SpectralOracle::includes_constant);
  m.def("spectral_embedding", &spectral_embedding, py::arg("points"),
        py::arg("sigma"), py::arg("p"), py::arg("drop_constant") = true);
  m.def("free_embedding_descent", &free_embedding_descent, py::arg("points"),
        py::arg("sigma"), py::arg("p"), py::arg("lambda_"), py::arg("steps"),
        py::arg("seed"), py::arg("learning_rate") = 2.0);

  py::class_<ProbeModel>(m, "ProbeModel")
      .def_readonly("weights", &ProbeModel::weights);
  m.def("probe_fit", &probe_fit, py::arg("features"), py::arg("labels"),
        py::arg("ridge") = 1e-6);
  m.def("probe_predict", &probe_predict, py::arg("model"), py::arg("features"));
  m.def("probe_accuracy", &probe_accuracy, py::arg("model"), py::arg("features"),
        py::arg("labels"));
  m.def("align", &align, py::arg("learned"), py::arg("oracle"),
        py::arg("append_constant") = true);
  m.def("off_manifold_magnitude", &off_manifold_magnitude, py::arg("net"),
        py::arg("grid"), py::arg("data"), py::arg("margin"));

  m.def("save_network", &save_network, py::arg("path"), py::arg("net"));
  m.def("load_network", &load_network, py::arg("path"));
}
