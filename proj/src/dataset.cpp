#include "minvar/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "minvar/rng.hpp"

namespace minvar {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kHalfPi = 1.57079632679489661923;
}  // namespace

Dataset make_moons(const MoonParams& params) {
  if (params.n < 4 || params.n % 2 != 0) {
    throw ParameterError("make_moons: n must be even and >= 4, got " +
                         std::to_string(params.n));
  }
  if (!(params.noise_std >= 0.0) || !std::isfinite(params.noise_std)) {
    throw ParameterError("make_moons: noise_std must be finite and >= 0");
  }

  const int n = params.n;
  Rng rng(params.seed);
  Dataset data;
  data.points.resize(n, 2);
  data.moon.resize(n);
  data.quadrant.resize(n);
  data.t_param.resize(n);

  for (int i = 0; i < n; ++i) {
    const int moon = i < n / 2 ? 0 : 1;
    const double t = kPi * rng.uniform();
    const double nx = rng.normal();
    const double ny = rng.normal();
    double x, y;
    if (moon == 0) {
      x = std::cos(t);
      y = std::sin(t);
    } else {
      x = 1.0 - std::cos(t);
      y = 0.5 - std::sin(t);
    }
    data.points(i, 0) = x + params.noise_std * nx;
    data.points(i, 1) = y + params.noise_std * ny;
    data.moon[i] = moon;
    data.t_param[i] = t;
    data.quadrant[i] = 2 * moon + (t >= kHalfPi ? 1 : 0);
  }
  return data;
}

Matrix make_grid(double x0, double x1, double y0, double y1, int resolution) {
  if (resolution < 2) {
    throw ParameterError("make_grid: resolution must be >= 2");
  }
  if (!(x1 > x0) || !(y1 > y0)) {
    throw ParameterError("make_grid: degenerate interval");
  }
  const double dx = (x1 - x0) / (resolution - 1);
  const double dy = (y1 - y0) / (resolution - 1);
  Matrix grid(static_cast<Eigen::Index>(resolution) * resolution, 2);
  Eigen::Index row = 0;
  for (int i = 0; i < resolution; ++i) {
    const double x = (i == resolution - 1) ? x1 : x0 + i * dx;
    for (int j = 0; j < resolution; ++j, ++row) {
      grid(row, 0) = x;
      grid(row, 1) = (j == resolution - 1) ? y1 : y0 + j * dy;
    }
  }
  return grid;
}

std::pair<std::vector<int>, std::vector<int>> split_indices(
    const Dataset& data, double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0) || !(train_fraction < 1.0)) {
    throw ParameterError("split: train_fraction must lie in (0, 1)");
  }
  const int n = data.size();
  const int total_train = static_cast<int>(std::lround(train_fraction * n));
  if (total_train < 1 || total_train >= n) {
    throw ParameterError("split: both sides must be nonempty");
  }

  std::vector<std::vector<int>> by_class(4);
  for (int i = 0; i < n; ++i) by_class[data.quadrant[i]].push_back(i);

  // Largest-remainder allocation keeps each class within one sample of its
  // exact share while the train total stays at round(fraction * n).
  std::vector<int> take(4, 0);
  std::vector<std::pair<double, int>> remainders;
  int allocated = 0;
  for (int c = 0; c < 4; ++c) {
    const double target = train_fraction * static_cast<double>(by_class[c].size());
    take[c] = static_cast<int>(std::floor(target));
    allocated += take[c];
    remainders.push_back({target - take[c], c});
  }
  std::sort(remainders.begin(), remainders.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  for (int extra = total_train - allocated, i = 0; extra > 0 && i < 4; ++i) {
    const int c = remainders[i].second;
    if (take[c] < static_cast<int>(by_class[c].size())) {
      ++take[c];
      --extra;
    }
  }

  Rng rng(seed);
  std::vector<int> train, test;
  for (int c = 0; c < 4; ++c) {
    auto& members = by_class[c];
    for (int i = static_cast<int>(members.size()) - 1; i > 0; --i) {
      const int j = static_cast<int>(rng.uniform() * (i + 1));
      std::swap(members[i], members[std::min(j, i)]);
    }
    for (int i = 0; i < static_cast<int>(members.size()); ++i) {
      (i < take[c] ? train : test).push_back(members[i]);
    }
  }
  std::sort(train.begin(), train.end());
  std::sort(test.begin(), test.end());
  if (train.empty() || test.empty()) {
    throw ParameterError("split: both sides must be nonempty");
  }
  return {train, test};
}

Dataset subset(const Dataset& data, const std::vector<int>& rows) {
  Dataset out;
  out.points.resize(static_cast<Eigen::Index>(rows.size()), 2);
  out.moon.reserve(rows.size());
  out.quadrant.reserve(rows.size());
  out.t_param.reserve(rows.size());
  Eigen::Index r = 0;
  for (int i : rows) {
    out.points.row(r++) = data.points.row(i);
    out.moon.push_back(data.moon[i]);
    out.quadrant.push_back(data.quadrant[i]);
    out.t_param.push_back(data.t_param[i]);
  }
  return out;
}

std::pair<Dataset, Dataset> split(const Dataset& data, double train_fraction,
                                  std::uint64_t seed) {
  auto [train, test] = split_indices(data, train_fraction, seed);
  return {subset(data, train), subset(data, test)};
}

}  // namespace minvar
