#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "minvar/matrix.hpp"

namespace minvar {

struct MoonParams {
  int n = 1000;
  double noise_std = 0.1;
  std::uint64_t seed = 0;
};

// Two interlocking crescents in the plane. Arc 0 is (cos t, sin t) and arc 1
// is (1 - cos t, 0.5 - sin t) for t in [0, pi], plus isotropic Gaussian
// noise. The four-way label splits each crescent at its arc midpoint:
// quadrant = 2 * moon + [t >= pi/2].
struct Dataset {
  Matrix points;               // n x 2
  std::vector<int> moon;       // 0 or 1
  std::vector<int> quadrant;   // 0..3
  std::vector<double> t_param; // generation angle in [0, pi)

  int size() const { return static_cast<int>(points.rows()); }
};

Dataset make_moons(const MoonParams& params);

// Row-major lattice of resolution x resolution points covering the closed
// ranges [x0, x1] x [y0, y1], x varying slowest, endpoints included.
Matrix make_grid(double x0, double x1, double y0, double y1, int resolution);

// Stratified split indices: per class, round(train_fraction * count) within
// one sample, shuffled deterministically, returned sorted ascending.
std::pair<std::vector<int>, std::vector<int>> split_indices(
    const Dataset& data, double train_fraction, std::uint64_t seed);

Dataset subset(const Dataset& data, const std::vector<int>& rows);

std::pair<Dataset, Dataset> split(const Dataset& data, double train_fraction,
                                  std::uint64_t seed);

}  // namespace minvar
