#pragma once

#include <Eigen/Dense>

#include "minvar/errors.hpp"

namespace minvar {

// Dense double-precision storage, row-major so a row is one sample.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

inline bool all_finite(const Matrix& m) { return m.allFinite(); }
inline bool all_finite(const Vector& v) { return v.allFinite(); }

template <typename T>
void require_finite(const char* what, const T& value) {
  if (!all_finite(value)) {
    throw NumericError(std::string(what) + ": non-finite entries");
  }
}

}  // namespace minvar
