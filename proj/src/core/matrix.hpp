#pragma once

#include <cstdint>
#include <vector>

#include "core/common.hpp"

namespace gtwnn {

// Dense row-major real matrix used for map-level artifacts (time-averaged
// maps, difference maps, aggregated correlation grids).
struct Matrix {
  std::int64_t rows = 0;
  std::int64_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::int64_t r, std::int64_t c, double fill = 0.0)
      : rows(r), cols(c), data(static_cast<std::size_t>(r * c), fill) {
    if (r <= 0 || c <= 0) throw Error(ErrorKind::invalid_argument, "matrix dimensions must be positive");
  }

  double& at(std::int64_t r, std::int64_t c) { return data[static_cast<std::size_t>(r * cols + c)]; }
  double at(std::int64_t r, std::int64_t c) const {
    return data[static_cast<std::size_t>(r * cols + c)];
  }

  bool same_shape(const Matrix& other) const { return rows == other.rows && cols == other.cols; }
  bool operator==(const Matrix&) const = default;
};

}  // namespace gtwnn
