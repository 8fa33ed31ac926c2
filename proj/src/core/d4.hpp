#pragma once

#include <array>
#include <cstdint>
#include <utility>

#include "core/matrix.hpp"

namespace gtwnn {

// The eight distance-preserving map transforms of the dihedral group D4.
// The mirrors are realized as transpose composed with a rotation:
// vertical = transpose + rot90, horizontal = transpose + rot270,
// diagonal = transpose, off-diagonal = transpose + rot180.
enum class D4 : int {
  identity = 0,
  rot90,
  rot180,
  rot270,
  mirror_vertical,
  mirror_horizontal,
  mirror_diagonal,
  mirror_offdiagonal,
};

inline const std::array<D4, 8>& d4_all() {
  static const std::array<D4, 8> all = {
      D4::identity,        D4::rot90,             D4::rot180,          D4::rot270,
      D4::mirror_vertical, D4::mirror_horizontal, D4::mirror_diagonal, D4::mirror_offdiagonal};
  return all;
}

inline const char* to_string(D4 t) {
  switch (t) {
    case D4::identity: return "identity";
    case D4::rot90: return "rot90";
    case D4::rot180: return "rot180";
    case D4::rot270: return "rot270";
    case D4::mirror_vertical: return "mirror_vertical";
    case D4::mirror_horizontal: return "mirror_horizontal";
    case D4::mirror_diagonal: return "mirror_diagonal";
    case D4::mirror_offdiagonal: return "mirror_offdiagonal";
  }
  return "unknown";
}

// Shape of a rows x cols map after the transform.
inline std::pair<std::int64_t, std::int64_t> d4_shape(D4 t, std::int64_t rows, std::int64_t cols) {
  switch (t) {
    case D4::identity:
    case D4::rot180:
    case D4::mirror_vertical:
    case D4::mirror_horizontal:
      return {rows, cols};
    default:
      return {cols, rows};
  }
}

// Where source cell (r, c) of a rows x cols map lands under the transform.
inline std::pair<std::int64_t, std::int64_t> d4_map_index(D4 t, std::int64_t rows,
                                                          std::int64_t cols, std::int64_t r,
                                                          std::int64_t c) {
  switch (t) {
    case D4::identity: return {r, c};
    case D4::rot90: return {cols - 1 - c, r};
    case D4::rot180: return {rows - 1 - r, cols - 1 - c};
    case D4::rot270: return {c, rows - 1 - r};
    case D4::mirror_vertical: return {rows - 1 - r, c};
    case D4::mirror_horizontal: return {r, cols - 1 - c};
    case D4::mirror_diagonal: return {c, r};
    case D4::mirror_offdiagonal: return {cols - 1 - c, rows - 1 - r};
  }
  return {r, c};
}

inline Matrix d4_apply(D4 t, const Matrix& m) {
  auto [out_rows, out_cols] = d4_shape(t, m.rows, m.cols);
  Matrix out(out_rows, out_cols);
  for (std::int64_t r = 0; r < m.rows; ++r)
    for (std::int64_t c = 0; c < m.cols; ++c) {
      auto [tr, tc] = d4_map_index(t, m.rows, m.cols, r, c);
      out.at(tr, tc) = m.at(r, c);
    }
  return out;
}

// All eight transforms of the map, in d4_all() order (identity first).
inline std::array<Matrix, 8> d4_transforms(const Matrix& m) {
  std::array<Matrix, 8> out;
  for (std::size_t i = 0; i < 8; ++i) out[i] = d4_apply(d4_all()[i], m);
  return out;
}

}  // namespace gtwnn
