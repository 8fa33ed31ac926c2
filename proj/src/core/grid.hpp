#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "core/date.hpp"
#include "core/projection.hpp"

namespace gtwnn {

// Geometry and time axis of a count grid. Row 0 sits at the southern edge
// (lowest northing), column 0 at the western edge; both grow outward from
// `origin`, the extent's minimum corner in projected kilometres.
struct GridSpec {
  std::int64_t rows = 0;
  std::int64_t cols = 0;
  double origin_e_km = 0.0;
  double origin_n_km = 0.0;
  double cell_w_km = 0.0;
  double cell_h_km = 0.0;
  std::int64_t t_steps = 0;
  TimeResolution t_resolution = TimeResolution::monthly;
  Date start_date{2000, 1, 0};

  void validate() const;
  std::int64_t cells() const { return rows * cols; }
  // Projected centre of cell (r, c), in kilometres.
  double center_e_km(std::int64_t c) const { return origin_e_km + (c + 0.5) * cell_w_km; }
  double center_n_km(std::int64_t r) const { return origin_n_km + (r + 0.5) * cell_h_km; }
};

// The central dataset form: a [t][row][col] count tensor plus one tensor of
// the same shape per event category, all tied to one GridSpec.
class SpatioTemporalGrid {
 public:
  SpatioTemporalGrid() = default;
  SpatioTemporalGrid(GridSpec spec, std::vector<std::string> type_labels);

  const GridSpec& spec() const { return spec_; }
  const std::vector<std::string>& type_labels() const { return type_labels_; }
  std::int64_t n_types() const { return static_cast<std::int64_t>(type_labels_.size()); }

  std::int64_t& count(std::int64_t t, std::int64_t r, std::int64_t c) {
    return counts_[index(t, r, c)];
  }
  std::int64_t count(std::int64_t t, std::int64_t r, std::int64_t c) const {
    return counts_[index(t, r, c)];
  }
  std::int64_t& type_count(std::int64_t type, std::int64_t t, std::int64_t r, std::int64_t c) {
    return per_type_[static_cast<std::size_t>(type)][index(t, r, c)];
  }
  std::int64_t type_count(std::int64_t type, std::int64_t t, std::int64_t r, std::int64_t c) const {
    return per_type_[static_cast<std::size_t>(type)][index(t, r, c)];
  }

  const std::vector<std::int64_t>& counts_flat() const { return counts_; }
  const std::vector<std::int64_t>& type_counts_flat(std::int64_t type) const {
    return per_type_[static_cast<std::size_t>(type)];
  }

  // Total event count per time step (the grid-wide series the temporal
  // diagnostics run on).
  std::vector<double> total_series() const;

  // Sum of the count tensor.
  std::int64_t total_events() const;

  // Throws unless every per-cell total equals the sum over categories and
  // every entry is non-negative.
  void validate_consistency() const;

 private:
  std::size_t index(std::int64_t t, std::int64_t r, std::int64_t c) const;

  GridSpec spec_;
  std::vector<std::string> type_labels_;
  std::vector<std::int64_t> counts_;
  std::vector<std::vector<std::int64_t>> per_type_;
};

// Binary grid container: magic + version, a JSON metadata header holding the
// GridSpec fields and category labels, then the row-major little-endian
// int64 tensors (total first, categories in label order).
void save_grid(const SpatioTemporalGrid& grid, const std::string& path);
SpatioTemporalGrid load_grid(const std::string& path);

// One CSV matrix per time step (t0000.csv, ...) into `dir`.
void export_grid_csv(const SpatioTemporalGrid& grid, const std::string& dir);

}  // namespace gtwnn
