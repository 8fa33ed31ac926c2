#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "core/grid.hpp"

namespace gtwnn {

// One training row. Model input is (e_km, n_km, t); the external-factor
// vectors are the per-type counts one and two steps before t. Neighborhood
// target blocks are assembled lazily by the models module from the owning
// grid, which `grid_index` addresses inside the Dataset.
struct Sample {
  std::int64_t t = 0;
  std::int64_t r = 0;
  std::int64_t c = 0;
  double e_km = 0.0;
  double n_km = 0.0;
  std::vector<double> ef_t;    // per-type counts at t-1
  std::vector<double> ef_tm1;  // per-type counts at t-2
  double target = 0.0;
  std::int32_t grid_index = 0;

  std::vector<double> input() const { return {e_km, n_km, static_cast<double>(t)}; }
};

struct Dataset {
  std::vector<std::shared_ptr<const SpatioTemporalGrid>> grids;
  std::vector<Sample> samples;

  std::int64_t size() const { return static_cast<std::int64_t>(samples.size()); }
  const SpatioTemporalGrid& grid_of(const Sample& s) const { return *grids[static_cast<std::size_t>(s.grid_index)]; }
  std::int64_t n_types() const { return grids.empty() ? 0 : grids.front()->n_types(); }
};

// One sample per (t, r, c) with t >= 2. Cells with no events in any period
// yield no samples: they lie outside the studied area (the projected
// bounding box is rectangular, the city is not), and keeping them would
// swamp the dataset with structurally empty rows.
Dataset build_dataset(std::shared_ptr<const SpatioTemporalGrid> grid);

// The original dataset plus its seven D4-transformed copies: exactly 8x the
// samples, each tied to its own transformed grid.
Dataset d4_augment_dataset(std::shared_ptr<const SpatioTemporalGrid> grid);

// Test = every sample whose t falls in the final year of the span (12
// monthly or 365 daily steps); train = the rest. Both halves are shuffled
// with independent streams derived from `seed`.
std::pair<Dataset, Dataset> split_train_test(const Dataset& dataset, std::uint64_t seed);

}  // namespace gtwnn
