#include "core/dataset.hpp"

#include <numeric>

#include "core/common.hpp"
#include "core/d4.hpp"
#include "core/rng.hpp"

namespace gtwnn {

namespace {

void append_samples(Dataset& dataset, std::int32_t grid_index) {
  const SpatioTemporalGrid& grid = *dataset.grids[static_cast<std::size_t>(grid_index)];
  const GridSpec& spec = grid.spec();
  if (spec.t_steps < 3)
    throw Error(ErrorKind::invalid_argument,
                "building a dataset needs at least 3 time steps (got " + format_int(spec.t_steps) + ")");

  // Active cells: any event in any period.
  std::vector<std::uint8_t> active(static_cast<std::size_t>(spec.rows * spec.cols), 0);
  for (std::int64_t t = 0; t < spec.t_steps; ++t)
    for (std::int64_t r = 0; r < spec.rows; ++r)
      for (std::int64_t c = 0; c < spec.cols; ++c)
        if (grid.count(t, r, c) > 0) active[static_cast<std::size_t>(r * spec.cols + c)] = 1;

  const std::int64_t n_types = grid.n_types();
  for (std::int64_t t = 2; t < spec.t_steps; ++t) {
    for (std::int64_t r = 0; r < spec.rows; ++r) {
      for (std::int64_t c = 0; c < spec.cols; ++c) {
        if (!active[static_cast<std::size_t>(r * spec.cols + c)]) continue;
        Sample s;
        s.t = t;
        s.r = r;
        s.c = c;
        s.e_km = spec.center_e_km(c);
        s.n_km = spec.center_n_km(r);
        s.ef_t.resize(static_cast<std::size_t>(n_types));
        s.ef_tm1.resize(static_cast<std::size_t>(n_types));
        for (std::int64_t k = 0; k < n_types; ++k) {
          s.ef_t[static_cast<std::size_t>(k)] = static_cast<double>(grid.type_count(k, t - 1, r, c));
          s.ef_tm1[static_cast<std::size_t>(k)] = static_cast<double>(grid.type_count(k, t - 2, r, c));
        }
        s.target = static_cast<double>(grid.count(t, r, c));
        s.grid_index = grid_index;
        dataset.samples.push_back(std::move(s));
      }
    }
  }
}

SpatioTemporalGrid transform_grid(const SpatioTemporalGrid& grid, D4 t) {
  const GridSpec& spec = grid.spec();
  auto [rows, cols] = d4_shape(t, spec.rows, spec.cols);
  GridSpec out_spec = spec;
  out_spec.rows = rows;
  out_spec.cols = cols;
  const bool axes_swapped = t == D4::rot90 || t == D4::rot270 || t == D4::mirror_diagonal ||
                            t == D4::mirror_offdiagonal;
  if (axes_swapped) std::swap(out_spec.cell_w_km, out_spec.cell_h_km);
  SpatioTemporalGrid out(out_spec, grid.type_labels());
  for (std::int64_t step = 0; step < spec.t_steps; ++step)
    for (std::int64_t r = 0; r < spec.rows; ++r)
      for (std::int64_t c = 0; c < spec.cols; ++c) {
        auto [tr, tc] = d4_map_index(t, spec.rows, spec.cols, r, c);
        out.count(step, tr, tc) = grid.count(step, r, c);
        for (std::int64_t k = 0; k < grid.n_types(); ++k)
          out.type_count(k, step, tr, tc) = grid.type_count(k, step, r, c);
      }
  return out;
}

}  // namespace

Dataset build_dataset(std::shared_ptr<const SpatioTemporalGrid> grid) {
  if (!grid) throw Error(ErrorKind::invalid_argument, "build_dataset: null grid");
  Dataset dataset;
  dataset.grids.push_back(std::move(grid));
  append_samples(dataset, 0);
  return dataset;
}

Dataset d4_augment_dataset(std::shared_ptr<const SpatioTemporalGrid> grid) {
  if (!grid) throw Error(ErrorKind::invalid_argument, "d4_augment_dataset: null grid");
  Dataset dataset;
  for (std::size_t i = 0; i < d4_all().size(); ++i) {
    const D4 t = d4_all()[i];
    if (t == D4::identity)
      dataset.grids.push_back(grid);
    else
      dataset.grids.push_back(std::make_shared<SpatioTemporalGrid>(transform_grid(*grid, t)));
    append_samples(dataset, static_cast<std::int32_t>(i));
  }
  return dataset;
}

std::pair<Dataset, Dataset> split_train_test(const Dataset& dataset, std::uint64_t seed) {
  if (dataset.grids.empty() || dataset.samples.empty())
    throw Error(ErrorKind::invalid_argument, "split_train_test: empty dataset");
  const GridSpec& spec = dataset.grids.front()->spec();
  const std::int64_t steps_per_year = spec.t_resolution == TimeResolution::monthly ? 12 : 365;
  if (spec.t_steps <= steps_per_year)
    throw Error(ErrorKind::domain,
                "dataset spans " + format_int(spec.t_steps) + " steps; splitting needs more than one year (" +
                    format_int(steps_per_year) + " steps)");
  const std::int64_t cutoff = spec.t_steps - steps_per_year;

  Dataset train, test;
  train.grids = dataset.grids;
  test.grids = dataset.grids;
  for (const Sample& s : dataset.samples)
    (s.t >= cutoff ? test : train).samples.push_back(s);

  Rng train_rng(derive_seed(seed, "shuffle-train"));
  Rng test_rng(derive_seed(seed, "shuffle-test"));
  train_rng.shuffle(train.samples);
  test_rng.shuffle(test.samples);
  return {std::move(train), std::move(test)};
}

}  // namespace gtwnn
