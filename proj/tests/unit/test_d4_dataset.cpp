#include "doctest.h"

#include <algorithm>
#include <cstdint>
#include <memory>
#include <set>
#include <vector>

#include "core/common.hpp"
#include "core/d4.hpp"
#include "core/dataset.hpp"
#include "core/grid.hpp"

using namespace gtwnn;

namespace {

Matrix make_matrix(std::int64_t rows, std::int64_t cols, std::vector<double> values) {
  Matrix m(rows, cols);
  m.data = std::move(values);
  return m;
}

bool same(const Matrix& a, const Matrix& b) {
  return a.rows == b.rows && a.cols == b.cols && a.data == b.data;
}

// 2x3 grid over 5 steps, categories "a"/"b"; cell (0, 2) never sees an event.
std::shared_ptr<SpatioTemporalGrid> sample_grid() {
  GridSpec spec;
  spec.rows = 2;
  spec.cols = 3;
  spec.t_steps = 5;
  spec.origin_e_km = 100.0;
  spec.origin_n_km = 200.0;
  spec.cell_w_km = 2.0;
  spec.cell_h_km = 1.9;
  spec.start_date = Date{2018, 1, 0};
  auto grid = std::make_shared<SpatioTemporalGrid>(spec, std::vector<std::string>{"a", "b"});
  for (std::int64_t t = 0; t < 5; ++t)
    for (std::int64_t r = 0; r < 2; ++r)
      for (std::int64_t c = 0; c < 3; ++c) {
        if (r == 0 && c == 2) continue;
        const std::int64_t v = 1 + t + 2 * r + 3 * c;
        grid->count(t, r, c) = v;
        grid->type_count(0, t, r, c) = v / 2;
        grid->type_count(1, t, r, c) = v - v / 2;
      }
  return grid;
}

}  // namespace

TEST_CASE("map transforms obey the dihedral group relations") {
  const Matrix m = make_matrix(2, 3, {1, 2, 3, 4, 5, 6});

  Matrix four_rots = m;
  for (int i = 0; i < 4; ++i) four_rots = d4_apply(D4::rot90, four_rots);
  CHECK(same(four_rots, m));

  CHECK(same(d4_apply(D4::mirror_diagonal, d4_apply(D4::mirror_diagonal, m)), m));
  CHECK(same(d4_apply(D4::mirror_vertical, d4_apply(D4::mirror_vertical, m)), m));
  CHECK(same(d4_apply(D4::rot180, d4_apply(D4::rot180, m)), m));
  CHECK(same(d4_apply(D4::rot90, d4_apply(D4::rot270, m)), m));
  // rot180 = rot90 twice.
  CHECK(same(d4_apply(D4::rot90, d4_apply(D4::rot90, m)), d4_apply(D4::rot180, m)));
}

TEST_CASE("map transforms produce the pinned orientations") {
  const Matrix m = make_matrix(2, 3, {1, 2, 3, 4, 5, 6});
  CHECK(same(d4_apply(D4::identity, m), m));
  CHECK(same(d4_apply(D4::rot90, m), make_matrix(3, 2, {3, 6, 2, 5, 1, 4})));
  CHECK(same(d4_apply(D4::rot180, m), make_matrix(2, 3, {6, 5, 4, 3, 2, 1})));
  CHECK(same(d4_apply(D4::rot270, m), make_matrix(3, 2, {4, 1, 5, 2, 6, 3})));
  CHECK(same(d4_apply(D4::mirror_vertical, m), make_matrix(2, 3, {4, 5, 6, 1, 2, 3})));
  CHECK(same(d4_apply(D4::mirror_horizontal, m), make_matrix(2, 3, {3, 2, 1, 6, 5, 4})));
  CHECK(same(d4_apply(D4::mirror_diagonal, m), make_matrix(3, 2, {1, 4, 2, 5, 3, 6})));
  CHECK(same(d4_apply(D4::mirror_offdiagonal, m), make_matrix(3, 2, {6, 3, 5, 2, 4, 1})));
}

TEST_CASE("the eight transforms of an asymmetric map are distinct") {
  const Matrix m = make_matrix(3, 3, {1, 2, 3, 4, 5, 6, 7, 8, 9});
  auto transforms = d4_transforms(m);
  std::set<std::vector<double>> seen;
  for (const Matrix& t : transforms) seen.insert(t.data);
  CHECK(seen.size() == 8);
  CHECK(same(transforms[0], m));
}

TEST_CASE("dataset rows carry lagged factors and cell centers") {
  Dataset dataset = build_dataset(sample_grid());
  REQUIRE(dataset.grids.size() == 1);
  CHECK(dataset.n_types() == 2);
  // 5 active cells (one never fires), steps 2..4.
  CHECK(dataset.size() == 15);

  for (const Sample& s : dataset.samples) {
    CHECK(s.t >= 2);
    CHECK_FALSE((s.r == 0 && s.c == 2));
    const SpatioTemporalGrid& grid = dataset.grid_of(s);
    CHECK(s.target == static_cast<double>(grid.count(s.t, s.r, s.c)));
    REQUIRE(s.ef_t.size() == 2);
    CHECK(s.ef_t[0] == static_cast<double>(grid.type_count(0, s.t - 1, s.r, s.c)));
    CHECK(s.ef_t[1] == static_cast<double>(grid.type_count(1, s.t - 1, s.r, s.c)));
    CHECK(s.ef_tm1[0] == static_cast<double>(grid.type_count(0, s.t - 2, s.r, s.c)));
    CHECK(s.e_km == grid.spec().center_e_km(s.c));
    CHECK(s.n_km == grid.spec().center_n_km(s.r));
    CHECK(s.input() == std::vector<double>{s.e_km, s.n_km, static_cast<double>(s.t)});
  }
}

TEST_CASE("dataset building needs at least three steps and a grid") {
  GridSpec spec;
  spec.rows = 1;
  spec.cols = 1;
  spec.t_steps = 2;
  spec.cell_w_km = 1.0;
  spec.cell_h_km = 1.0;
  auto grid = std::make_shared<SpatioTemporalGrid>(spec, std::vector<std::string>{"a"});
  CHECK_THROWS_AS(build_dataset(grid), Error);
  CHECK_THROWS_AS(build_dataset(nullptr), Error);
}

TEST_CASE("augmentation yields exactly eight tied copies") {
  auto grid = sample_grid();
  Dataset plain = build_dataset(grid);
  Dataset augmented = d4_augment_dataset(grid);

  REQUIRE(augmented.grids.size() == 8);
  CHECK(augmented.size() == 8 * plain.size());
  CHECK(augmented.grids[0].get() == grid.get());

  // Every transformed grid preserves events, categories, and consistency.
  for (const auto& g : augmented.grids) {
    CHECK(g->total_events() == grid->total_events());
    CHECK(g->type_labels() == grid->type_labels());
    CHECK_NOTHROW(g->validate_consistency());
  }

  // Axis-swapping transforms swap the grid shape and the cell sides.
  const GridSpec& rotated = augmented.grids[1]->spec();  // rot90
  CHECK(rotated.rows == 3);
  CHECK(rotated.cols == 2);
  CHECK(rotated.cell_w_km == 1.9);
  CHECK(rotated.cell_h_km == 2.0);

  // Per grid copy: same multiset of targets, same exclusion of idle cells.
  for (std::int32_t g = 0; g < 8; ++g) {
    std::vector<double> targets;
    for (const Sample& s : augmented.samples)
      if (s.grid_index == g) targets.push_back(s.target);
    std::sort(targets.begin(), targets.end());
    std::vector<double> base;
    for (const Sample& s : plain.samples) base.push_back(s.target);
    std::sort(base.begin(), base.end());
    CHECK(targets == base);
  }
}

TEST_CASE("train test split cuts at the final year") {
  GridSpec spec;
  spec.rows = 1;
  spec.cols = 2;
  spec.t_steps = 36;
  spec.cell_w_km = 1.0;
  spec.cell_h_km = 1.0;
  spec.start_date = Date{2015, 1, 0};
  auto grid = std::make_shared<SpatioTemporalGrid>(spec, std::vector<std::string>{"a"});
  for (std::int64_t t = 0; t < 36; ++t)
    for (std::int64_t c = 0; c < 2; ++c) {
      grid->count(t, 0, c) = 1 + t;
      grid->type_count(0, t, 0, c) = 1 + t;
    }

  Dataset dataset = build_dataset(grid);
  auto [train, test] = split_train_test(dataset, 7);

  // Cutoff at t = 24: train covers t in [2, 23], test covers [24, 35].
  CHECK(train.size() == 22 * 2);
  CHECK(test.size() == 12 * 2);
  for (const Sample& s : train.samples) CHECK(s.t < 24);
  for (const Sample& s : test.samples) CHECK(s.t >= 24);

  // The split is deterministic in the seed, including shuffle order.
  auto [train2, test2] = split_train_test(dataset, 7);
  REQUIRE(train2.size() == train.size());
  bool same_order = true;
  for (std::int64_t i = 0; i < train.size(); ++i) {
    const Sample& a = train.samples[static_cast<std::size_t>(i)];
    const Sample& b = train2.samples[static_cast<std::size_t>(i)];
    if (a.t != b.t || a.r != b.r || a.c != b.c) same_order = false;
  }
  CHECK(same_order);

  auto [train3, test3] = split_train_test(dataset, 8);
  bool different_somewhere = false;
  for (std::int64_t i = 0; i < train.size(); ++i) {
    const Sample& a = train.samples[static_cast<std::size_t>(i)];
    const Sample& b = train3.samples[static_cast<std::size_t>(i)];
    if (a.t != b.t || a.r != b.r || a.c != b.c) different_somewhere = true;
  }
  CHECK(different_somewhere);
}

TEST_CASE("splitting a single-year span is refused") {
  GridSpec spec;
  spec.rows = 1;
  spec.cols = 1;
  spec.t_steps = 12;
  spec.cell_w_km = 1.0;
  spec.cell_h_km = 1.0;
  spec.start_date = Date{2015, 1, 0};
  auto grid = std::make_shared<SpatioTemporalGrid>(spec, std::vector<std::string>{"a"});
  for (std::int64_t t = 0; t < 12; ++t) {
    grid->count(t, 0, 0) = 1;
    grid->type_count(0, t, 0, 0) = 1;
  }
  Dataset dataset = build_dataset(grid);
  CHECK_THROWS_AS(split_train_test(dataset, 1), Error);
}
