#include "doctest.h"

#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <set>
#include <utility>
#include <vector>

#include "core/common.hpp"
#include "core/dataset.hpp"
#include "core/grid.hpp"
#include "core/nas.hpp"
#include "core/rng.hpp"

using namespace gtwnn;

namespace {

std::vector<std::int64_t> key_of(const ArchitectureSpec& spec) {
  std::vector<std::int64_t> key{spec.hidden_layers};
  key.insert(key.end(), spec.neurons.begin(), spec.neurons.end());
  return key;
}

// Separable quadratic with a unique argmin at depth 3, width 7.
ObjectiveValue quadratic(const ArchitectureSpec& spec, std::uint64_t) {
  const double l = static_cast<double>(spec.hidden_layers);
  const double n = static_cast<double>(spec.neurons.front());
  ObjectiveValue value;
  value.objective = (l - 3.0) * (l - 3.0) + 0.25 * (n - 7.0) * (n - 7.0) + 0.5;
  value.mape = 0.0;
  value.r2 = 0.0;
  return value;
}

std::shared_ptr<SpatioTemporalGrid> search_grid() {
  GridSpec spec;
  spec.rows = 3;
  spec.cols = 3;
  spec.t_steps = 26;
  spec.cell_w_km = 1.0;
  spec.cell_h_km = 1.0;
  spec.start_date = Date{2019, 1, 0};
  auto grid = std::make_shared<SpatioTemporalGrid>(spec, std::vector<std::string>{"a"});
  for (std::int64_t t = 0; t < spec.t_steps; ++t)
    for (std::int64_t r = 0; r < 3; ++r)
      for (std::int64_t c = 0; c < 3; ++c) {
        const std::int64_t v = 1 + r + c;
        grid->count(t, r, c) = v;
        grid->type_count(0, t, r, c) = v;
      }
  return grid;
}

}  // namespace

TEST_CASE("minimum trial counts follow the coverage identity") {
  CHECK(min_trials_for_top_fraction(0.5, 0.5) == 1);
  CHECK(min_trials_for_top_fraction(0.05, 0.95) == 59);
  CHECK(min_trials_for_top_fraction(0.05, 0.99) == 90);

  // The returned n is minimal: n satisfies the coverage bound, n-1 does not.
  for (auto [p, conf] : {std::pair{0.1, 0.9}, std::pair{0.02, 0.95}, std::pair{0.3, 0.99}}) {
    const std::int64_t n = min_trials_for_top_fraction(p, conf);
    CHECK(1.0 - std::pow(1.0 - p, static_cast<double>(n)) >= conf);
    if (n > 1)
      CHECK(1.0 - std::pow(1.0 - p, static_cast<double>(n - 1)) < conf);
  }

  CHECK_THROWS_AS(min_trials_for_top_fraction(0.0, 0.9), Error);
  CHECK_THROWS_AS(min_trials_for_top_fraction(1.5, 0.9), Error);
  CHECK_THROWS_AS(min_trials_for_top_fraction(0.1, 0.0), Error);
  CHECK_THROWS_AS(min_trials_for_top_fraction(0.1, 1.0), Error);
}

TEST_CASE("search spaces validate and count configurations") {
  SearchSpace space;
  space.layers_min = 1;
  space.layers_max = 3;
  space.neurons_min = 1;
  space.neurons_max = 4;

  space.per_layer_neurons = false;
  CHECK(space.size() == 12);  // 3 depths x 4 widths

  space.per_layer_neurons = true;
  CHECK(space.size() == 4 + 16 + 64);

  SearchSpace bad = space;
  bad.layers_min = 0;
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = space;
  bad.layers_max = 0;
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = space;
  bad.neurons_min = 5;  // exceeds neurons_max
  CHECK_THROWS_AS(bad.validate(), Error);

  CHECK(default_space(Arch::vanilla).layers_max == 5);
  CHECK(default_space(Arch::hdgtwnn).layers_max == 3);
  CHECK(default_space(Arch::gtwnn_ls).neurons_max == 15);
}

TEST_CASE("the searcher finds the quadratic optimum and never repeats a config") {
  SearchSpace space;
  space.layers_min = 1;
  space.layers_max = 5;
  space.neurons_min = 1;
  space.neurons_max = 15;
  space.per_layer_neurons = false;

  SearchLog log = bayes_search(Arch::vanilla, 1, space, quadratic, 50, 31);
  CHECK(log.trials.size() == 50);

  std::set<std::vector<std::int64_t>> seen;
  for (const TrialResult& trial : log.trials) {
    CHECK(seen.insert(key_of(trial.config)).second);  // no duplicates
    CHECK(trial.objective >= 0.5);
    CHECK(std::isfinite(trial.objective));
    CHECK(trial.config.hidden_layers >= 1);
    CHECK(trial.config.hidden_layers <= 5);
    for (std::int64_t width : trial.config.neurons) {
      CHECK(width >= 1);
      CHECK(width <= 15);
    }
    // Shared-width space: every layer carries the same neuron count.
    for (std::int64_t width : trial.config.neurons) CHECK(width == trial.config.neurons.front());
  }

  const TrialResult& best = log.trials[log.best_index];
  CHECK(best.config.hidden_layers == 3);
  CHECK(best.config.neurons.front() == 7);
  CHECK(best.objective == doctest::Approx(0.5));

  // best_index tracks the running minimum.
  for (const TrialResult& trial : log.trials) CHECK(trial.objective >= best.objective);
}

TEST_CASE("a budget covering the space falls back to exhaustive evaluation") {
  SearchSpace space;
  space.layers_min = 1;
  space.layers_max = 2;
  space.neurons_min = 1;
  space.neurons_max = 3;
  space.per_layer_neurons = false;  // 6 configs

  SearchLog log = bayes_search(Arch::vanilla, 1, space, quadratic, 10, 5);
  CHECK(log.trials.size() == 6);
  std::set<std::vector<std::int64_t>> seen;
  for (const TrialResult& trial : log.trials) seen.insert(key_of(trial.config));
  CHECK(seen.size() == 6);
  CHECK(log.trials[log.best_index].config.hidden_layers == 2);
  CHECK(log.trials[log.best_index].config.neurons.front() == 3);
}

TEST_CASE("per-layer spaces explore independent widths") {
  SearchSpace space;
  space.layers_min = 2;
  space.layers_max = 2;
  space.neurons_min = 1;
  space.neurons_max = 3;
  space.per_layer_neurons = true;  // 9 configs of shape (2: w1, w2)

  // Prefer small first layers, large second ones.
  auto objective = [](const ArchitectureSpec& spec, std::uint64_t) {
    ObjectiveValue v;
    v.objective = static_cast<double>(spec.neurons[0]) * 10.0 -
                  static_cast<double>(spec.neurons[1]) + 20.0;
    return v;
  };
  SearchLog log = bayes_search(Arch::vanilla, 1, space, objective, 9, 77);
  CHECK(log.trials.size() == 9);
  CHECK(log.trials[log.best_index].config.neurons == std::vector<std::int64_t>{1, 3});

  bool independent_widths = false;
  for (const TrialResult& trial : log.trials)
    if (trial.config.neurons[0] != trial.config.neurons[1]) independent_widths = true;
  CHECK(independent_widths);
}

TEST_CASE("search runs are deterministic in the seed") {
  SearchSpace space;
  space.layers_min = 1;
  space.layers_max = 3;
  space.neurons_min = 1;
  space.neurons_max = 8;
  space.per_layer_neurons = false;

  SearchLog a = bayes_search(Arch::gtwnn, 1, space, quadratic, 12, 9);
  SearchLog b = bayes_search(Arch::gtwnn, 1, space, quadratic, 12, 9);
  REQUIRE(a.trials.size() == b.trials.size());
  for (std::size_t i = 0; i < a.trials.size(); ++i) {
    CHECK(key_of(a.trials[i].config) == key_of(b.trials[i].config));
    CHECK(a.trials[i].seed == b.trials[i].seed);
    CHECK(a.trials[i].objective == b.trials[i].objective);
  }

  SearchLog c = bayes_search(Arch::gtwnn, 1, space, quadratic, 12, 10);
  bool same_path = true;
  for (std::size_t i = 0; i < a.trials.size(); ++i)
    if (key_of(a.trials[i].config) != key_of(c.trials[i].config)) same_path = false;
  CHECK_FALSE(same_path);
}

TEST_CASE("trial seeds derive from the search seed stream") {
  SearchSpace space;
  space.layers_min = 1;
  space.layers_max = 2;
  space.neurons_min = 1;
  space.neurons_max = 2;
  space.per_layer_neurons = false;

  SearchLog log = bayes_search(Arch::vanilla, 1, space, quadratic, 4, 42);
  REQUIRE(log.trials.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(log.trials[i].seed == derive_seed(42, "trial-" + format_int(static_cast<std::int64_t>(i))));
  }
}

TEST_CASE("search rejects bad budgets spaces and objectives") {
  SearchSpace space;
  space.per_layer_neurons = false;

  CHECK_THROWS_AS(bayes_search(Arch::vanilla, 1, space, quadratic, 1, 0), Error);

  // The depth range must respect the architecture family: gtwnn caps at 3.
  SearchSpace deep;
  deep.layers_min = 1;
  deep.layers_max = 5;
  CHECK_THROWS_AS(bayes_search(Arch::gtwnn, 1, deep, quadratic, 5, 0), Error);

  // Non-finite or negative objectives are structural failures, not scores.
  auto nan_objective = [](const ArchitectureSpec&, std::uint64_t) {
    ObjectiveValue v;
    v.objective = std::numeric_limits<double>::quiet_NaN();
    return v;
  };
  SearchSpace tiny;
  tiny.layers_min = 1;
  tiny.layers_max = 1;
  tiny.neurons_min = 1;
  tiny.neurons_max = 4;
  tiny.per_layer_neurons = false;
  CHECK_THROWS_AS(bayes_search(Arch::vanilla, 1, tiny, nan_objective, 3, 0), Error);

  auto negative_objective = [](const ArchitectureSpec&, std::uint64_t) {
    ObjectiveValue v;
    v.objective = -1.0;
    return v;
  };
  CHECK_THROWS_AS(bayes_search(Arch::vanilla, 1, tiny, negative_objective, 3, 0), Error);
}

TEST_CASE("the surrogate searcher beats random search on the quadratic") {
  SearchSpace space;
  space.layers_min = 1;
  space.layers_max = 5;
  space.neurons_min = 1;
  space.neurons_max = 15;
  space.per_layer_neurons = false;  // 75 configs

  const std::int64_t budget = 25;
  std::int64_t searcher_hits = 0;
  std::int64_t random_hits = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    SearchLog log = bayes_search(Arch::vanilla, 1, space, quadratic, budget, seed);
    if (log.trials[log.best_index].objective == doctest::Approx(0.5)) ++searcher_hits;

    // Random baseline: `budget` distinct configs drawn uniformly.
    Rng rng(seed);
    std::vector<std::pair<std::int64_t, std::int64_t>> all;
    for (std::int64_t l = 1; l <= 5; ++l)
      for (std::int64_t n = 1; n <= 15; ++n) all.emplace_back(l, n);
    rng.shuffle(all);
    bool found = false;
    for (std::int64_t i = 0; i < budget; ++i)
      if (all[static_cast<std::size_t>(i)] == std::pair<std::int64_t, std::int64_t>{3, 7})
        found = true;
    if (found) ++random_hits;
  }
  // Random search covers 25/75 = a third of the space, so ~3/10 hits;
  // the guided search should find the basin nearly always.
  CHECK(searcher_hits >= 8);
  CHECK(searcher_hits > random_hits);
}

TEST_CASE("stratified search reports one row per depth") {
  auto grid = search_grid();
  Dataset dataset = build_dataset(grid);
  auto [train, test] = split_train_test(dataset, 3);

  SearchSpace space;
  space.layers_min = 1;
  space.layers_max = 3;
  space.neurons_min = 1;
  space.neurons_max = 4;
  space.per_layer_neurons = false;

  TrainConfig base;
  base.epochs = 1;
  base.batch_size = 16;
  base.seed = 3;

  SearchReport report = run_architecture_search(Arch::vanilla, train, test, space, 9, base);
  CHECK(report.kind == Arch::vanilla);
  REQUIRE(report.rows.size() == 3);
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    CHECK(report.rows[i].depth == static_cast<std::int64_t>(i + 1));
    CHECK(report.rows[i].best.config.hidden_layers == report.rows[i].depth);
    CHECK(std::isfinite(report.rows[i].best.objective));
    CHECK(report.rows[i].best.wall_time_s >= 0.0);
  }
  REQUIRE(report.best_row < report.rows.size());
  for (const DepthRow& row : report.rows)
    CHECK(row.best.objective >= report.rows[report.best_row].best.objective);

  // Every stratum got at least its floor of two trials.
  std::int64_t per_depth[4] = {0, 0, 0, 0};
  for (const TrialResult& trial : report.trials) per_depth[trial.config.hidden_layers] += 1;
  for (int d = 1; d <= 3; ++d) CHECK(per_depth[d] >= 2);
}
