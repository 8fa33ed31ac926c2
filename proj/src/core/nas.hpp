#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "core/dataset.hpp"
#include "core/loss.hpp"
#include "core/model.hpp"
#include "core/train.hpp"

namespace gtwnn {

// Discrete search space over (hidden layers per block, neurons per layer).
// per_layer_neurons lets every hidden layer pick its width independently;
// otherwise one width is shared by all layers.
struct SearchSpace {
  std::int64_t layers_min = 1;
  std::int64_t layers_max = 5;
  std::int64_t neurons_min = 1;
  std::int64_t neurons_max = 15;
  bool per_layer_neurons = true;

  void validate() const;
  // Number of distinct configurations, saturated at a large cap so huge
  // per-layer spaces do not overflow.
  std::int64_t size() const;
};

// The conventional space per architecture family: directly-wired models
// search depths [1,5]; models with intermediate factor inputs search [1,3].
// Neuron widths are [1,15] either way.
SearchSpace default_space(Arch kind);

struct ObjectiveValue {
  double objective = 0.0;  // validation MSE
  double mape = 0.0;
  double r2 = 0.0;
};

struct TrialResult {
  ArchitectureSpec config;
  double objective = 0.0;
  double mape = 0.0;
  double r2 = 0.0;
  std::uint64_t seed = 0;
  double wall_time_s = 0.0;
};

using ObjectiveFn = std::function<ObjectiveValue(const ArchitectureSpec&, std::uint64_t seed)>;

struct SearchLog {
  std::vector<TrialResult> trials;  // submission order
  std::size_t best_index = 0;
};

// Smallest n such that 1 - (1-p)^n reaches `confidence`: the number of
// independent uniform draws needed so that at least one lands in the top
// p-fraction of the space with the given confidence.
std::int64_t min_trials_for_top_fraction(double p, double confidence);

// Bayesian optimization over the discrete space: an initial design of
// min(8, budget) seeded random configs, then a Gaussian-process surrogate
// (squared-exponential kernel over normalized coordinates) with
// expected-improvement acquisition. No config is evaluated twice; a budget
// at or above the space size degrades to exhaustive evaluation.
SearchLog bayes_search(Arch kind, std::int64_t n_types, const SearchSpace& space,
                       const ObjectiveFn& objective, std::int64_t budget, std::uint64_t seed);

struct DepthRow {
  std::int64_t depth = 0;
  TrialResult best;
};

struct SearchReport {
  Arch kind = Arch::vanilla;
  std::vector<DepthRow> rows;       // one per hidden-layer depth
  std::vector<TrialResult> trials;  // all trials across strata, in order
  std::size_t best_row = 0;         // index of the row with the lowest objective
};

// Architecture search stratified by hidden-layer depth: each depth gets its
// own bayes_search stratum (budget split evenly, at least 2 trials each)
// so the report carries one best row per depth. The objective trains a
// model on `train` and scores MSE on `test`.
SearchReport run_architecture_search(Arch kind, const Dataset& train, const Dataset& test,
                                     const SearchSpace& space, std::int64_t budget,
                                     const TrainConfig& base, const LossSpec& loss = {});

}  // namespace gtwnn
