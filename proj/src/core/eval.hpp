#pragma once

#include <cstdint>
#include <vector>

#include "core/dataset.hpp"
#include "core/grid.hpp"
#include "core/matrix.hpp"
#include "core/model.hpp"

namespace gtwnn {

struct Metrics {
  double mse = 0.0;
  double mape = 0.0;
  double r2 = 0.0;
  // r-squared compares against the evaluation-set mean; when the actuals
  // have zero variance that baseline is degenerate and r2 is undefined.
  bool r2_undefined = false;
  std::int64_t n = 0;
};

// MAPE guards division by zero with a small epsilon so zero-count cells do
// not blow up the metric.
inline constexpr double kMapeEpsilon = 1e-7;

Metrics compute_metrics(const std::vector<double>& actual, const std::vector<double>& predicted);

// Mean of the total count over time, per cell.
Matrix time_averaged_map(const SpatioTemporalGrid& grid);

// Element-wise actual - predicted.
Matrix diff_map(const Matrix& actual, const Matrix& predicted);

// Linearly rescales `src` so its maximum equals `reference`'s maximum.
// Entries that attain the source maximum are assigned the reference
// maximum exactly rather than through the multiplication.
Matrix rescale_to_max(const Matrix& src, const Matrix& reference);

struct EvalResult {
  Metrics metrics;
  Matrix actual_map;     // time-averaged actual counts over evaluated steps
  Matrix predicted_map;  // time-averaged model predictions over evaluated steps
  Matrix diff;           // actual_map - predicted_map
  std::vector<double> actual;
  std::vector<double> predicted;
};

// Runs the model over every sample of the dataset and aggregates metrics
// plus per-cell time-averaged maps. With `oracle` set, predictions are
// replaced by the true targets — a test hook that must yield r2 == 1.
EvalResult evaluate_model(const Model& model, const Dataset& dataset, bool oracle = false);

}  // namespace gtwnn
