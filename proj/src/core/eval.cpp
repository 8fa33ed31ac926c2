#include "core/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "core/common.hpp"

namespace gtwnn {

Metrics compute_metrics(const std::vector<double>& actual, const std::vector<double>& predicted) {
  if (actual.size() != predicted.size()) {
    throw Error(ErrorKind::invalid_argument, "actual and predicted lengths differ: " +
                                                 format_int(static_cast<std::int64_t>(actual.size())) +
                                                 " vs " +
                                                 format_int(static_cast<std::int64_t>(predicted.size())));
  }
  if (actual.empty()) {
    throw Error(ErrorKind::invalid_argument, "metrics need at least one observation");
  }

  std::size_t n = actual.size();
  double sse = 0.0;
  double ape = 0.0;
  double mean = 0.0;
  for (double v : actual) mean += v;
  mean /= static_cast<double>(n);

  double sst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double err = actual[i] - predicted[i];
    sse += err * err;
    ape += std::fabs(err) / std::max(std::fabs(actual[i]), kMapeEpsilon);
    double dev = actual[i] - mean;
    sst += dev * dev;
  }

  Metrics m;
  m.n = static_cast<std::int64_t>(n);
  m.mse = sse / static_cast<double>(n);
  m.mape = ape / static_cast<double>(n);
  if (sst == 0.0) {
    m.r2_undefined = true;
    m.r2 = 0.0;
  } else {
    m.r2 = 1.0 - sse / sst;
  }
  return m;
}

Matrix time_averaged_map(const SpatioTemporalGrid& grid) {
  const GridSpec& spec = grid.spec();
  Matrix out(spec.rows, spec.cols);
  for (std::int64_t r = 0; r < spec.rows; ++r) {
    for (std::int64_t c = 0; c < spec.cols; ++c) {
      double sum = 0.0;
      for (std::int64_t t = 0; t < spec.t_steps; ++t) {
        sum += static_cast<double>(grid.count(t, r, c));
      }
      out.at(r, c) = sum / static_cast<double>(spec.t_steps);
    }
  }
  return out;
}

Matrix diff_map(const Matrix& actual, const Matrix& predicted) {
  if (!actual.same_shape(predicted)) {
    throw Error(ErrorKind::invalid_argument, "diff_map needs matrices of equal shape");
  }
  Matrix out(actual.rows, actual.cols);
  for (std::size_t i = 0; i < out.data.size(); ++i) {
    out.data[i] = actual.data[i] - predicted.data[i];
  }
  return out;
}

Matrix rescale_to_max(const Matrix& src, const Matrix& reference) {
  if (src.data.empty() || reference.data.empty()) {
    throw Error(ErrorKind::invalid_argument, "rescale_to_max needs non-empty matrices");
  }
  double max_src = *std::max_element(src.data.begin(), src.data.end());
  double max_ref = *std::max_element(reference.data.begin(), reference.data.end());
  if (max_src == 0.0) {
    throw Error(ErrorKind::domain, "cannot rescale a matrix whose maximum is zero");
  }
  double scale = max_ref / max_src;
  Matrix out(src.rows, src.cols);
  for (std::size_t i = 0; i < src.data.size(); ++i) {
    out.data[i] = (src.data[i] == max_src) ? max_ref : src.data[i] * scale;
  }
  return out;
}

EvalResult evaluate_model(const Model& model, const Dataset& dataset, bool oracle) {
  if (dataset.samples.empty()) {
    throw Error(ErrorKind::invalid_argument, "cannot evaluate on an empty dataset");
  }

  EvalResult result;
  result.actual.reserve(dataset.samples.size());
  result.predicted.reserve(dataset.samples.size());

  // Per-cell accumulators keyed on the first grid's shape; augmented
  // datasets mix shapes, so maps are only meaningful for single-grid
  // evaluation and fall back to the first grid's extent.
  const GridSpec& spec = dataset.grids.front()->spec();
  Matrix actual_sum(spec.rows, spec.cols);
  Matrix predicted_sum(spec.rows, spec.cols);
  Matrix cell_n(spec.rows, spec.cols);

  for (const Sample& s : dataset.samples) {
    double target = s.target;
    double pred = oracle ? target : predict(model, s);
    result.actual.push_back(target);
    result.predicted.push_back(pred);
    if (s.grid_index == 0 && s.r < spec.rows && s.c < spec.cols) {
      actual_sum.at(s.r, s.c) += target;
      predicted_sum.at(s.r, s.c) += pred;
      cell_n.at(s.r, s.c) += 1.0;
    }
  }

  result.metrics = compute_metrics(result.actual, result.predicted);

  Matrix actual_map(spec.rows, spec.cols);
  Matrix predicted_map(spec.rows, spec.cols);
  for (std::size_t i = 0; i < cell_n.data.size(); ++i) {
    if (cell_n.data[i] > 0.0) {
      actual_map.data[i] = actual_sum.data[i] / cell_n.data[i];
      predicted_map.data[i] = predicted_sum.data[i] / cell_n.data[i];
    }
  }
  result.actual_map = actual_map;
  result.predicted_map = predicted_map;
  result.diff = diff_map(actual_map, predicted_map);
  return result;
}

}  // namespace gtwnn
