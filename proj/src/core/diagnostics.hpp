#pragma once

#include <cstdint>
#include <vector>

#include "core/d4.hpp"
#include "core/grid.hpp"
#include "core/matrix.hpp"
#include "core/model.hpp"

namespace gtwnn {

// Inverse standard-normal CDF (quantile), accurate to ~1e-15 via a rational
// approximation polished with one Newton step.
double normal_quantile(double p);

// A correlation-by-lag curve with its per-lag significance half-width.
// ACF curves include lag 0 (always exactly 1); PACF curves start at lag 1.
struct CorrelationCurve {
  std::vector<std::int64_t> lags;
  std::vector<double> values;
  std::vector<double> band;
  std::int64_t n = 0;
  double alpha = 0.05;

  // Whether |value| at `lag` exceeds the band half-width.
  bool significant_at(std::int64_t lag) const;
};

// Sample autocorrelation: the lag-k products are averaged with 1/(n-k), the
// centered second moments with 1/n (full series) and 1/(n-k) (lagged
// window). The band half-width at lag k is
// z_{1-alpha/2} * sqrt((1/n)(1 + 2*sum_{i<=k} rho(i)^2)), the cumulative
// large-lag approximation.
CorrelationCurve acf(const std::vector<double>& series, std::int64_t max_lag, double alpha = 0.05);

// Partial autocorrelation via the Durbin-Levinson recursion with
// phi(1,1) = rho(1), run on the standard biased autocorrelation so the
// recursion stays inside [-1,1]. Band: +-z_{1-alpha/2}/sqrt(n) per lag.
CorrelationCurve pacf(const std::vector<double>& series, std::int64_t max_lag, double alpha = 0.05);

enum class Axis { x, y };
enum class SliceScope { all, top_slices };

// PACF along one spatial axis of the time-averaged count map: every slice
// (row for x, column for y) is a series; per-slice PACFs are combined as a
// count-weighted average. scope == top_slices keeps only the `top_n`
// highest-count slices. Constant slices are skipped; an all-constant map is
// an error.
CorrelationCurve spatial_pacf(const SpatioTemporalGrid& grid, Axis axis, SliceScope scope,
                              std::int64_t max_lag = 5, double alpha = 0.05,
                              std::int64_t top_n = 10);

struct IsotropyReport {
  Matrix aggregated_grid;                       // summed sampled correlation windows
  std::vector<std::pair<D4, double>> symmetry_deviations;
  bool isotropic = false;
  double threshold = 0.15;
  std::int64_t window = 7;
  std::int64_t cells_sampled = 0;
};

// Correlates every interior cell's time series against each neighbor in a
// window x window box, draws a seeded sample_frac subset of the per-cell
// correlation grids, sums them, and measures the relative L2 deviation of
// the aggregate under each D4 transform. Isotropic iff the largest
// deviation stays within `threshold`.
IsotropyReport isotropy_test(const SpatioTemporalGrid& grid, std::int64_t window = 7,
                             double sample_frac = 0.25, std::uint64_t seed = 0,
                             double threshold = 0.15);

struct Prescription {
  Arch recommended = Arch::gtwnn;
  bool temporal_significant = false;
  bool spatial_significant = false;
  // History-dependent models are inappropriate when the lag-2 temporal
  // PACF is insignificant: the second-most previous observation carries no
  // usable direct correlation.
  bool history_inappropriate = false;
};

// Architecture prescription from the diagnostics: temporal significance
// needs both lag-1 and lag-2 of the temporal PACF outside the band; spatial
// significance needs lag-1 outside the band on both high-density axes.
// both -> hdgtwnn_ls, temporal only -> hdgtwnn, spatial only -> gtwnn_ls,
// neither -> gtwnn.
Prescription prescribe(const CorrelationCurve& temporal_pacf, const CorrelationCurve& spatial_x,
                       const CorrelationCurve& spatial_y, const CorrelationCurve& spatial_hd_x,
                       const CorrelationCurve& spatial_hd_y);

struct DiagnosticsOptions {
  std::int64_t temporal_max_lag = 20;
  std::int64_t spatial_max_lag = 5;
  double alpha = 0.05;
  std::int64_t isotropy_window = 7;
  double isotropy_sample_frac = 0.25;
  double isotropy_threshold = 0.15;
  std::int64_t top_slices = 10;
  std::uint64_t seed = 0;
};

struct DiagnosticsReport {
  CorrelationCurve acf_total;
  CorrelationCurve pacf_total;
  CorrelationCurve spatial_x;
  CorrelationCurve spatial_y;
  CorrelationCurve spatial_hd_x;
  CorrelationCurve spatial_hd_y;
  IsotropyReport isotropy;
  Prescription prescription;
};

// The full diagnostic bundle over one grid: temporal ACF/PACF of the
// grid-total series, spatial PACFs (all slices and high-density slices) on
// both axes, the isotropy test, and the prescription.
DiagnosticsReport run_diagnostics(const SpatioTemporalGrid& grid, const DiagnosticsOptions& options);

}  // namespace gtwnn
