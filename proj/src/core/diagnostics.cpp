#include "core/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <string>

#include "core/common.hpp"
#include "core/rng.hpp"

namespace gtwnn {

namespace {

// Acklam's rational approximation of the inverse normal CDF.
double acklam_quantile(double p) {
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  static constexpr double plow = 0.02425;
  if (p < plow) {
    double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > 1.0 - plow) {
    double q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  double q = p - 0.5;
  double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * 3.141592653589793238462643383279502884);
}

// Standard biased autocorrelation: both numerator and denominator use 1/n.
std::vector<double> biased_autocorr(const std::vector<double>& series, std::int64_t max_lag) {
  std::int64_t n = static_cast<std::int64_t>(series.size());
  double mean = std::accumulate(series.begin(), series.end(), 0.0) / static_cast<double>(n);
  double denom = 0.0;
  for (double v : series) denom += (v - mean) * (v - mean);
  if (denom == 0.0) {
    throw Error(ErrorKind::domain, "autocorrelation of a constant series is undefined");
  }
  std::vector<double> rho(static_cast<std::size_t>(max_lag) + 1, 0.0);
  rho[0] = 1.0;
  for (std::int64_t k = 1; k <= max_lag; ++k) {
    double num = 0.0;
    for (std::int64_t i = 0; i + k < n; ++i) {
      num += (series[static_cast<std::size_t>(i)] - mean) *
             (series[static_cast<std::size_t>(i + k)] - mean);
    }
    rho[static_cast<std::size_t>(k)] = num / denom;
  }
  return rho;
}

void check_series_args(const std::vector<double>& series, std::int64_t max_lag, double alpha) {
  std::int64_t n = static_cast<std::int64_t>(series.size());
  if (n < 3) {
    throw Error(ErrorKind::invalid_argument,
                "correlation diagnostics need at least 3 observations, got " + format_int(n));
  }
  if (max_lag < 1 || max_lag >= n) {
    throw Error(ErrorKind::invalid_argument, "max_lag must be in [1, n-1], got " +
                                                 format_int(max_lag) + " for n=" + format_int(n));
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(ErrorKind::invalid_argument, "alpha must be in (0, 1)");
  }
}

// Durbin-Levinson recursion: returns phi(k,k) for k = 1..max_lag.
std::vector<double> durbin_levinson(const std::vector<double>& rho, std::int64_t max_lag) {
  std::vector<double> phi_prev(static_cast<std::size_t>(max_lag) + 1, 0.0);
  std::vector<double> phi_cur(static_cast<std::size_t>(max_lag) + 1, 0.0);
  std::vector<double> out(static_cast<std::size_t>(max_lag), 0.0);
  double v = 1.0;
  for (std::int64_t k = 1; k <= max_lag; ++k) {
    double num = rho[static_cast<std::size_t>(k)];
    for (std::int64_t j = 1; j < k; ++j) {
      num -= phi_prev[static_cast<std::size_t>(j)] * rho[static_cast<std::size_t>(k - j)];
    }
    double phikk = (v == 0.0) ? 0.0 : num / v;
    phi_cur[static_cast<std::size_t>(k)] = phikk;
    for (std::int64_t j = 1; j < k; ++j) {
      phi_cur[static_cast<std::size_t>(j)] =
          phi_prev[static_cast<std::size_t>(j)] - phikk * phi_prev[static_cast<std::size_t>(k - j)];
    }
    v *= (1.0 - phikk * phikk);
    out[static_cast<std::size_t>(k - 1)] = phikk;
    phi_prev = phi_cur;
  }
  return out;
}

// Pearson correlation of two equal-length series; returns 0 when either is
// constant (a flat neighbor carries no directional information).
double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  std::size_t n = a.size();
  double ma = std::accumulate(a.begin(), a.end(), 0.0) / static_cast<double>(n);
  double mb = std::accumulate(b.begin(), b.end(), 0.0) / static_cast<double>(n);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double da = a[i] - ma;
    double db = b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa == 0.0 || sbb == 0.0) return 0.0;
  return sab / std::sqrt(saa * sbb);
}

double frobenius(const Matrix& m) {
  double s = 0.0;
  for (double v : m.data) s += v * v;
  return std::sqrt(s);
}

}  // namespace

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw Error(ErrorKind::invalid_argument, "normal_quantile requires p in (0, 1)");
  }
  double x = acklam_quantile(p);
  // One Newton step against the exact CDF tightens the approximation to
  // near machine precision.
  double e = normal_cdf(x) - p;
  x -= e / normal_pdf(x);
  return x;
}

bool CorrelationCurve::significant_at(std::int64_t lag) const {
  for (std::size_t i = 0; i < lags.size(); ++i) {
    if (lags[i] == lag) return std::fabs(values[i]) > band[i];
  }
  throw Error(ErrorKind::invalid_argument, "lag " + format_int(lag) + " not in curve");
}

CorrelationCurve acf(const std::vector<double>& series, std::int64_t max_lag, double alpha) {
  check_series_args(series, max_lag, alpha);
  std::int64_t n = static_cast<std::int64_t>(series.size());
  double mean = std::accumulate(series.begin(), series.end(), 0.0) / static_cast<double>(n);
  double var_full = 0.0;
  for (double v : series) var_full += (v - mean) * (v - mean);
  var_full /= static_cast<double>(n);
  if (var_full == 0.0) {
    throw Error(ErrorKind::domain, "autocorrelation of a constant series is undefined");
  }

  CorrelationCurve curve;
  curve.n = n;
  curve.alpha = alpha;
  double z = normal_quantile(1.0 - alpha / 2.0);

  double cum_sq = 0.0;
  for (std::int64_t k = 0; k <= max_lag; ++k) {
    double value;
    if (k == 0) {
      value = 1.0;
    } else {
      double num = 0.0;
      double var_lagged = 0.0;
      std::int64_t m = n - k;
      for (std::int64_t i = 0; i < m; ++i) {
        num += (series[static_cast<std::size_t>(i)] - mean) *
               (series[static_cast<std::size_t>(i + k)] - mean);
      }
      for (std::int64_t i = k; i < n; ++i) {
        double d = series[static_cast<std::size_t>(i)] - mean;
        var_lagged += d * d;
      }
      num /= static_cast<double>(m);
      var_lagged /= static_cast<double>(m);
      double denom = std::sqrt(var_full * var_lagged);
      value = (denom == 0.0) ? 0.0 : num / denom;
      value = std::clamp(value, -1.0, 1.0);
    }
    // The band at lag k uses the correlations up to k-1 (the null is "no
    // correlation beyond what has been seen so far").
    double half_width = z * std::sqrt((1.0 + 2.0 * cum_sq) / static_cast<double>(n));
    curve.lags.push_back(k);
    curve.values.push_back(value);
    curve.band.push_back(k == 0 ? 0.0 : half_width);
    if (k > 0) cum_sq += value * value;
  }
  return curve;
}

CorrelationCurve pacf(const std::vector<double>& series, std::int64_t max_lag, double alpha) {
  check_series_args(series, max_lag, alpha);
  std::int64_t n = static_cast<std::int64_t>(series.size());
  std::vector<double> rho = biased_autocorr(series, max_lag);
  std::vector<double> phi = durbin_levinson(rho, max_lag);

  CorrelationCurve curve;
  curve.n = n;
  curve.alpha = alpha;
  double half_width = normal_quantile(1.0 - alpha / 2.0) / std::sqrt(static_cast<double>(n));
  for (std::int64_t k = 1; k <= max_lag; ++k) {
    curve.lags.push_back(k);
    curve.values.push_back(phi[static_cast<std::size_t>(k - 1)]);
    curve.band.push_back(half_width);
  }
  return curve;
}

CorrelationCurve spatial_pacf(const SpatioTemporalGrid& grid, Axis axis, SliceScope scope,
                              std::int64_t max_lag, double alpha, std::int64_t top_n) {
  const GridSpec& spec = grid.spec();
  std::int64_t n_slices = (axis == Axis::x) ? spec.rows : spec.cols;
  std::int64_t slice_len = (axis == Axis::x) ? spec.cols : spec.rows;
  if (top_n < 1) {
    throw Error(ErrorKind::invalid_argument, "top_n must be at least 1");
  }

  // Time-averaged count map; each slice of it is one spatial series.
  std::vector<std::vector<double>> slices(static_cast<std::size_t>(n_slices),
                                          std::vector<double>(static_cast<std::size_t>(slice_len)));
  std::vector<double> slice_totals(static_cast<std::size_t>(n_slices), 0.0);
  for (std::int64_t s = 0; s < n_slices; ++s) {
    for (std::int64_t i = 0; i < slice_len; ++i) {
      std::int64_t r = (axis == Axis::x) ? s : i;
      std::int64_t c = (axis == Axis::x) ? i : s;
      double sum = 0.0;
      for (std::int64_t t = 0; t < spec.t_steps; ++t) {
        sum += static_cast<double>(grid.count(t, r, c));
      }
      double avg = sum / static_cast<double>(spec.t_steps);
      slices[static_cast<std::size_t>(s)][static_cast<std::size_t>(i)] = avg;
      slice_totals[static_cast<std::size_t>(s)] += avg;
    }
  }

  std::vector<std::int64_t> selected(static_cast<std::size_t>(n_slices));
  std::iota(selected.begin(), selected.end(), 0);
  if (scope == SliceScope::top_slices && n_slices > top_n) {
    std::stable_sort(selected.begin(), selected.end(), [&](std::int64_t a, std::int64_t b) {
      return slice_totals[static_cast<std::size_t>(a)] > slice_totals[static_cast<std::size_t>(b)];
    });
    selected.resize(static_cast<std::size_t>(top_n));
    std::sort(selected.begin(), selected.end());
  }

  // Short axes cannot support the requested lag count; clamp to the
  // quarter-length rule so the recursion stays meaningful.
  std::int64_t lag_cap = std::max<std::int64_t>(1, (slice_len - 1) / 4);
  std::int64_t eff_lag = std::min(max_lag, lag_cap);
  if (slice_len < 3) {
    throw Error(ErrorKind::domain, "axis too short for spatial correlation: length " +
                                       format_int(slice_len));
  }

  std::vector<double> acc(static_cast<std::size_t>(eff_lag), 0.0);
  double weight_sum = 0.0;
  for (std::int64_t s : selected) {
    const std::vector<double>& slice = slices[static_cast<std::size_t>(s)];
    double w = slice_totals[static_cast<std::size_t>(s)];
    if (w <= 0.0) continue;
    bool constant = true;
    for (double v : slice) {
      if (v != slice.front()) {
        constant = false;
        break;
      }
    }
    if (constant) continue;
    std::vector<double> rho = biased_autocorr(slice, eff_lag);
    std::vector<double> phi = durbin_levinson(rho, eff_lag);
    for (std::int64_t k = 0; k < eff_lag; ++k) {
      acc[static_cast<std::size_t>(k)] += w * phi[static_cast<std::size_t>(k)];
    }
    weight_sum += w;
  }
  if (weight_sum == 0.0) {
    throw Error(ErrorKind::domain, "no usable slices for spatial correlation: map is constant");
  }

  CorrelationCurve curve;
  curve.n = slice_len;
  curve.alpha = alpha;
  double half_width =
      normal_quantile(1.0 - alpha / 2.0) / std::sqrt(static_cast<double>(slice_len));
  for (std::int64_t k = 1; k <= eff_lag; ++k) {
    curve.lags.push_back(k);
    curve.values.push_back(acc[static_cast<std::size_t>(k - 1)] / weight_sum);
    curve.band.push_back(half_width);
  }
  return curve;
}

IsotropyReport isotropy_test(const SpatioTemporalGrid& grid, std::int64_t window,
                             double sample_frac, std::uint64_t seed, double threshold) {
  const GridSpec& spec = grid.spec();
  if (window < 3 || window % 2 == 0) {
    throw Error(ErrorKind::invalid_argument, "isotropy window must be odd and at least 3");
  }
  if (!(sample_frac > 0.0 && sample_frac <= 1.0)) {
    throw Error(ErrorKind::invalid_argument, "sample_frac must be in (0, 1]");
  }
  std::int64_t half = window / 2;
  if (spec.rows < window || spec.cols < window) {
    throw Error(ErrorKind::domain, "grid too small for a " + format_int(window) + "x" +
                                       format_int(window) + " correlation window");
  }
  if (spec.t_steps < 3) {
    throw Error(ErrorKind::domain, "isotropy test needs at least 3 time steps");
  }

  // Interior cells have the full window available on all sides.
  std::vector<std::pair<std::int64_t, std::int64_t>> interior;
  for (std::int64_t r = half; r < spec.rows - half; ++r) {
    for (std::int64_t c = half; c < spec.cols - half; ++c) {
      interior.emplace_back(r, c);
    }
  }

  std::int64_t n_cells = static_cast<std::int64_t>(interior.size());
  std::int64_t k = std::max<std::int64_t>(
      1, static_cast<std::int64_t>(std::llround(sample_frac * static_cast<double>(n_cells))));
  k = std::min(k, n_cells);
  Rng rng(derive_seed(seed, "isotropy-sample"));
  rng.shuffle(interior);
  interior.resize(static_cast<std::size_t>(k));

  auto series_at = [&](std::int64_t r, std::int64_t c) {
    std::vector<double> s(static_cast<std::size_t>(spec.t_steps));
    for (std::int64_t t = 0; t < spec.t_steps; ++t) {
      s[static_cast<std::size_t>(t)] = static_cast<double>(grid.count(t, r, c));
    }
    return s;
  };

  Matrix agg(window, window);
  for (auto [r, c] : interior) {
    std::vector<double> center = series_at(r, c);
    for (std::int64_t dr = -half; dr <= half; ++dr) {
      for (std::int64_t dc = -half; dc <= half; ++dc) {
        double rho = pearson(center, series_at(r + dr, c + dc));
        agg.at(dr + half, dc + half) += rho;
      }
    }
  }

  double norm = frobenius(agg);
  if (norm == 0.0) {
    throw Error(ErrorKind::domain, "aggregated correlation grid is identically zero");
  }

  IsotropyReport report;
  report.aggregated_grid = agg;
  report.threshold = threshold;
  report.window = window;
  report.cells_sampled = k;
  double max_dev = 0.0;
  for (D4 t : d4_all()) {
    if (t == D4::identity) continue;
    Matrix transformed = d4_apply(t, agg);
    double diff = 0.0;
    for (std::size_t i = 0; i < agg.data.size(); ++i) {
      double d = agg.data[i] - transformed.data[i];
      diff += d * d;
    }
    double dev = std::sqrt(diff) / norm;
    report.symmetry_deviations.emplace_back(t, dev);
    max_dev = std::max(max_dev, dev);
  }
  report.isotropic = max_dev <= threshold;
  return report;
}

Prescription prescribe(const CorrelationCurve& temporal_pacf, const CorrelationCurve& spatial_x,
                       const CorrelationCurve& spatial_y, const CorrelationCurve& spatial_hd_x,
                       const CorrelationCurve& spatial_hd_y) {
  (void)spatial_x;
  (void)spatial_y;
  Prescription p;
  p.temporal_significant =
      temporal_pacf.significant_at(1) && temporal_pacf.significant_at(2);
  p.spatial_significant = spatial_hd_x.significant_at(1) && spatial_hd_y.significant_at(1);
  p.history_inappropriate = !temporal_pacf.significant_at(2);
  if (p.temporal_significant && p.spatial_significant) {
    p.recommended = Arch::hdgtwnn_ls;
  } else if (p.temporal_significant) {
    p.recommended = Arch::hdgtwnn;
  } else if (p.spatial_significant) {
    p.recommended = Arch::gtwnn_ls;
  } else {
    p.recommended = Arch::gtwnn;
  }
  return p;
}

DiagnosticsReport run_diagnostics(const SpatioTemporalGrid& grid,
                                  const DiagnosticsOptions& options) {
  const GridSpec& spec = grid.spec();
  std::vector<double> totals = grid.total_series();
  std::int64_t t_lag = std::min(options.temporal_max_lag, spec.t_steps - 1);
  if (t_lag < 2) {
    throw Error(ErrorKind::domain,
                "diagnostics need at least 3 time steps for a lag-2 temporal reading");
  }

  DiagnosticsReport report;
  report.acf_total = acf(totals, t_lag, options.alpha);
  report.pacf_total = pacf(totals, t_lag, options.alpha);
  report.spatial_x = spatial_pacf(grid, Axis::x, SliceScope::all, options.spatial_max_lag,
                                  options.alpha, options.top_slices);
  report.spatial_y = spatial_pacf(grid, Axis::y, SliceScope::all, options.spatial_max_lag,
                                  options.alpha, options.top_slices);
  report.spatial_hd_x = spatial_pacf(grid, Axis::x, SliceScope::top_slices,
                                     options.spatial_max_lag, options.alpha, options.top_slices);
  report.spatial_hd_y = spatial_pacf(grid, Axis::y, SliceScope::top_slices,
                                     options.spatial_max_lag, options.alpha, options.top_slices);
  report.isotropy = isotropy_test(grid, options.isotropy_window, options.isotropy_sample_frac,
                                  options.seed, options.isotropy_threshold);
  report.prescription = prescribe(report.pacf_total, report.spatial_x, report.spatial_y,
                                  report.spatial_hd_x, report.spatial_hd_y);
  return report;
}

}  // namespace gtwnn
