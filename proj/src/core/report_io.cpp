#include "core/report_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>

#include "core/common.hpp"

namespace gtwnn {

namespace {

std::ofstream open_out(const std::string& path, bool binary) {
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) {
    throw Error(ErrorKind::io, "cannot open '" + path + "' for writing");
  }
  return out;
}

void finish(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) {
    throw Error(ErrorKind::io, "write to '" + path + "' failed");
  }
}

std::string join_neurons(const std::vector<std::int64_t>& neurons) {
  std::string s;
  for (std::size_t i = 0; i < neurons.size(); ++i) {
    if (i) s += ';';
    s += format_int(neurons[i]);
  }
  return s;
}

void write_ppm(const std::string& path, const Matrix& m,
               unsigned char (*channel)(double, double, double, int)) {
  double lo = *std::min_element(m.data.begin(), m.data.end());
  double hi = *std::max_element(m.data.begin(), m.data.end());
  std::ofstream out = open_out(path, true);
  out << "P6\n" << m.cols << " " << m.rows << "\n255\n";
  // North-up: the last grid row (highest northing) is written first.
  for (std::int64_t r = m.rows - 1; r >= 0; --r) {
    for (std::int64_t c = 0; c < m.cols; ++c) {
      double v = m.at(r, c);
      unsigned char px[3] = {channel(v, lo, hi, 0), channel(v, lo, hi, 1), channel(v, lo, hi, 2)};
      out.write(reinterpret_cast<const char*>(px), 3);
    }
  }
  finish(out, path);
}

unsigned char gray_channel(double v, double lo, double hi, int) {
  if (hi == lo) return 128;
  double t = (v - lo) / (hi - lo);
  return static_cast<unsigned char>(std::lround(std::clamp(t, 0.0, 1.0) * 255.0));
}

unsigned char diverging_channel(double v, double lo, double hi, int ch) {
  double scale = std::max(std::fabs(lo), std::fabs(hi));
  if (scale == 0.0) return 255;
  double t = std::clamp(v / scale, -1.0, 1.0);
  double fade = 1.0 - std::fabs(t);
  double value;
  if (t >= 0.0) {
    value = (ch == 0) ? 1.0 : fade;  // white to red
  } else {
    value = (ch == 2) ? 1.0 : fade;  // white to blue
  }
  return static_cast<unsigned char>(std::lround(value * 255.0));
}

}  // namespace

void write_curve_csv(const std::string& path, const CorrelationCurve& curve) {
  std::ofstream out = open_out(path, false);
  out << "lag,value,band\n";
  for (std::size_t i = 0; i < curve.lags.size(); ++i) {
    out << format_int(curve.lags[i]) << "," << format_double(curve.values[i]) << ","
        << format_double(curve.band[i]) << "\n";
  }
  finish(out, path);
}

void write_trial_log_csv(const std::string& path, const std::vector<TrialResult>& trials) {
  std::ofstream out = open_out(path, false);
  out << "arch,hidden_layers,neurons,objective,mape,r2,seed,wall_time_s\n";
  for (const TrialResult& t : trials) {
    out << to_string(t.config.kind) << "," << format_int(t.config.hidden_layers) << ","
        << join_neurons(t.config.neurons) << "," << format_double(t.objective) << ","
        << format_double(t.mape) << "," << format_double(t.r2) << ","
        << format_int(static_cast<std::int64_t>(t.seed)) << "," << format_double(t.wall_time_s)
        << "\n";
  }
  finish(out, path);
}

void write_search_report_csv(const std::string& path, const SearchReport& report) {
  std::ofstream out = open_out(path, false);
  out << "depth,arch,neurons,mse,mape,r2\n";
  for (const DepthRow& row : report.rows) {
    out << format_int(row.depth) << "," << to_string(row.best.config.kind) << ","
        << join_neurons(row.best.config.neurons) << "," << format_double(row.best.objective)
        << "," << format_double(row.best.mape) << "," << format_double(row.best.r2) << "\n";
  }
  finish(out, path);
}

void write_eval_report_csv(const std::string& path, const Metrics& metrics) {
  std::ofstream out = open_out(path, false);
  out << "metric,value\n";
  out << "mse," << format_double(metrics.mse) << "\n";
  out << "mape," << format_double(metrics.mape) << "\n";
  out << "r2," << (metrics.r2_undefined ? std::string("undefined") : format_double(metrics.r2))
      << "\n";
  out << "n," << format_int(metrics.n) << "\n";
  finish(out, path);
}

void write_matrix_csv(const std::string& path, const Matrix& m) {
  std::ofstream out = open_out(path, false);
  for (std::int64_t r = 0; r < m.rows; ++r) {
    for (std::int64_t c = 0; c < m.cols; ++c) {
      if (c) out << ",";
      out << format_double(m.at(r, c));
    }
    out << "\n";
  }
  finish(out, path);
}

void write_matrix_ppm_gray(const std::string& path, const Matrix& m) {
  write_ppm(path, m, gray_channel);
}

void write_matrix_ppm_diverging(const std::string& path, const Matrix& m) {
  write_ppm(path, m, diverging_channel);
}

void write_isotropy_csv(const std::string& path, const IsotropyReport& report) {
  std::ofstream out = open_out(path, false);
  out << "transform,deviation\n";
  for (const auto& [t, dev] : report.symmetry_deviations) {
    out << to_string(t) << "," << format_double(dev) << "\n";
  }
  out << "threshold," << format_double(report.threshold) << "\n";
  out << "isotropic," << (report.isotropic ? "true" : "false") << "\n";
  finish(out, path);
}

void write_prescription(const std::string& path, const Prescription& p) {
  std::ofstream out = open_out(path, false);
  out << "recommended=" << to_string(p.recommended) << "\n";
  out << "temporal_significant=" << (p.temporal_significant ? "true" : "false") << "\n";
  out << "spatial_significant=" << (p.spatial_significant ? "true" : "false") << "\n";
  out << "history_inappropriate=" << (p.history_inappropriate ? "true" : "false") << "\n";
  finish(out, path);
}

void write_loss_curve_csv(const std::string& path, const std::vector<double>& epoch_losses) {
  std::ofstream out = open_out(path, false);
  out << "epoch,loss\n";
  for (std::size_t i = 0; i < epoch_losses.size(); ++i) {
    out << format_int(static_cast<std::int64_t>(i + 1)) << "," << format_double(epoch_losses[i])
        << "\n";
  }
  finish(out, path);
}

}  // namespace gtwnn
