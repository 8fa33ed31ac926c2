#include "core/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "core/common.hpp"
#include "core/date.hpp"
#include "core/rng.hpp"

namespace gtwnn {

namespace {

constexpr std::int64_t kBurnIn = 50;

void validate_params(const SynthParams& p) {
  if (p.rows < 1 || p.cols < 1 || p.t_steps < 1) {
    throw Error(ErrorKind::invalid_argument, "synth dimensions must be positive");
  }
  if (!(p.base_rate > 0.0)) {
    throw Error(ErrorKind::invalid_argument, "base_rate must be positive");
  }
  if (p.temporal_coeffs.size() > 2) {
    throw Error(ErrorKind::invalid_argument, "at most 2 AR coefficients are supported");
  }
  if (p.temporal_coeffs.size() == 1) {
    if (std::fabs(p.temporal_coeffs[0]) >= 1.0) {
      throw Error(ErrorKind::domain, "AR(1) coefficient outside the stationarity region");
    }
  } else if (p.temporal_coeffs.size() == 2) {
    double a1 = p.temporal_coeffs[0];
    double a2 = p.temporal_coeffs[1];
    if (!(a1 + a2 < 1.0 && a2 - a1 < 1.0 && std::fabs(a2) < 1.0)) {
      throw Error(ErrorKind::domain, "AR(2) coefficients outside the stationarity region");
    }
  }
  std::int64_t rr = p.effective_radius_rows();
  std::int64_t rc = p.effective_radius_cols();
  if (rr < 0 || rc < 0) {
    throw Error(ErrorKind::invalid_argument, "kernel radii must be non-negative");
  }
  if (2 * rr + 1 > p.rows || 2 * rc + 1 > p.cols) {
    throw Error(ErrorKind::invalid_argument,
                "kernel diameter exceeds the grid; shrink the radius or enlarge the grid");
  }
}

// Toroidal box average along one axis of a row-major rows x cols field.
void smooth_axis(std::vector<double>& field, std::int64_t rows, std::int64_t cols,
                 std::int64_t radius, bool along_rows) {
  if (radius == 0) return;
  std::vector<double> out(field.size());
  double inv = 1.0 / static_cast<double>(2 * radius + 1);
  for (std::int64_t r = 0; r < rows; ++r) {
    for (std::int64_t c = 0; c < cols; ++c) {
      double sum = 0.0;
      for (std::int64_t d = -radius; d <= radius; ++d) {
        std::int64_t rr = r;
        std::int64_t cc = c;
        if (along_rows) {
          rr = ((r + d) % rows + rows) % rows;
        } else {
          cc = ((c + d) % cols + cols) % cols;
        }
        sum += field[static_cast<std::size_t>(rr * cols + cc)];
      }
      out[static_cast<std::size_t>(r * cols + c)] = sum * inv;
    }
  }
  field = std::move(out);
}

}  // namespace

SpatioTemporalGrid generate(const SynthParams& params) {
  validate_params(params);
  std::int64_t rows = params.rows;
  std::int64_t cols = params.cols;
  std::int64_t cells = rows * cols;
  std::int64_t total_steps = params.t_steps + kBurnIn;
  std::int64_t rr = params.effective_radius_rows();
  std::int64_t rc = params.effective_radius_cols();
  std::size_t p = params.temporal_coeffs.size();

  Rng noise_rng(derive_seed(params.seed, "synth-noise"));

  // AR recursion per cell; only the last p latent fields are kept between
  // steps, plus every post-burn-in field for standardization.
  std::vector<std::vector<double>> history;
  std::vector<std::vector<double>> latent;
  latent.reserve(static_cast<std::size_t>(params.t_steps));

  for (std::int64_t t = 0; t < total_steps; ++t) {
    std::vector<double> eps(static_cast<std::size_t>(cells));
    for (double& v : eps) v = noise_rng.normal();
    smooth_axis(eps, rows, cols, rr, /*along_rows=*/true);
    smooth_axis(eps, rows, cols, rc, /*along_rows=*/false);

    std::vector<double> z = std::move(eps);
    for (std::size_t i = 0; i < p && i < history.size(); ++i) {
      double coeff = params.temporal_coeffs[i];
      const std::vector<double>& prev = history[history.size() - 1 - i];
      for (std::int64_t cidx = 0; cidx < cells; ++cidx) {
        z[static_cast<std::size_t>(cidx)] += coeff * prev[static_cast<std::size_t>(cidx)];
      }
    }

    history.push_back(z);
    if (history.size() > p) history.erase(history.begin());
    if (t >= kBurnIn) latent.push_back(std::move(z));
  }

  // Empirical standardization keeps the count scale tied to base_rate no
  // matter what the AR filter and smoothing did to the latent variance.
  double mean = 0.0;
  std::int64_t n_vals = params.t_steps * cells;
  for (const auto& f : latent) {
    for (double v : f) mean += v;
  }
  mean /= static_cast<double>(n_vals);
  double var = 0.0;
  for (const auto& f : latent) {
    for (double v : f) var += (v - mean) * (v - mean);
  }
  var /= static_cast<double>(n_vals);
  if (var == 0.0) {
    throw Error(ErrorKind::internal, "degenerate latent field: zero variance");
  }
  double inv_sd = 1.0 / std::sqrt(var);

  GridSpec spec;
  spec.rows = rows;
  spec.cols = cols;
  spec.origin_e_km = 0.0;
  spec.origin_n_km = 0.0;
  spec.cell_w_km = 1.0;
  spec.cell_h_km = 1.0;
  spec.t_steps = params.t_steps;
  spec.t_resolution = TimeResolution::monthly;
  spec.start_date = Date{2000, 1, 0};

  Rng type_rng(derive_seed(params.seed, "synth-types"));
  double proportion = type_rng.uniform(0.3, 0.7);

  SpatioTemporalGrid grid(spec, {"synthetic_a", "synthetic_b"});
  for (std::int64_t t = 0; t < params.t_steps; ++t) {
    const std::vector<double>& f = latent[static_cast<std::size_t>(t)];
    for (std::int64_t r = 0; r < rows; ++r) {
      for (std::int64_t c = 0; c < cols; ++c) {
        double zhat = (f[static_cast<std::size_t>(r * cols + c)] - mean) * inv_sd;
        double raw = params.base_rate + (params.base_rate / 3.0) * zhat;
        std::int64_t count = std::max<std::int64_t>(0, std::llround(raw));
        std::int64_t a = std::llround(proportion * static_cast<double>(count));
        grid.count(t, r, c) = count;
        grid.type_count(0, t, r, c) = a;
        grid.type_count(1, t, r, c) = count - a;
      }
    }
  }
  grid.validate_consistency();
  return grid;
}

}  // namespace gtwnn
