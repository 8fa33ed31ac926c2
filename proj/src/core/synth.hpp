#pragma once

#include <cstdint>
#include <vector>

#include "core/grid.hpp"

namespace gtwnn {

// Parameters of the synthetic count generator. Temporal correlation is
// injected through AR coefficients (up to order 2), spatial correlation
// through toroidal box-kernel smoothing of the driving noise. The kernel
// radius can be set per axis; the anisotropic case (different radii) is
// what the isotropy diagnostics are tested against.
struct SynthParams {
  std::int64_t rows = 24;
  std::int64_t cols = 24;
  std::int64_t t_steps = 400;
  std::vector<double> temporal_coeffs;   // AR coefficients, length <= 2
  std::int64_t spatial_kernel_radius = 0;  // used for both axes unless overridden
  std::int64_t radius_rows = -1;           // -1: fall back to spatial_kernel_radius
  std::int64_t radius_cols = -1;
  double base_rate = 5.0;
  std::uint64_t seed = 0;

  std::int64_t effective_radius_rows() const {
    return radius_rows >= 0 ? radius_rows : spatial_kernel_radius;
  }
  std::int64_t effective_radius_cols() const {
    return radius_cols >= 0 ? radius_cols : spatial_kernel_radius;
  }
};

// Generates a count grid whose latent field is an AR(p) process in time per
// cell, driven by spatially smoothed seeded Gaussian noise. The latent is
// standardized empirically, shifted to base_rate with spread base_rate/3,
// rounded, and clipped at zero. Counts are split into two synthetic types
// by one seeded proportion. Counts come from clipped rounding rather than
// Poisson draws so the injected correlations remain analytically
// controllable. Bit-deterministic per seed.
SpatioTemporalGrid generate(const SynthParams& params);

}  // namespace gtwnn
