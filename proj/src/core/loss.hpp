#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace gtwnn {

enum class LossKind { plain_mse, spatial_weighted, spatiotemporal_weighted };

LossKind loss_kind_from_string(std::string_view s);
const char* to_string(LossKind kind);

// Loss selection plus the Gaussian kernel bandwidths: `bandwidth_h` in km
// for the spatial weighting, `bandwidth_ht` in time steps for the temporal
// factor (spatiotemporal loss only). Non-positive bandwidths mean "use the
// default": one cell width, one time step.
struct LossSpec {
  LossKind kind = LossKind::plain_mse;
  double bandwidth_h = 0.0;
  double bandwidth_ht = 0.0;
};

// Gaussian distance weighting: exp(-((d/h)^2)/2).
double weight_kernel(double d_km, double h_km);

// Target values for one sample, in the architecture's output layout:
// a single scalar, a row-major 3x3 spatial neighborhood (center index 4),
// or a 3x3x3 block over time offsets (-1, 0, +1) with the center at
// index 13. Entries falling outside the grid are masked out rather than
// zero-padded, so boundary samples never learn phantom targets.
struct TargetBlock {
  std::int64_t dim = 1;
  std::vector<double> values;
  std::vector<double> distances;     // km from the center cell
  std::vector<double> time_offsets;  // steps from the center time (0 except 27-blocks)
  std::vector<std::uint8_t> mask;    // 1 = inside the grid
};

// Per-sample loss of a block of outputs against a TargetBlock:
//   plain_mse               mean over unmasked entries of (o - t)^2
//   spatial_weighted        sum over unmasked entries of v * (t - o)^2,
//                           v = weight_kernel(distance, h)
//   spatiotemporal_weighted as spatial with v multiplied by the temporal
//                           factor exp(-((tau/ht)^2)/2)
// When grad is non-null it receives d(loss)/d(outputs). A fully masked
// block raises ErrorKind::domain.
double block_loss(const std::vector<double>& outputs, const TargetBlock& target,
                  const LossSpec& loss, std::vector<double>* grad);

}  // namespace gtwnn
