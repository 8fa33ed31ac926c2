#include "core/loss.hpp"

#include <cmath>
#include <string>

#include "core/common.hpp"

namespace gtwnn {

LossKind loss_kind_from_string(std::string_view s) {
  if (s == "plain_mse") return LossKind::plain_mse;
  if (s == "spatial_weighted") return LossKind::spatial_weighted;
  if (s == "spatiotemporal_weighted") return LossKind::spatiotemporal_weighted;
  throw Error(ErrorKind::invalid_argument,
              "unknown loss kind '" + std::string(s) +
                  "' (expected plain_mse, spatial_weighted, or spatiotemporal_weighted)");
}

const char* to_string(LossKind kind) {
  switch (kind) {
    case LossKind::plain_mse: return "plain_mse";
    case LossKind::spatial_weighted: return "spatial_weighted";
    case LossKind::spatiotemporal_weighted: return "spatiotemporal_weighted";
  }
  return "unknown";
}

double weight_kernel(double d_km, double h_km) {
  if (h_km <= 0.0) throw Error(ErrorKind::invalid_argument, "kernel bandwidth must be positive");
  if (d_km < 0.0) throw Error(ErrorKind::invalid_argument, "kernel distance must be non-negative");
  const double ratio = d_km / h_km;
  return std::exp(-0.5 * ratio * ratio);
}

double block_loss(const std::vector<double>& outputs, const TargetBlock& target,
                  const LossSpec& loss, std::vector<double>* grad) {
  const std::size_t dim = static_cast<std::size_t>(target.dim);
  if (outputs.size() != dim)
    throw Error(ErrorKind::invalid_argument,
                "output size " + format_int(static_cast<std::int64_t>(outputs.size())) +
                    " does not match target block size " + format_int(target.dim));

  std::size_t active = 0;
  for (std::uint8_t m : target.mask) active += m;
  if (active == 0) throw Error(ErrorKind::domain, "target block fully masked");

  if (grad) grad->assign(dim, 0.0);

  double total = 0.0;
  for (std::size_t i = 0; i < dim; ++i) {
    if (!target.mask[i]) continue;
    double weight = 0.0;
    switch (loss.kind) {
      case LossKind::plain_mse:
        weight = 1.0 / static_cast<double>(active);
        break;
      case LossKind::spatial_weighted:
        weight = weight_kernel(target.distances[i], loss.bandwidth_h);
        break;
      case LossKind::spatiotemporal_weighted: {
        if (loss.bandwidth_ht <= 0.0)
          throw Error(ErrorKind::invalid_argument, "temporal bandwidth must be positive");
        const double tau = target.time_offsets[i] / loss.bandwidth_ht;
        weight = weight_kernel(target.distances[i], loss.bandwidth_h) * std::exp(-0.5 * tau * tau);
        break;
      }
    }
    const double diff = target.values[i] - outputs[i];
    total += weight * diff * diff;
    if (grad) (*grad)[i] = 2.0 * weight * (outputs[i] - target.values[i]);
  }
  return total;
}

}  // namespace gtwnn
