#pragma once

#include <cstdint>
#include <vector>

#include "core/dataset.hpp"
#include "core/loss.hpp"
#include "core/model.hpp"

namespace gtwnn {

struct TrainConfig {
  std::int64_t epochs = 6;
  std::int64_t batch_size = 10;
  std::uint64_t seed = 0;
  AdamParams adam;
  // Per-block trainable switches; empty means train every block. Freezing
  // blocks pins parts of the wiring, e.g. to probe beta recovery where the
  // downstream mapping would otherwise absorb an arbitrary rescaling.
  std::vector<std::uint8_t> trainable_blocks;

  void validate() const;
};

struct TrainResult {
  std::vector<double> epoch_losses;  // mean batch loss per epoch, index = epoch
};

// Seeded mini-batch training: epochs x ceil(n/batch) ADAM steps over
// freshly shuffled batches. Bandwidth defaults in `loss` are resolved
// against the dataset's grid before use.
TrainResult train_model(Model& model, const Dataset& dataset, const TrainConfig& config,
                        const LossSpec& loss);

}  // namespace gtwnn
