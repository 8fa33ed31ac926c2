#include "core/train.hpp"

#include <numeric>

#include "core/common.hpp"
#include "core/rng.hpp"

namespace gtwnn {

void TrainConfig::validate() const {
  if (epochs < 1) throw Error(ErrorKind::invalid_argument, "epochs must be at least 1");
  if (batch_size < 1) throw Error(ErrorKind::invalid_argument, "batch size must be at least 1");
}

TrainResult train_model(Model& model, const Dataset& dataset, const TrainConfig& config,
                        const LossSpec& loss_in) {
  config.validate();
  if (dataset.samples.empty())
    throw Error(ErrorKind::invalid_argument, "cannot train on an empty dataset");
  if (!config.trainable_blocks.empty() && config.trainable_blocks.size() != model.blocks.size())
    throw Error(ErrorKind::invalid_argument, "trainable_blocks length does not match block count");

  const LossSpec loss = resolve_loss(loss_in, dataset.grids.front()->spec());
  const std::int64_t out_dim = model.output_dim();

  // Targets are fixed by the grid; assemble them once.
  std::vector<TargetBlock> targets;
  targets.reserve(dataset.samples.size());
  for (const Sample& s : dataset.samples)
    targets.push_back(assemble_target(dataset.grid_of(s), s, out_dim));

  std::vector<AdamState> adam_states;
  adam_states.reserve(model.blocks.size());
  for (const Block& block : model.blocks) adam_states.push_back(AdamState::zeros_like(block));

  Rng shuffle_rng(derive_seed(config.seed, "shuffle"));
  std::vector<std::size_t> order(dataset.samples.size());
  std::iota(order.begin(), order.end(), 0);

  TrainResult result;
  result.epoch_losses.reserve(static_cast<std::size_t>(config.epochs));

  ModelTape tape;
  std::vector<double> grad_out;
  for (std::int64_t epoch = 0; epoch < config.epochs; ++epoch) {
    shuffle_rng.shuffle(order);
    double epoch_loss_sum = 0.0;
    std::int64_t batch_count = 0;
    for (std::size_t start = 0; start < order.size(); start += static_cast<std::size_t>(config.batch_size)) {
      const std::size_t end = std::min(order.size(), start + static_cast<std::size_t>(config.batch_size));
      const double inv_batch = 1.0 / static_cast<double>(end - start);

      ModelGrads grads = ModelGrads::zeros_like(model);
      double batch_loss = 0.0;
      for (std::size_t bi = start; bi < end; ++bi) {
        const Sample& sample = dataset.samples[order[bi]];
        const std::vector<double> outputs = model_forward(model, sample, &tape);
        batch_loss += block_loss(outputs, targets[order[bi]], loss, &grad_out) * inv_batch;
        for (double& g : grad_out) g *= inv_batch;
        model_backward(model, sample, tape, grad_out, grads);
      }
      for (std::size_t b = 0; b < model.blocks.size(); ++b) {
        if (!config.trainable_blocks.empty() && !config.trainable_blocks[b]) continue;
        adam_step(model.blocks[b], grads.blocks[b], adam_states[b], config.adam,
                  "block " + format_int(static_cast<std::int64_t>(b)));
      }
      epoch_loss_sum += batch_loss;
      ++batch_count;
    }
    result.epoch_losses.push_back(epoch_loss_sum / static_cast<double>(batch_count));
  }
  return result;
}

}  // namespace gtwnn
