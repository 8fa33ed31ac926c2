#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/rng.hpp"

namespace gtwnn {

// One dense layer: weights are row-major [out x in].
struct LayerParams {
  std::int64_t in = 0;
  std::int64_t out = 0;
  std::vector<double> w;
  std::vector<double> b;

  static LayerParams zeros(std::int64_t in, std::int64_t out) {
    LayerParams p;
    p.in = in;
    p.out = out;
    p.w.assign(static_cast<std::size_t>(in * out), 0.0);
    p.b.assign(static_cast<std::size_t>(out), 0.0);
    return p;
  }
};

// A stack of dense layers: every layer but the last applies ReLU, the final
// layer is linear so block outputs (beta values, count predictions) are
// unrestricted in sign and range.
struct Block {
  std::vector<LayerParams> layers;

  std::int64_t input_dim() const { return layers.front().in; }
  std::int64_t output_dim() const { return layers.back().out; }
};

// Seeded uniform fan-in-scaled initialization: weights in
// [-sqrt(6/fan_in), +sqrt(6/fan_in)], biases zero. `sizes` runs from the
// input dimension through every layer width to the output dimension.
Block init_network(const std::vector<std::int64_t>& sizes, Rng& rng);

// Cached per-layer activations from a forward pass; acts[0] is the input,
// acts[i] the post-activation output of layer i-1, pres[i] the
// pre-activation vector of layer i.
struct BlockTape {
  std::vector<std::vector<double>> acts;
  std::vector<std::vector<double>> pres;
};

// Forward pass; fills `tape` when non-null (required for block_backward).
std::vector<double> block_forward(const Block& block, const std::vector<double>& input,
                                  BlockTape* tape);

// Gradient accumulator shaped like a block's parameters.
struct BlockGrads {
  std::vector<LayerParams> layers;

  static BlockGrads zeros_like(const Block& block);
  void add_scaled(const BlockGrads& other, double scale);
};

// Reverse-mode pass: propagates grad_output through the block, accumulating
// parameter gradients into `grads` and returning the gradient with respect
// to the block input.
std::vector<double> block_backward(const Block& block, const BlockTape& tape,
                                   const std::vector<double>& grad_output, BlockGrads& grads);

struct AdamParams {
  double alpha = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// First/second-moment state for one block; `step` counts applied updates.
struct AdamState {
  std::vector<LayerParams> m;
  std::vector<LayerParams> v;
  std::int64_t step = 0;

  static AdamState zeros_like(const Block& block);
};

// Standard bias-corrected ADAM update. A non-finite gradient entry raises
// ErrorKind::domain naming the offending layer via `block_label`.
void adam_step(Block& block, const BlockGrads& grads, AdamState& state, const AdamParams& params,
               const std::string& block_label);

}  // namespace gtwnn
