#include "core/nn.hpp"

#include <cmath>

#include "core/common.hpp"

namespace gtwnn {

Block init_network(const std::vector<std::int64_t>& sizes, Rng& rng) {
  if (sizes.size() < 2)
    throw Error(ErrorKind::invalid_argument, "init_network needs at least an input and output size");
  for (std::int64_t s : sizes)
    if (s <= 0) throw Error(ErrorKind::invalid_argument, "layer sizes must be positive");

  Block block;
  block.layers.reserve(sizes.size() - 1);
  for (std::size_t i = 0; i + 1 < sizes.size(); ++i) {
    LayerParams layer = LayerParams::zeros(sizes[i], sizes[i + 1]);
    const double bound = std::sqrt(6.0 / static_cast<double>(sizes[i]));
    for (double& w : layer.w) w = rng.uniform(-bound, bound);
    block.layers.push_back(std::move(layer));
  }
  return block;
}

std::vector<double> block_forward(const Block& block, const std::vector<double>& input,
                                  BlockTape* tape) {
  if (static_cast<std::int64_t>(input.size()) != block.input_dim())
    throw Error(ErrorKind::invalid_argument,
                "forward input length " + format_int(static_cast<std::int64_t>(input.size())) +
                    " does not match block input dimension " + format_int(block.input_dim()));
  if (tape) {
    tape->acts.clear();
    tape->pres.clear();
    tape->acts.push_back(input);
  }

  std::vector<double> current = input;
  for (std::size_t li = 0; li < block.layers.size(); ++li) {
    const LayerParams& layer = block.layers[li];
    std::vector<double> pre(static_cast<std::size_t>(layer.out));
    for (std::int64_t o = 0; o < layer.out; ++o) {
      double sum = layer.b[static_cast<std::size_t>(o)];
      const double* row = layer.w.data() + o * layer.in;
      for (std::int64_t i = 0; i < layer.in; ++i) sum += row[i] * current[static_cast<std::size_t>(i)];
      pre[static_cast<std::size_t>(o)] = sum;
    }
    const bool last = li + 1 == block.layers.size();
    std::vector<double> post = pre;
    if (!last)
      for (double& v : post) v = v > 0.0 ? v : 0.0;
    if (tape) {
      tape->pres.push_back(std::move(pre));
      tape->acts.push_back(post);
    }
    current = std::move(post);
  }
  return current;
}

BlockGrads BlockGrads::zeros_like(const Block& block) {
  BlockGrads g;
  g.layers.reserve(block.layers.size());
  for (const LayerParams& layer : block.layers) g.layers.push_back(LayerParams::zeros(layer.in, layer.out));
  return g;
}

void BlockGrads::add_scaled(const BlockGrads& other, double scale) {
  for (std::size_t li = 0; li < layers.size(); ++li) {
    for (std::size_t i = 0; i < layers[li].w.size(); ++i) layers[li].w[i] += scale * other.layers[li].w[i];
    for (std::size_t i = 0; i < layers[li].b.size(); ++i) layers[li].b[i] += scale * other.layers[li].b[i];
  }
}

std::vector<double> block_backward(const Block& block, const BlockTape& tape,
                                   const std::vector<double>& grad_output, BlockGrads& grads) {
  if (tape.acts.size() != block.layers.size() + 1)
    throw Error(ErrorKind::invalid_argument, "backward called with a tape from a different block");

  std::vector<double> grad = grad_output;
  for (std::size_t li = block.layers.size(); li-- > 0;) {
    const LayerParams& layer = block.layers[li];
    const bool last = li + 1 == block.layers.size();
    // Through the activation: ReLU gate on hidden layers, identity on the last.
    if (!last) {
      const std::vector<double>& pre = tape.pres[li];
      for (std::int64_t o = 0; o < layer.out; ++o)
        if (pre[static_cast<std::size_t>(o)] <= 0.0) grad[static_cast<std::size_t>(o)] = 0.0;
    }
    const std::vector<double>& in_act = tape.acts[li];
    LayerParams& g = grads.layers[li];
    std::vector<double> grad_in(static_cast<std::size_t>(layer.in), 0.0);
    for (std::int64_t o = 0; o < layer.out; ++o) {
      const double go = grad[static_cast<std::size_t>(o)];
      g.b[static_cast<std::size_t>(o)] += go;
      double* grow = g.w.data() + o * layer.in;
      const double* wrow = layer.w.data() + o * layer.in;
      for (std::int64_t i = 0; i < layer.in; ++i) {
        grow[i] += go * in_act[static_cast<std::size_t>(i)];
        grad_in[static_cast<std::size_t>(i)] += go * wrow[i];
      }
    }
    grad = std::move(grad_in);
  }
  return grad;
}

AdamState AdamState::zeros_like(const Block& block) {
  AdamState s;
  s.m.reserve(block.layers.size());
  s.v.reserve(block.layers.size());
  for (const LayerParams& layer : block.layers) {
    s.m.push_back(LayerParams::zeros(layer.in, layer.out));
    s.v.push_back(LayerParams::zeros(layer.in, layer.out));
  }
  return s;
}

namespace {

void adam_update_array(std::vector<double>& param, const std::vector<double>& grad,
                       std::vector<double>& m, std::vector<double>& v, const AdamParams& p,
                       double bias1, double bias2, const std::string& what) {
  for (std::size_t i = 0; i < param.size(); ++i) {
    const double g = grad[i];
    if (!std::isfinite(g)) throw Error(ErrorKind::domain, "non-finite gradient in " + what);
    m[i] = p.beta1 * m[i] + (1.0 - p.beta1) * g;
    v[i] = p.beta2 * v[i] + (1.0 - p.beta2) * g * g;
    const double m_hat = m[i] / bias1;
    const double v_hat = v[i] / bias2;
    param[i] -= p.alpha * m_hat / (std::sqrt(v_hat) + p.epsilon);
  }
}

}  // namespace

void adam_step(Block& block, const BlockGrads& grads, AdamState& state, const AdamParams& params,
               const std::string& block_label) {
  if (state.m.size() != block.layers.size())
    throw Error(ErrorKind::invalid_argument, "ADAM state does not match block shape");
  state.step += 1;
  const double bias1 = 1.0 - std::pow(params.beta1, static_cast<double>(state.step));
  const double bias2 = 1.0 - std::pow(params.beta2, static_cast<double>(state.step));
  for (std::size_t li = 0; li < block.layers.size(); ++li) {
    const std::string label = block_label + " layer " + format_int(static_cast<std::int64_t>(li));
    adam_update_array(block.layers[li].w, grads.layers[li].w, state.m[li].w, state.v[li].w, params,
                      bias1, bias2, label + " weights");
    adam_update_array(block.layers[li].b, grads.layers[li].b, state.m[li].b, state.v[li].b, params,
                      bias1, bias2, label + " biases");
  }
}

}  // namespace gtwnn
