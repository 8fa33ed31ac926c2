#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "core/dataset.hpp"
#include "core/loss.hpp"
#include "core/nn.hpp"

namespace gtwnn {

enum class Arch {
  vanilla,
  gwann,
  gtwnn,
  gtwnn_ls,
  gtwnn_lst,
  hdgtwnn,
  hdgtwnn_ls,
  hdgtwnn_lst,
};

// The eight architecture tags, in declaration order; these exact strings
// appear in config files, CLI arguments, and checkpoints.
const std::array<std::string, 8>& arch_tags();
Arch arch_from_string(std::string_view tag);
const char* to_string(Arch arch);

bool arch_uses_external_factors(Arch arch);   // gtwnn and hdgtwnn families
bool arch_history_dependent(Arch arch);       // hdgtwnn family
std::int64_t arch_output_dim(Arch arch);      // 1, 9, or 27
LossKind arch_default_loss(Arch arch);

// Depth range an architecture may search over: [1,5] for the two
// single-block models, [1,3] for models with intermediate input layers.
std::pair<std::int64_t, std::int64_t> arch_depth_range(Arch arch);

struct ArchitectureSpec {
  Arch kind = Arch::vanilla;
  std::int64_t hidden_layers = 1;
  std::vector<std::int64_t> neurons;  // one width per hidden layer
  std::int64_t n_types = 0;

  void validate() const;
};

// A wired model: one block for vanilla/gwann, two for the gtwnn family
// (coordinates -> beta, beta * factors -> output), three for the
// history-dependent family (beta(t-1) from coordinates, evolved to beta(t)
// through the lagged factors, then combined with the current factors).
// Every block shares the same hidden-layer shape. The constant-1 channel
// prepended to the factor vectors carries the intercept beta0.
struct Model {
  ArchitectureSpec spec;
  std::vector<Block> blocks;

  std::int64_t output_dim() const { return arch_output_dim(spec.kind); }
  std::int64_t parameter_count() const;
};

Model build_model(const ArchitectureSpec& spec, std::uint64_t seed);

// Cached intermediate state of one model forward pass.
struct ModelTape {
  std::vector<BlockTape> blocks;
  std::vector<std::vector<double>> factor_vectors;  // the (1, EF...) vectors fed to each product
  std::vector<std::vector<double>> betas;           // block outputs entering each product
};

std::vector<double> model_forward(const Model& model, const Sample& sample, ModelTape* tape);

struct ModelGrads {
  std::vector<BlockGrads> blocks;

  static ModelGrads zeros_like(const Model& model);
  void add_scaled(const ModelGrads& other, double scale);
};

// Exact reverse-mode gradients of the forward wiring; `grad_output` is
// d(loss)/d(model output).
void model_backward(const Model& model, const Sample& sample, const ModelTape& tape,
                    const std::vector<double>& grad_output, ModelGrads& grads);

// Center-cell scalar prediction: the single output, element 4 of a 9-block,
// or element 13 of a 27-block.
double predict(const Model& model, const Sample& sample);

// The influence-factor vectors produced for this input: [beta(t)] for the
// gtwnn family, [beta(t-1), beta(t)] for the history-dependent family,
// empty for vanilla/gwann.
std::vector<std::vector<double>> model_betas(const Model& model, const Sample& sample);

// Target assembly from the grid: the scalar center count, the row-major 3x3
// spatial neighborhood at t (center index 4), or the 3x3x3 block over
// (t-1, t, t+1) (center index 13). Out-of-grid neighbors are masked; a t+1
// slice beyond the final step is masked, not an error.
TargetBlock assemble_target(const SpatioTemporalGrid& grid, const Sample& sample,
                            std::int64_t output_dim);

// Fills in the defaulted bandwidths: h = one cell width, ht = 1 step.
LossSpec resolve_loss(LossSpec loss, const GridSpec& spec);

// Model checkpoint container: magic + version, a JSON header carrying the
// architecture tag and layer shapes, then every layer's weights and biases
// as little-endian doubles. Round-trips bit-exactly.
void save_model(const Model& model, const std::string& path);
Model load_model(const std::string& path);

}  // namespace gtwnn
