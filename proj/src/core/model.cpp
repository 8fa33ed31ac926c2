#include "core/model.hpp"

#include <cmath>
#include <cstring>
#include <fstream>

#include <json.hpp>

#include "core/common.hpp"
#include "core/rng.hpp"

namespace gtwnn {

const std::array<std::string, 8>& arch_tags() {
  static const std::array<std::string, 8> tags = {
      "vanilla", "gwann", "gtwnn", "gtwnn_ls", "gtwnn_lst", "hdgtwnn", "hdgtwnn_ls", "hdgtwnn_lst"};
  return tags;
}

Arch arch_from_string(std::string_view tag) {
  const auto& tags = arch_tags();
  for (std::size_t i = 0; i < tags.size(); ++i)
    if (tag == tags[i]) return static_cast<Arch>(i);
  std::string valid;
  for (std::size_t i = 0; i < tags.size(); ++i) {
    if (i) valid += ", ";
    valid += tags[i];
  }
  throw Error(ErrorKind::invalid_argument,
              "unknown architecture '" + std::string(tag) + "'; valid architectures: " + valid);
}

const char* to_string(Arch arch) { return arch_tags()[static_cast<std::size_t>(arch)].c_str(); }

bool arch_uses_external_factors(Arch arch) { return arch != Arch::vanilla && arch != Arch::gwann; }

bool arch_history_dependent(Arch arch) {
  return arch == Arch::hdgtwnn || arch == Arch::hdgtwnn_ls || arch == Arch::hdgtwnn_lst;
}

std::int64_t arch_output_dim(Arch arch) {
  switch (arch) {
    case Arch::vanilla:
    case Arch::gtwnn:
    case Arch::hdgtwnn:
      return 1;
    case Arch::gwann:
    case Arch::gtwnn_ls:
    case Arch::hdgtwnn_ls:
      return 9;
    case Arch::gtwnn_lst:
    case Arch::hdgtwnn_lst:
      return 27;
  }
  return 1;
}

LossKind arch_default_loss(Arch arch) {
  switch (arch_output_dim(arch)) {
    case 9: return LossKind::spatial_weighted;
    case 27: return LossKind::spatiotemporal_weighted;
    default: return LossKind::plain_mse;
  }
}

std::pair<std::int64_t, std::int64_t> arch_depth_range(Arch arch) {
  return arch_uses_external_factors(arch) ? std::pair<std::int64_t, std::int64_t>{1, 3}
                                          : std::pair<std::int64_t, std::int64_t>{1, 5};
}

void ArchitectureSpec::validate() const {
  const auto [lo, hi] = arch_depth_range(kind);
  if (hidden_layers < lo || hidden_layers > hi)
    throw Error(ErrorKind::invalid_argument,
                std::string("architecture ") + to_string(kind) + " allows " + format_int(lo) + " to " +
                    format_int(hi) + " hidden layers per block, got " + format_int(hidden_layers));
  if (static_cast<std::int64_t>(neurons.size()) != hidden_layers)
    throw Error(ErrorKind::invalid_argument,
                "neurons list length " + format_int(static_cast<std::int64_t>(neurons.size())) +
                    " does not match hidden layer count " + format_int(hidden_layers));
  for (std::int64_t n : neurons)
    if (n < 1) throw Error(ErrorKind::invalid_argument, "every hidden layer needs at least one neuron");
  if (n_types < 0) throw Error(ErrorKind::invalid_argument, "n_types must be non-negative");
}

namespace {

std::vector<std::int64_t> block_sizes(const ArchitectureSpec& spec, std::int64_t in,
                                      std::int64_t out) {
  std::vector<std::int64_t> sizes;
  sizes.push_back(in);
  sizes.insert(sizes.end(), spec.neurons.begin(), spec.neurons.end());
  sizes.push_back(out);
  return sizes;
}

}  // namespace

Model build_model(const ArchitectureSpec& spec, std::uint64_t seed) {
  spec.validate();
  Model model;
  model.spec = spec;
  Rng rng(derive_seed(seed, "init"));
  const std::int64_t beta_dim = spec.n_types + 1;
  const std::int64_t out = arch_output_dim(spec.kind);
  if (!arch_uses_external_factors(spec.kind)) {
    model.blocks.push_back(init_network(block_sizes(spec, 3, out), rng));
  } else if (!arch_history_dependent(spec.kind)) {
    model.blocks.push_back(init_network(block_sizes(spec, 3, beta_dim), rng));
    model.blocks.push_back(init_network(block_sizes(spec, beta_dim, out), rng));
  } else {
    model.blocks.push_back(init_network(block_sizes(spec, 3, beta_dim), rng));
    model.blocks.push_back(init_network(block_sizes(spec, beta_dim, beta_dim), rng));
    model.blocks.push_back(init_network(block_sizes(spec, beta_dim, out), rng));
  }
  return model;
}

std::int64_t Model::parameter_count() const {
  std::int64_t count = 0;
  for (const Block& block : blocks)
    for (const LayerParams& layer : block.layers)
      count += static_cast<std::int64_t>(layer.w.size() + layer.b.size());
  return count;
}

namespace {

std::vector<double> with_constant_channel(const std::vector<double>& factors) {
  std::vector<double> v;
  v.reserve(factors.size() + 1);
  v.push_back(1.0);
  v.insert(v.end(), factors.begin(), factors.end());
  return v;
}

void check_factor_dims(const Model& model, const Sample& sample) {
  if (static_cast<std::int64_t>(sample.ef_t.size()) != model.spec.n_types ||
      static_cast<std::int64_t>(sample.ef_tm1.size()) != model.spec.n_types)
    throw Error(ErrorKind::invalid_argument,
                "sample carries " + format_int(static_cast<std::int64_t>(sample.ef_t.size())) +
                    " external factors but the model expects " + format_int(model.spec.n_types));
}

}  // namespace

std::vector<double> model_forward(const Model& model, const Sample& sample, ModelTape* tape) {
  const std::vector<double> input = sample.input();
  if (tape) {
    tape->blocks.assign(model.blocks.size(), BlockTape{});
    tape->factor_vectors.clear();
    tape->betas.clear();
  }
  auto tape_at = [&](std::size_t i) { return tape ? &tape->blocks[i] : nullptr; };

  if (!arch_uses_external_factors(model.spec.kind)) {
    return block_forward(model.blocks[0], input, tape_at(0));
  }
  check_factor_dims(model, sample);

  if (!arch_history_dependent(model.spec.kind)) {
    std::vector<double> beta = block_forward(model.blocks[0], input, tape_at(0));
    const std::vector<double> factors = with_constant_channel(sample.ef_t);
    std::vector<double> product(beta.size());
    for (std::size_t i = 0; i < beta.size(); ++i) product[i] = beta[i] * factors[i];
    if (tape) {
      tape->betas.push_back(beta);
      tape->factor_vectors.push_back(factors);
    }
    return block_forward(model.blocks[1], product, tape_at(1));
  }

  std::vector<double> beta_prev = block_forward(model.blocks[0], input, tape_at(0));
  const std::vector<double> factors_prev = with_constant_channel(sample.ef_tm1);
  std::vector<double> product_prev(beta_prev.size());
  for (std::size_t i = 0; i < beta_prev.size(); ++i) product_prev[i] = beta_prev[i] * factors_prev[i];

  std::vector<double> beta_now = block_forward(model.blocks[1], product_prev, tape_at(1));
  const std::vector<double> factors_now = with_constant_channel(sample.ef_t);
  std::vector<double> product_now(beta_now.size());
  for (std::size_t i = 0; i < beta_now.size(); ++i) product_now[i] = beta_now[i] * factors_now[i];

  if (tape) {
    tape->betas.push_back(beta_prev);
    tape->betas.push_back(beta_now);
    tape->factor_vectors.push_back(factors_prev);
    tape->factor_vectors.push_back(factors_now);
  }
  return block_forward(model.blocks[2], product_now, tape_at(2));
}

ModelGrads ModelGrads::zeros_like(const Model& model) {
  ModelGrads g;
  g.blocks.reserve(model.blocks.size());
  for (const Block& block : model.blocks) g.blocks.push_back(BlockGrads::zeros_like(block));
  return g;
}

void ModelGrads::add_scaled(const ModelGrads& other, double scale) {
  for (std::size_t i = 0; i < blocks.size(); ++i) blocks[i].add_scaled(other.blocks[i], scale);
}

void model_backward(const Model& model, const Sample& sample, const ModelTape& tape,
                    const std::vector<double>& grad_output, ModelGrads& grads) {
  (void)sample;
  if (!arch_uses_external_factors(model.spec.kind)) {
    block_backward(model.blocks[0], tape.blocks[0], grad_output, grads.blocks[0]);
    return;
  }
  if (!arch_history_dependent(model.spec.kind)) {
    std::vector<double> grad_product =
        block_backward(model.blocks[1], tape.blocks[1], grad_output, grads.blocks[1]);
    // d(product)/d(beta) is the factor vector, element-wise.
    std::vector<double> grad_beta(grad_product.size());
    for (std::size_t i = 0; i < grad_product.size(); ++i)
      grad_beta[i] = grad_product[i] * tape.factor_vectors[0][i];
    block_backward(model.blocks[0], tape.blocks[0], grad_beta, grads.blocks[0]);
    return;
  }
  std::vector<double> grad_product_now =
      block_backward(model.blocks[2], tape.blocks[2], grad_output, grads.blocks[2]);
  std::vector<double> grad_beta_now(grad_product_now.size());
  for (std::size_t i = 0; i < grad_product_now.size(); ++i)
    grad_beta_now[i] = grad_product_now[i] * tape.factor_vectors[1][i];
  std::vector<double> grad_product_prev =
      block_backward(model.blocks[1], tape.blocks[1], grad_beta_now, grads.blocks[1]);
  std::vector<double> grad_beta_prev(grad_product_prev.size());
  for (std::size_t i = 0; i < grad_product_prev.size(); ++i)
    grad_beta_prev[i] = grad_product_prev[i] * tape.factor_vectors[0][i];
  block_backward(model.blocks[0], tape.blocks[0], grad_beta_prev, grads.blocks[0]);
}

double predict(const Model& model, const Sample& sample) {
  const std::vector<double> out = model_forward(model, sample, nullptr);
  switch (out.size()) {
    case 1: return out[0];
    case 9: return out[4];
    case 27: return out[13];
    default:
      throw Error(ErrorKind::internal, "unexpected model output size " +
                                           format_int(static_cast<std::int64_t>(out.size())));
  }
}

std::vector<std::vector<double>> model_betas(const Model& model, const Sample& sample) {
  if (!arch_uses_external_factors(model.spec.kind)) return {};
  ModelTape tape;
  model_forward(model, sample, &tape);
  return tape.betas;
}

TargetBlock assemble_target(const SpatioTemporalGrid& grid, const Sample& sample,
                            std::int64_t output_dim) {
  const GridSpec& spec = grid.spec();
  if (sample.t < 0 || sample.t >= spec.t_steps || sample.r < 0 || sample.r >= spec.rows ||
      sample.c < 0 || sample.c >= spec.cols)
    throw Error(ErrorKind::invalid_argument, "sample coordinates outside the grid");

  TargetBlock block;
  block.dim = output_dim;
  block.values.assign(static_cast<std::size_t>(output_dim), 0.0);
  block.distances.assign(static_cast<std::size_t>(output_dim), 0.0);
  block.time_offsets.assign(static_cast<std::size_t>(output_dim), 0.0);
  block.mask.assign(static_cast<std::size_t>(output_dim), 0);

  if (output_dim == 1) {
    block.values[0] = static_cast<double>(grid.count(sample.t, sample.r, sample.c));
    block.mask[0] = 1;
    return block;
  }

  const std::int64_t t_lo = output_dim == 27 ? -1 : 0;
  const std::int64_t t_hi = output_dim == 27 ? 1 : 0;
  std::size_t idx = 0;
  for (std::int64_t dt = t_lo; dt <= t_hi; ++dt) {
    for (std::int64_t dr = -1; dr <= 1; ++dr) {
      for (std::int64_t dc = -1; dc <= 1; ++dc, ++idx) {
        const std::int64_t t = sample.t + dt;
        const std::int64_t r = sample.r + dr;
        const std::int64_t c = sample.c + dc;
        block.distances[idx] = std::hypot(static_cast<double>(dr) * spec.cell_h_km,
                                          static_cast<double>(dc) * spec.cell_w_km);
        block.time_offsets[idx] = static_cast<double>(dt);
        if (t < 0 || t >= spec.t_steps || r < 0 || r >= spec.rows || c < 0 || c >= spec.cols)
          continue;  // outside the grid: stays masked
        block.values[idx] = static_cast<double>(grid.count(t, r, c));
        block.mask[idx] = 1;
      }
    }
  }
  return block;
}

LossSpec resolve_loss(LossSpec loss, const GridSpec& spec) {
  if (loss.bandwidth_h <= 0.0) loss.bandwidth_h = spec.cell_w_km;
  if (loss.bandwidth_ht <= 0.0) loss.bandwidth_ht = 1.0;
  return loss;
}

namespace {

constexpr char kCheckpointMagic[8] = {'G', 'T', 'W', 'N', 'N', 'C', 'K', '1'};

void write_u64_le(std::ostream& out, std::uint64_t v) {
  unsigned char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(buf), 8);
}

std::uint64_t read_u64_le(std::istream& in) {
  unsigned char buf[8];
  in.read(reinterpret_cast<char*>(buf), 8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
  return v;
}

void write_doubles(std::ostream& out, const std::vector<double>& values) {
  for (double d : values) {
    std::uint64_t bits;
    std::memcpy(&bits, &d, sizeof(bits));
    write_u64_le(out, bits);
  }
}

void read_doubles(std::istream& in, std::vector<double>& values) {
  for (double& d : values) {
    std::uint64_t bits = read_u64_le(in);
    std::memcpy(&d, &bits, sizeof(d));
  }
}

}  // namespace

void save_model(const Model& model, const std::string& path) {
  nlohmann::json header;
  header["arch"] = to_string(model.spec.kind);
  header["hidden_layers"] = model.spec.hidden_layers;
  header["neurons"] = model.spec.neurons;
  header["n_types"] = model.spec.n_types;
  nlohmann::json shapes = nlohmann::json::array();
  for (const Block& block : model.blocks) {
    nlohmann::json sizes = nlohmann::json::array();
    sizes.push_back(block.layers.front().in);
    for (const LayerParams& layer : block.layers) sizes.push_back(layer.out);
    shapes.push_back(sizes);
  }
  header["blocks"] = shapes;
  const std::string header_text = header.dump();

  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::io, "cannot open '" + path + "' for writing");
  out.write(kCheckpointMagic, sizeof(kCheckpointMagic));
  write_u64_le(out, header_text.size());
  out.write(header_text.data(), static_cast<std::streamsize>(header_text.size()));
  for (const Block& block : model.blocks)
    for (const LayerParams& layer : block.layers) {
      write_doubles(out, layer.w);
      write_doubles(out, layer.b);
    }
  if (!out) throw Error(ErrorKind::io, "write failed for '" + path + "'");
}

Model load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open '" + path + "' for reading");
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kCheckpointMagic, sizeof(kCheckpointMagic)) != 0)
    throw Error(ErrorKind::parse, "'" + path + "' is not a model checkpoint");
  const std::uint64_t header_len = read_u64_le(in);
  std::string header_text(header_len, '\0');
  in.read(header_text.data(), static_cast<std::streamsize>(header_len));
  if (!in) throw Error(ErrorKind::parse, "truncated checkpoint header in '" + path + "'");

  Model model;
  std::vector<std::vector<std::int64_t>> shapes;
  try {
    const nlohmann::json header = nlohmann::json::parse(header_text);
    model.spec.kind = arch_from_string(header.at("arch").get<std::string>());
    model.spec.hidden_layers = header.at("hidden_layers").get<std::int64_t>();
    model.spec.neurons = header.at("neurons").get<std::vector<std::int64_t>>();
    model.spec.n_types = header.at("n_types").get<std::int64_t>();
    shapes = header.at("blocks").get<std::vector<std::vector<std::int64_t>>>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::parse, "bad checkpoint header: " + std::string(e.what()));
  }
  model.spec.validate();

  for (const auto& sizes : shapes) {
    if (sizes.size() < 2) throw Error(ErrorKind::parse, "checkpoint block with fewer than two sizes");
    Block block;
    for (std::size_t i = 0; i + 1 < sizes.size(); ++i)
      block.layers.push_back(LayerParams::zeros(sizes[i], sizes[i + 1]));
    model.blocks.push_back(std::move(block));
  }
  for (Block& block : model.blocks)
    for (LayerParams& layer : block.layers) {
      read_doubles(in, layer.w);
      read_doubles(in, layer.b);
    }
  if (!in) throw Error(ErrorKind::parse, "truncated checkpoint parameters in '" + path + "'");
  return model;
}

}  // namespace gtwnn
