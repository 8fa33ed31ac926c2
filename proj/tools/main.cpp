#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gtwnn/gtwnn.h"
#include "json.hpp"

namespace {

using ordered_json = nlohmann::ordered_json;

// Every knob of every subcommand lives here; flags override whatever the
// config file loaded, and --write-config dumps the effective result, so a
// run is fully described by one JSON document.
struct RunConfig {
  std::string input;
  std::string output_dir = "out";
  std::string grid;   // grid container path; defaults under output_dir
  std::string model;  // checkpoint path; defaults under output_dir
  std::string crs = "BNG";
  std::string resolution = "monthly";
  std::int32_t grid_seed = 32;
  std::string arch = "gtwnn";
  std::int64_t hidden_layers = 1;
  std::vector<std::int64_t> neurons = {8};
  std::int64_t epochs = 6;
  std::int64_t batch_size = 10;
  double learning_rate = 1e-3;
  std::string loss;  // empty keeps the architecture's default
  double bandwidth_h = 0.0;
  double bandwidth_ht = 0.0;
  std::int64_t budget = 50;
  std::int64_t layers_min = 0;
  std::int64_t layers_max = 0;
  std::int64_t neurons_min = 1;
  std::int64_t neurons_max = 15;
  bool per_layer_neurons = true;
  bool augment = false;
  bool oracle = false;
  std::uint64_t seed = 0;

  std::int64_t synth_rows = 24;
  std::int64_t synth_cols = 24;
  std::int64_t synth_steps = 400;
  std::vector<double> synth_ar;
  std::int64_t synth_radius = 0;
  std::int64_t synth_radius_rows = -1;
  std::int64_t synth_radius_cols = -1;
  double synth_base_rate = 5.0;

  std::int64_t diag_temporal_max_lag = 20;
  std::int64_t diag_spatial_max_lag = 5;
  double diag_alpha = 0.05;
  std::int64_t diag_isotropy_window = 7;
  double diag_isotropy_sample_frac = 0.25;
  double diag_isotropy_threshold = 0.15;
  std::int64_t diag_top_slices = 10;
};

ordered_json to_json(const RunConfig& c) {
  ordered_json j;
  j["input"] = c.input;
  j["output_dir"] = c.output_dir;
  j["grid"] = c.grid;
  j["model"] = c.model;
  j["crs"] = c.crs;
  j["resolution"] = c.resolution;
  j["grid_seed"] = c.grid_seed;
  j["arch"] = c.arch;
  j["hidden_layers"] = c.hidden_layers;
  j["neurons"] = c.neurons;
  j["epochs"] = c.epochs;
  j["batch_size"] = c.batch_size;
  j["learning_rate"] = c.learning_rate;
  j["loss"] = c.loss;
  j["bandwidth_h"] = c.bandwidth_h;
  j["bandwidth_ht"] = c.bandwidth_ht;
  j["budget"] = c.budget;
  j["layers_min"] = c.layers_min;
  j["layers_max"] = c.layers_max;
  j["neurons_min"] = c.neurons_min;
  j["neurons_max"] = c.neurons_max;
  j["per_layer_neurons"] = c.per_layer_neurons;
  j["augment"] = c.augment;
  j["oracle"] = c.oracle;
  j["seed"] = c.seed;
  j["synth"] = ordered_json{{"rows", c.synth_rows},
                            {"cols", c.synth_cols},
                            {"t_steps", c.synth_steps},
                            {"ar", c.synth_ar},
                            {"kernel_radius", c.synth_radius},
                            {"radius_rows", c.synth_radius_rows},
                            {"radius_cols", c.synth_radius_cols},
                            {"base_rate", c.synth_base_rate}};
  j["diagnostics"] = ordered_json{{"temporal_max_lag", c.diag_temporal_max_lag},
                                  {"spatial_max_lag", c.diag_spatial_max_lag},
                                  {"alpha", c.diag_alpha},
                                  {"isotropy_window", c.diag_isotropy_window},
                                  {"isotropy_sample_frac", c.diag_isotropy_sample_frac},
                                  {"isotropy_threshold", c.diag_isotropy_threshold},
                                  {"top_slices", c.diag_top_slices}};
  return j;
}

template <typename T>
void pick(const ordered_json& j, const char* key, T& out) {
  if (j.contains(key)) j.at(key).get_to(out);
}

void from_json(const ordered_json& j, RunConfig& c) {
  static const std::vector<std::string> known = {
      "input",      "output_dir", "grid",         "model",       "crs",
      "resolution", "grid_seed",  "arch",         "hidden_layers", "neurons",
      "epochs",     "batch_size", "learning_rate", "loss",        "bandwidth_h",
      "bandwidth_ht", "budget",   "layers_min",   "layers_max",  "neurons_min",
      "neurons_max", "per_layer_neurons", "augment", "oracle",    "seed",
      "synth",      "diagnostics"};
  for (const auto& item : j.items()) {
    bool ok = false;
    for (const auto& k : known) ok = ok || k == item.key();
    if (!ok) throw std::runtime_error("unknown config key '" + item.key() + "'");
  }
  pick(j, "input", c.input);
  pick(j, "output_dir", c.output_dir);
  pick(j, "grid", c.grid);
  pick(j, "model", c.model);
  pick(j, "crs", c.crs);
  pick(j, "resolution", c.resolution);
  pick(j, "grid_seed", c.grid_seed);
  pick(j, "arch", c.arch);
  pick(j, "hidden_layers", c.hidden_layers);
  pick(j, "neurons", c.neurons);
  pick(j, "epochs", c.epochs);
  pick(j, "batch_size", c.batch_size);
  pick(j, "learning_rate", c.learning_rate);
  pick(j, "loss", c.loss);
  pick(j, "bandwidth_h", c.bandwidth_h);
  pick(j, "bandwidth_ht", c.bandwidth_ht);
  pick(j, "budget", c.budget);
  pick(j, "layers_min", c.layers_min);
  pick(j, "layers_max", c.layers_max);
  pick(j, "neurons_min", c.neurons_min);
  pick(j, "neurons_max", c.neurons_max);
  pick(j, "per_layer_neurons", c.per_layer_neurons);
  pick(j, "augment", c.augment);
  pick(j, "oracle", c.oracle);
  pick(j, "seed", c.seed);
  if (j.contains("synth")) {
    const ordered_json& s = j.at("synth");
    pick(s, "rows", c.synth_rows);
    pick(s, "cols", c.synth_cols);
    pick(s, "t_steps", c.synth_steps);
    pick(s, "ar", c.synth_ar);
    pick(s, "kernel_radius", c.synth_radius);
    pick(s, "radius_rows", c.synth_radius_rows);
    pick(s, "radius_cols", c.synth_radius_cols);
    pick(s, "base_rate", c.synth_base_rate);
  }
  if (j.contains("diagnostics")) {
    const ordered_json& d = j.at("diagnostics");
    pick(d, "temporal_max_lag", c.diag_temporal_max_lag);
    pick(d, "spatial_max_lag", c.diag_spatial_max_lag);
    pick(d, "alpha", c.diag_alpha);
    pick(d, "isotropy_window", c.diag_isotropy_window);
    pick(d, "isotropy_sample_frac", c.diag_isotropy_sample_frac);
    pick(d, "isotropy_threshold", c.diag_isotropy_threshold);
    pick(d, "top_slices", c.diag_top_slices);
  }
}

void load_config_file(const std::string& path, RunConfig& c) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
  ordered_json j = ordered_json::parse(in);
  from_json(j, c);
}

void write_config_file(const std::string& path, const RunConfig& c) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << to_json(c).dump(2) << "\n";
}

int fail(gtwnn_status status) {
  std::fprintf(stderr, "error: %s\n", gtwnn_last_error());
  return static_cast<int>(status);
}

#define CHECK(call)                        \
  do {                                     \
    gtwnn_status status_ = (call);         \
    if (status_ != GTWNN_OK) return fail(status_); \
  } while (0)

using GridPtr = std::unique_ptr<gtwnn_grid, decltype(&gtwnn_grid_free)>;
using DatasetPtr = std::unique_ptr<gtwnn_dataset, decltype(&gtwnn_dataset_free)>;
using ModelPtr = std::unique_ptr<gtwnn_model, decltype(&gtwnn_model_free)>;
using DiagPtr = std::unique_ptr<gtwnn_diagnostics, decltype(&gtwnn_diagnostics_free)>;
using ReportPtr = std::unique_ptr<gtwnn_search_report, decltype(&gtwnn_search_report_free)>;

std::string grid_path(const RunConfig& c) {
  return c.grid.empty() ? c.output_dir + "/grid.bin" : c.grid;
}

std::string model_path(const RunConfig& c) {
  return c.model.empty() ? c.output_dir + "/model.bin" : c.model;
}

void ensure_output_dir(const RunConfig& c) {
  std::filesystem::create_directories(c.output_dir);
}

std::vector<std::int64_t> resolve_neurons(const RunConfig& c) {
  std::vector<std::int64_t> neurons = c.neurons;
  if (neurons.size() == 1 && c.hidden_layers > 1) {
    neurons.assign(static_cast<std::size_t>(c.hidden_layers), neurons[0]);
  }
  return neurons;
}

gtwnn_train_config train_config_of(const RunConfig& c) {
  gtwnn_train_config cfg;
  gtwnn_train_config_init(&cfg);
  cfg.epochs = c.epochs;
  cfg.batch_size = c.batch_size;
  cfg.learning_rate = c.learning_rate;
  return cfg;
}

gtwnn_loss_config loss_config_of(const RunConfig& c) {
  gtwnn_loss_config loss;
  gtwnn_loss_config_init(&loss);
  if (!c.loss.empty()) loss.kind = c.loss.c_str();
  loss.bandwidth_h = c.bandwidth_h;
  loss.bandwidth_ht = c.bandwidth_ht;
  return loss;
}

int cmd_ingest(const RunConfig& c) {
  if (c.input.empty()) {
    std::fprintf(stderr, "error: ingest requires --input\n");
    return 1;
  }
  ensure_output_dir(c);
  gtwnn_ingest_options opts;
  gtwnn_ingest_options_init(&opts);
  opts.crs = c.crs.c_str();
  opts.resolution = c.resolution.c_str();
  opts.grid_seed = c.grid_seed;

  gtwnn_grid* raw = nullptr;
  gtwnn_ingest_summary summary{};
  CHECK(gtwnn_ingest_csv(c.input.c_str(), &opts, &raw, &summary));
  GridPtr grid(raw, gtwnn_grid_free);
  CHECK(gtwnn_grid_save(grid.get(), grid_path(c).c_str()));

  std::cout << "rows=" << summary.rows << " cols=" << summary.cols
            << " t_steps=" << summary.t_steps << "\n";
  std::cout << "cell_w_km=" << summary.cell_w_km << " cell_h_km=" << summary.cell_h_km << "\n";
  std::cout << "kept=" << summary.records_kept << " dropped=" << summary.records_dropped
            << " out_of_extent=" << summary.out_of_extent << "\n";
  std::cout << "grid=" << grid_path(c) << "\n";
  return 0;
}

int cmd_synth(const RunConfig& c) {
  ensure_output_dir(c);
  gtwnn_synth_params params;
  gtwnn_synth_params_init(&params);
  params.rows = c.synth_rows;
  params.cols = c.synth_cols;
  params.t_steps = c.synth_steps;
  if (c.synth_ar.size() > 2) {
    std::fprintf(stderr, "error: at most 2 AR coefficients are supported\n");
    return 1;
  }
  params.n_ar = static_cast<int32_t>(c.synth_ar.size());
  if (params.n_ar >= 1) params.ar1 = c.synth_ar[0];
  if (params.n_ar >= 2) params.ar2 = c.synth_ar[1];
  params.kernel_radius = c.synth_radius;
  params.radius_rows = c.synth_radius_rows;
  params.radius_cols = c.synth_radius_cols;
  params.base_rate = c.synth_base_rate;
  params.seed = gtwnn_derive_seed(c.seed, "synth");

  gtwnn_grid* raw = nullptr;
  CHECK(gtwnn_synth_generate(&params, &raw));
  GridPtr grid(raw, gtwnn_grid_free);
  CHECK(gtwnn_grid_save(grid.get(), grid_path(c).c_str()));
  std::cout << "rows=" << c.synth_rows << " cols=" << c.synth_cols
            << " t_steps=" << c.synth_steps << "\n";
  std::cout << "grid=" << grid_path(c) << "\n";
  return 0;
}

int cmd_diagnose(const RunConfig& c) {
  ensure_output_dir(c);
  gtwnn_grid* raw = nullptr;
  CHECK(gtwnn_grid_load(grid_path(c).c_str(), &raw));
  GridPtr grid(raw, gtwnn_grid_free);

  gtwnn_diag_options opts;
  gtwnn_diag_options_init(&opts);
  opts.temporal_max_lag = c.diag_temporal_max_lag;
  opts.spatial_max_lag = c.diag_spatial_max_lag;
  opts.alpha = c.diag_alpha;
  opts.isotropy_window = c.diag_isotropy_window;
  opts.isotropy_sample_frac = c.diag_isotropy_sample_frac;
  opts.isotropy_threshold = c.diag_isotropy_threshold;
  opts.top_slices = c.diag_top_slices;
  opts.seed = gtwnn_derive_seed(c.seed, "diagnose");

  gtwnn_diagnostics* draw = nullptr;
  CHECK(gtwnn_diagnose(grid.get(), &opts, &draw));
  DiagPtr diag(draw, gtwnn_diagnostics_free);
  CHECK(gtwnn_diagnostics_write(diag.get(), c.output_dir.c_str()));

  const char* verdict = nullptr;
  int32_t temporal = 0, spatial = 0, history = 0, isotropic = 0;
  CHECK(gtwnn_diagnostics_verdict(diag.get(), &verdict));
  CHECK(gtwnn_diagnostics_flags(diag.get(), &temporal, &spatial, &history, &isotropic));
  std::cout << "verdict=" << verdict << "\n";
  std::cout << "temporal_significant=" << temporal << " spatial_significant=" << spatial
            << " history_inappropriate=" << history << " isotropic=" << isotropic << "\n";
  std::cout << "reports=" << c.output_dir << "\n";
  return 0;
}

int load_split(const RunConfig& c, GridPtr& grid, DatasetPtr& train, DatasetPtr& test) {
  gtwnn_grid* graw = nullptr;
  CHECK(gtwnn_grid_load(grid_path(c).c_str(), &graw));
  grid.reset(graw);

  gtwnn_dataset* draw = nullptr;
  if (c.augment) {
    CHECK(gtwnn_dataset_build_augmented(grid.get(), &draw));
  } else {
    CHECK(gtwnn_dataset_build(grid.get(), &draw));
  }
  DatasetPtr full(draw, gtwnn_dataset_free);

  gtwnn_dataset* traw = nullptr;
  gtwnn_dataset* teraw = nullptr;
  CHECK(gtwnn_dataset_split(full.get(), gtwnn_derive_seed(c.seed, "split"), &traw, &teraw));
  train.reset(traw);
  test.reset(teraw);
  return 0;
}

int cmd_train(const RunConfig& c) {
  ensure_output_dir(c);
  GridPtr grid(nullptr, gtwnn_grid_free);
  DatasetPtr train(nullptr, gtwnn_dataset_free);
  DatasetPtr test(nullptr, gtwnn_dataset_free);
  if (int rc = load_split(c, grid, train, test)) return rc;

  gtwnn_grid_info info{};
  CHECK(gtwnn_grid_get_info(grid.get(), &info));

  std::vector<std::int64_t> neurons = resolve_neurons(c);
  gtwnn_model* mraw = nullptr;
  CHECK(gtwnn_model_create(c.arch.c_str(), c.hidden_layers, neurons.data(),
                           static_cast<int64_t>(neurons.size()), info.n_types,
                           gtwnn_derive_seed(c.seed, "train"), &mraw));
  ModelPtr model(mraw, gtwnn_model_free);

  gtwnn_train_config cfg = train_config_of(c);
  cfg.seed = gtwnn_derive_seed(c.seed, "train");
  gtwnn_loss_config loss = loss_config_of(c);

  std::vector<double> losses(static_cast<std::size_t>(c.epochs), 0.0);
  int64_t n_epochs = 0;
  CHECK(gtwnn_model_train(model.get(), train.get(), &cfg, &loss, losses.data(), c.epochs,
                          &n_epochs));
  CHECK(gtwnn_write_loss_curve((c.output_dir + "/loss_curve.csv").c_str(), losses.data(),
                               n_epochs));
  CHECK(gtwnn_model_save(model.get(), model_path(c).c_str()));

  double mse = 0.0, mape = 0.0, r2 = 0.0;
  int32_t r2_undefined = 0;
  CHECK(gtwnn_evaluate(model.get(), test.get(), 0, c.output_dir.c_str(), &mse, &mape, &r2,
                       &r2_undefined));

  for (int64_t i = 0; i < n_epochs; ++i) {
    std::cout << "epoch=" << (i + 1) << " loss=" << losses[static_cast<std::size_t>(i)] << "\n";
  }
  std::cout << "test_mse=" << mse << " test_mape=" << mape << " test_r2=";
  if (r2_undefined) {
    std::cout << "undefined";
  } else {
    std::cout << r2;
  }
  std::cout << "\n";
  std::cout << "model=" << model_path(c) << "\n";
  return 0;
}

int cmd_search(const RunConfig& c) {
  ensure_output_dir(c);
  GridPtr grid(nullptr, gtwnn_grid_free);
  DatasetPtr train(nullptr, gtwnn_dataset_free);
  DatasetPtr test(nullptr, gtwnn_dataset_free);
  if (int rc = load_split(c, grid, train, test)) return rc;

  gtwnn_search_options opts;
  gtwnn_search_options_init(&opts);
  opts.budget = c.budget;
  opts.layers_min = c.layers_min;
  opts.layers_max = c.layers_max;
  opts.neurons_min = c.neurons_min;
  opts.neurons_max = c.neurons_max;
  opts.per_layer_neurons = c.per_layer_neurons ? 1 : 0;

  gtwnn_train_config cfg = train_config_of(c);
  cfg.seed = gtwnn_derive_seed(c.seed, "search");
  gtwnn_loss_config loss = loss_config_of(c);

  gtwnn_search_report* rraw = nullptr;
  CHECK(gtwnn_search(c.arch.c_str(), train.get(), test.get(), &opts, &cfg, &loss, &rraw));
  ReportPtr report(rraw, gtwnn_search_report_free);
  CHECK(gtwnn_search_report_write(report.get(), (c.output_dir + "/search_report.csv").c_str(),
                                  (c.output_dir + "/trials.csv").c_str()));

  int64_t depth = 0;
  double mse = 0.0, mape = 0.0, r2 = 0.0;
  CHECK(gtwnn_search_report_best(report.get(), &depth, &mse, &mape, &r2));
  std::cout << "best_depth=" << depth << " mse=" << mse << " mape=" << mape << " r2=" << r2
            << "\n";
  std::cout << "reports=" << c.output_dir << "\n";
  return 0;
}

int cmd_evaluate(const RunConfig& c) {
  ensure_output_dir(c);
  GridPtr grid(nullptr, gtwnn_grid_free);
  DatasetPtr train(nullptr, gtwnn_dataset_free);
  DatasetPtr test(nullptr, gtwnn_dataset_free);
  if (int rc = load_split(c, grid, train, test)) return rc;

  gtwnn_model* mraw = nullptr;
  CHECK(gtwnn_model_load(model_path(c).c_str(), &mraw));
  ModelPtr model(mraw, gtwnn_model_free);

  double mse = 0.0, mape = 0.0, r2 = 0.0;
  int32_t r2_undefined = 0;
  CHECK(gtwnn_evaluate(model.get(), test.get(), c.oracle ? 1 : 0, c.output_dir.c_str(), &mse,
                       &mape, &r2, &r2_undefined));
  std::cout << "mse=" << mse << " mape=" << mape << " r2=";
  if (r2_undefined) {
    std::cout << "undefined";
  } else {
    std::cout << r2;
  }
  std::cout << "\n";
  std::cout << "reports=" << c.output_dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;

  // The config file must be applied before flag parsing so flags override
  // file values; find it with a pre-scan.
  for (int i = 1; i < argc; ++i) {
    std::string arg = argv[i];
    std::string value;
    if (arg == "--config" && i + 1 < argc) {
      value = argv[i + 1];
    } else if (arg.rfind("--config=", 0) == 0) {
      value = arg.substr(9);
    } else {
      continue;
    }
    try {
      load_config_file(value, cfg);
    } catch (const std::exception& e) {
      std::fprintf(stderr, "error: %s\n", e.what());
      return 1;
    }
    break;
  }

  CLI::App app{"Geographically and temporally weighted neural networks over count grids"};
  app.require_subcommand(1);
  std::string config_path;
  std::string write_config_path;
  app.add_option("--config", config_path, "JSON config file; flags override its values");
  app.add_option("--write-config", write_config_path,
                 "write the effective config to this path and exit");

  auto add_common = [&](CLI::App* sub) {
    sub->fallthrough();
    sub->add_option("--out", cfg.output_dir, "output directory");
    sub->add_option("--grid", cfg.grid, "grid container path");
    sub->add_option("--seed", cfg.seed, "master seed; fans out to named sub-seeds");
  };

  CLI::App* ingest = app.add_subcommand("ingest", "read an event CSV into a grid container");
  add_common(ingest);
  ingest->add_option("--input", cfg.input, "event CSV path");
  ingest->add_option("--crs", cfg.crs, "BNG or UTM17N");
  ingest->add_option("--resolution", cfg.resolution, "monthly or daily");
  ingest->add_option("--grid-seed", cfg.grid_seed, "grid sizing seed (~seed^2 cells)");

  CLI::App* synth = app.add_subcommand("synth", "generate a synthetic count grid");
  add_common(synth);
  synth->add_option("--rows", cfg.synth_rows, "grid rows");
  synth->add_option("--cols", cfg.synth_cols, "grid columns");
  synth->add_option("--steps", cfg.synth_steps, "time steps");
  synth->add_option("--ar", cfg.synth_ar, "AR coefficients (up to 2)")->delimiter(',');
  synth->add_option("--radius", cfg.synth_radius, "spatial kernel radius (both axes)");
  synth->add_option("--radius-rows", cfg.synth_radius_rows, "row-axis kernel radius override");
  synth->add_option("--radius-cols", cfg.synth_radius_cols, "column-axis kernel radius override");
  synth->add_option("--base-rate", cfg.synth_base_rate, "mean count per cell");

  CLI::App* diagnose = app.add_subcommand("diagnose", "correlation diagnostics and prescription");
  add_common(diagnose);
  diagnose->add_option("--temporal-max-lag", cfg.diag_temporal_max_lag, "temporal ACF/PACF lags");
  diagnose->add_option("--spatial-max-lag", cfg.diag_spatial_max_lag, "spatial PACF lags");
  diagnose->add_option("--alpha", cfg.diag_alpha, "significance level");
  diagnose->add_option("--isotropy-window", cfg.diag_isotropy_window, "correlation window size");
  diagnose->add_option("--isotropy-sample-frac", cfg.diag_isotropy_sample_frac,
                       "fraction of cells sampled");
  diagnose->add_option("--isotropy-threshold", cfg.diag_isotropy_threshold,
                       "max allowed symmetry deviation");
  diagnose->add_option("--top-slices", cfg.diag_top_slices, "high-density slice count");

  auto add_train_opts = [&](CLI::App* sub) {
    sub->add_option("--arch", cfg.arch, "architecture tag");
    sub->add_option("--epochs", cfg.epochs, "training epochs");
    sub->add_option("--batch", cfg.batch_size, "batch size");
    sub->add_option("--learning-rate", cfg.learning_rate, "ADAM step size");
    sub->add_option("--loss", cfg.loss, "plain_mse, spatial_weighted or spatiotemporal_weighted");
    sub->add_option("--bandwidth-h", cfg.bandwidth_h, "spatial kernel bandwidth (km)");
    sub->add_option("--bandwidth-ht", cfg.bandwidth_ht, "temporal kernel bandwidth (steps)");
    sub->add_flag("--augment,!--no-augment", cfg.augment, "train on the 8x dihedral augmentation");
  };

  CLI::App* train = app.add_subcommand("train", "train one model and write a checkpoint");
  add_common(train);
  add_train_opts(train);
  train->add_option("--layers", cfg.hidden_layers, "hidden layers per block");
  train->add_option("--neurons", cfg.neurons, "neurons per hidden layer")->delimiter(',');
  train->add_option("--model", cfg.model, "checkpoint output path");

  CLI::App* search = app.add_subcommand("search", "architecture search over layers and widths");
  add_common(search);
  add_train_opts(search);
  search->add_option("--budget", cfg.budget, "total trial budget");
  search->add_option("--layers-min", cfg.layers_min, "search depth lower bound");
  search->add_option("--layers-max", cfg.layers_max, "search depth upper bound");
  search->add_option("--neurons-min", cfg.neurons_min, "search width lower bound");
  search->add_option("--neurons-max", cfg.neurons_max, "search width upper bound");
  search->add_flag("--per-layer-neurons,!--shared-neurons", cfg.per_layer_neurons,
                   "independent width per layer");

  CLI::App* evaluate = app.add_subcommand("evaluate", "evaluate a checkpoint on the test split");
  add_common(evaluate);
  evaluate->add_option("--model", cfg.model, "checkpoint path");
  evaluate->add_flag("--augment,!--no-augment", cfg.augment, "evaluate on the augmented split");
  evaluate->add_flag("--oracle", cfg.oracle, "replace predictions with true targets (test hook)");

  CLI11_PARSE(app, argc, argv);

  if (!write_config_path.empty()) {
    try {
      write_config_file(write_config_path, cfg);
    } catch (const std::exception& e) {
      std::fprintf(stderr, "error: %s\n", e.what());
      return 1;
    }
    return 0;
  }

  if (ingest->parsed()) return cmd_ingest(cfg);
  if (synth->parsed()) return cmd_synth(cfg);
  if (diagnose->parsed()) return cmd_diagnose(cfg);
  if (train->parsed()) return cmd_train(cfg);
  if (search->parsed()) return cmd_search(cfg);
  if (evaluate->parsed()) return cmd_evaluate(cfg);
  return 1;
}
