#include "gtwnn/gtwnn.h"

#include <cstring>
#include <exception>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "core/common.hpp"
#include "core/dataset.hpp"
#include "core/diagnostics.hpp"
#include "core/eval.hpp"
#include "core/grid.hpp"
#include "core/ingest.hpp"
#include "core/model.hpp"
#include "core/nas.hpp"
#include "core/projection.hpp"
#include "core/report_io.hpp"
#include "core/rng.hpp"
#include "core/synth.hpp"
#include "core/train.hpp"

struct gtwnn_grid {
  std::shared_ptr<const gtwnn::SpatioTemporalGrid> impl;
};

struct gtwnn_dataset {
  gtwnn::Dataset impl;
};

struct gtwnn_model {
  gtwnn::Model impl;
};

struct gtwnn_diagnostics {
  gtwnn::DiagnosticsReport impl;
};

struct gtwnn_search_report {
  gtwnn::SearchReport impl;
};

namespace {

thread_local std::string g_last_error;

gtwnn_status status_of(gtwnn::ErrorKind kind) {
  switch (kind) {
    case gtwnn::ErrorKind::invalid_argument:
      return GTWNN_ERR_INVALID_ARGUMENT;
    case gtwnn::ErrorKind::domain:
      return GTWNN_ERR_DOMAIN;
    case gtwnn::ErrorKind::io:
      return GTWNN_ERR_IO;
    case gtwnn::ErrorKind::parse:
      return GTWNN_ERR_PARSE;
    case gtwnn::ErrorKind::internal:
      return GTWNN_ERR_INTERNAL;
  }
  return GTWNN_ERR_INTERNAL;
}

// Every exported function body runs inside this boundary: exceptions never
// cross into C callers.
template <typename Fn>
gtwnn_status guarded(Fn&& fn) {
  try {
    fn();
    return GTWNN_OK;
  } catch (const gtwnn::Error& e) {
    g_last_error = e.what();
    return status_of(e.kind());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return GTWNN_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return GTWNN_ERR_INTERNAL;
  }
}

void require(bool ok, const char* what) {
  if (!ok) {
    throw gtwnn::Error(gtwnn::ErrorKind::invalid_argument, what);
  }
}

gtwnn::TrainConfig to_core(const gtwnn_train_config* config) {
  require(config != nullptr, "config must not be null");
  gtwnn::TrainConfig c;
  c.epochs = config->epochs;
  c.batch_size = config->batch_size;
  c.seed = config->seed;
  c.adam.alpha = config->learning_rate;
  return c;
}

gtwnn::LossSpec to_core(const gtwnn_loss_config* loss, gtwnn::Arch arch) {
  gtwnn::LossSpec spec;
  if (loss == nullptr || loss->kind == nullptr) {
    spec.kind = gtwnn::arch_default_loss(arch);
  } else {
    spec.kind = gtwnn::loss_kind_from_string(loss->kind);
  }
  if (loss != nullptr) {
    spec.bandwidth_h = loss->bandwidth_h;
    spec.bandwidth_ht = loss->bandwidth_ht;
  }
  return spec;
}

}  // namespace

extern "C" {

const char* gtwnn_version(void) { return "1.0.0"; }

const char* gtwnn_last_error(void) { return g_last_error.c_str(); }

uint64_t gtwnn_derive_seed(uint64_t master, const char* name) {
  return gtwnn::derive_seed(master, name ? name : "");
}

/* ---- projection ---- */

gtwnn_status gtwnn_project(const char* crs, double lon_deg, double lat_deg, double* easting_km,
                           double* northing_km) {
  return guarded([&] {
    require(crs && easting_km && northing_km, "crs and output pointers must not be null");
    auto [e, n] = gtwnn::project_coords(lon_deg, lat_deg, gtwnn::crs_from_string(crs));
    *easting_km = e;
    *northing_km = n;
  });
}

gtwnn_status gtwnn_unproject(const char* crs, double easting_km, double northing_km,
                             double* lon_deg, double* lat_deg) {
  return guarded([&] {
    require(crs && lon_deg && lat_deg, "crs and output pointers must not be null");
    auto [lon, lat] = gtwnn::unproject_coords(easting_km, northing_km, gtwnn::crs_from_string(crs));
    *lon_deg = lon;
    *lat_deg = lat;
  });
}

/* ---- grid ---- */

gtwnn_status gtwnn_grid_load(const char* path, gtwnn_grid** out) {
  return guarded([&] {
    require(path && out, "path and out must not be null");
    auto grid = std::make_shared<gtwnn::SpatioTemporalGrid>(gtwnn::load_grid(path));
    *out = new gtwnn_grid{std::move(grid)};
  });
}

gtwnn_status gtwnn_grid_save(const gtwnn_grid* grid, const char* path) {
  return guarded([&] {
    require(grid && path, "grid and path must not be null");
    gtwnn::save_grid(*grid->impl, path);
  });
}

gtwnn_status gtwnn_grid_get_info(const gtwnn_grid* grid, gtwnn_grid_info* out) {
  return guarded([&] {
    require(grid && out, "grid and out must not be null");
    const gtwnn::GridSpec& spec = grid->impl->spec();
    out->rows = spec.rows;
    out->cols = spec.cols;
    out->t_steps = spec.t_steps;
    out->n_types = grid->impl->n_types();
    out->origin_e_km = spec.origin_e_km;
    out->origin_n_km = spec.origin_n_km;
    out->cell_w_km = spec.cell_w_km;
    out->cell_h_km = spec.cell_h_km;
    out->monthly = spec.t_resolution == gtwnn::TimeResolution::monthly ? 1 : 0;
    std::string date = gtwnn::format_date(spec.start_date);
    std::snprintf(out->start_date, sizeof(out->start_date), "%s", date.c_str());
  });
}

gtwnn_status gtwnn_grid_count(const gtwnn_grid* grid, int64_t t, int64_t r, int64_t c,
                              int64_t* out) {
  return guarded([&] {
    require(grid && out, "grid and out must not be null");
    *out = grid->impl->count(t, r, c);
  });
}

gtwnn_status gtwnn_grid_type_count(const gtwnn_grid* grid, int64_t type_index, int64_t t,
                                   int64_t r, int64_t c, int64_t* out) {
  return guarded([&] {
    require(grid && out, "grid and out must not be null");
    require(type_index >= 0 && type_index < grid->impl->n_types(), "type_index out of range");
    *out = grid->impl->type_count(type_index, t, r, c);
  });
}

gtwnn_status gtwnn_grid_type_label(const gtwnn_grid* grid, int64_t type_index, const char** out) {
  return guarded([&] {
    require(grid && out, "grid and out must not be null");
    require(type_index >= 0 && type_index < grid->impl->n_types(), "type_index out of range");
    *out = grid->impl->type_labels()[static_cast<std::size_t>(type_index)].c_str();
  });
}

gtwnn_status gtwnn_grid_export_csv(const gtwnn_grid* grid, const char* dir) {
  return guarded([&] {
    require(grid && dir, "grid and dir must not be null");
    gtwnn::export_grid_csv(*grid->impl, dir);
  });
}

void gtwnn_grid_free(gtwnn_grid* grid) { delete grid; }

/* ---- ingest ---- */

void gtwnn_ingest_options_init(gtwnn_ingest_options* opts) {
  if (!opts) return;
  opts->crs = "BNG";
  opts->resolution = "monthly";
  opts->grid_seed = 32;
  opts->col_longitude = nullptr;
  opts->col_latitude = nullptr;
  opts->col_date = nullptr;
  opts->col_type = nullptr;
  opts->delimiter = 0;
}

gtwnn_status gtwnn_ingest_csv(const char* path, const gtwnn_ingest_options* opts,
                              gtwnn_grid** out_grid, gtwnn_ingest_summary* out_summary) {
  return guarded([&] {
    require(path && opts && out_grid, "path, opts and out_grid must not be null");
    gtwnn::IngestOptions options;
    require(opts->crs != nullptr && opts->resolution != nullptr,
            "crs and resolution must not be null");
    options.crs = gtwnn::crs_from_string(opts->crs);
    options.resolution = gtwnn::time_resolution_from_string(opts->resolution);
    options.seed_n = opts->grid_seed;
    if (opts->col_longitude) options.schema.longitude = opts->col_longitude;
    if (opts->col_latitude) options.schema.latitude = opts->col_latitude;
    if (opts->col_date) options.schema.date = opts->col_date;
    if (opts->col_type) options.schema.type = opts->col_type;
    if (opts->delimiter) options.schema.delimiter = opts->delimiter;

    gtwnn::IngestResult result = gtwnn::ingest_csv(path, options);
    if (out_summary) {
      out_summary->records_kept = result.summary.records_kept;
      out_summary->records_dropped = result.summary.records_dropped;
      out_summary->out_of_extent = result.summary.out_of_extent;
      out_summary->rows = result.summary.rows;
      out_summary->cols = result.summary.cols;
      out_summary->t_steps = result.summary.t_steps;
      out_summary->cell_w_km = result.summary.cell_w_km;
      out_summary->cell_h_km = result.summary.cell_h_km;
    }
    *out_grid = new gtwnn_grid{
        std::make_shared<gtwnn::SpatioTemporalGrid>(std::move(result.grid))};
  });
}

gtwnn_status gtwnn_compute_grid_dims(double width_km, double height_km, int32_t grid_seed,
                                     int64_t* out_rows, int64_t* out_cols) {
  return guarded([&] {
    require(out_rows && out_cols, "output pointers must not be null");
    auto [rows, cols] = gtwnn::compute_grid_dims(width_km, height_km, grid_seed);
    *out_rows = rows;
    *out_cols = cols;
  });
}

/* ---- synth ---- */

void gtwnn_synth_params_init(gtwnn_synth_params* params) {
  if (!params) return;
  params->rows = 24;
  params->cols = 24;
  params->t_steps = 400;
  params->n_ar = 0;
  params->ar1 = 0.0;
  params->ar2 = 0.0;
  params->kernel_radius = 0;
  params->radius_rows = -1;
  params->radius_cols = -1;
  params->base_rate = 5.0;
  params->seed = 0;
}

gtwnn_status gtwnn_synth_generate(const gtwnn_synth_params* params, gtwnn_grid** out) {
  return guarded([&] {
    require(params && out, "params and out must not be null");
    require(params->n_ar >= 0 && params->n_ar <= 2, "n_ar must be 0, 1 or 2");
    gtwnn::SynthParams p;
    p.rows = params->rows;
    p.cols = params->cols;
    p.t_steps = params->t_steps;
    if (params->n_ar >= 1) p.temporal_coeffs.push_back(params->ar1);
    if (params->n_ar >= 2) p.temporal_coeffs.push_back(params->ar2);
    p.spatial_kernel_radius = params->kernel_radius;
    p.radius_rows = params->radius_rows;
    p.radius_cols = params->radius_cols;
    p.base_rate = params->base_rate;
    p.seed = params->seed;
    *out = new gtwnn_grid{std::make_shared<gtwnn::SpatioTemporalGrid>(gtwnn::generate(p))};
  });
}

/* ---- datasets ---- */

gtwnn_status gtwnn_dataset_build(const gtwnn_grid* grid, gtwnn_dataset** out) {
  return guarded([&] {
    require(grid && out, "grid and out must not be null");
    *out = new gtwnn_dataset{gtwnn::build_dataset(grid->impl)};
  });
}

gtwnn_status gtwnn_dataset_build_augmented(const gtwnn_grid* grid, gtwnn_dataset** out) {
  return guarded([&] {
    require(grid && out, "grid and out must not be null");
    *out = new gtwnn_dataset{gtwnn::d4_augment_dataset(grid->impl)};
  });
}

gtwnn_status gtwnn_dataset_split(const gtwnn_dataset* dataset, uint64_t seed,
                                 gtwnn_dataset** out_train, gtwnn_dataset** out_test) {
  return guarded([&] {
    require(dataset && out_train && out_test, "dataset and output pointers must not be null");
    auto [train, test] = gtwnn::split_train_test(dataset->impl, seed);
    *out_train = new gtwnn_dataset{std::move(train)};
    *out_test = new gtwnn_dataset{std::move(test)};
  });
}

gtwnn_status gtwnn_dataset_size(const gtwnn_dataset* dataset, int64_t* out) {
  return guarded([&] {
    require(dataset && out, "dataset and out must not be null");
    *out = dataset->impl.size();
  });
}

void gtwnn_dataset_free(gtwnn_dataset* dataset) { delete dataset; }

/* ---- models and training ---- */

void gtwnn_train_config_init(gtwnn_train_config* config) {
  if (!config) return;
  config->epochs = 6;
  config->batch_size = 10;
  config->seed = 0;
  config->learning_rate = 1e-3;
}

void gtwnn_loss_config_init(gtwnn_loss_config* config) {
  if (!config) return;
  config->kind = nullptr;
  config->bandwidth_h = 0.0;
  config->bandwidth_ht = 0.0;
}

gtwnn_status gtwnn_model_create(const char* arch, int64_t hidden_layers, const int64_t* neurons,
                                int64_t n_neurons, int64_t n_types, uint64_t seed,
                                gtwnn_model** out) {
  return guarded([&] {
    require(arch && out, "arch and out must not be null");
    require(neurons != nullptr || n_neurons == 0, "neurons must not be null");
    gtwnn::ArchitectureSpec spec;
    spec.kind = gtwnn::arch_from_string(arch);
    spec.hidden_layers = hidden_layers;
    spec.neurons.assign(neurons, neurons + n_neurons);
    spec.n_types = n_types;
    *out = new gtwnn_model{gtwnn::build_model(spec, seed)};
  });
}

gtwnn_status gtwnn_model_train(gtwnn_model* model, const gtwnn_dataset* dataset,
                               const gtwnn_train_config* config, const gtwnn_loss_config* loss,
                               double* epoch_losses, int64_t epoch_capacity,
                               int64_t* n_epochs_out) {
  return guarded([&] {
    require(model && dataset, "model and dataset must not be null");
    gtwnn::TrainConfig cfg = to_core(config);
    gtwnn::LossSpec spec = to_core(loss, model->impl.spec.kind);
    gtwnn::TrainResult result = gtwnn::train_model(model->impl, dataset->impl, cfg, spec);
    int64_t n = static_cast<int64_t>(result.epoch_losses.size());
    if (epoch_losses) {
      int64_t m = n < epoch_capacity ? n : epoch_capacity;
      for (int64_t i = 0; i < m; ++i) {
        epoch_losses[i] = result.epoch_losses[static_cast<std::size_t>(i)];
      }
      if (n_epochs_out) *n_epochs_out = m;
    } else if (n_epochs_out) {
      *n_epochs_out = n;
    }
  });
}

gtwnn_status gtwnn_model_predict(const gtwnn_model* model, const gtwnn_dataset* dataset,
                                 int64_t sample_index, double* out) {
  return guarded([&] {
    require(model && dataset && out, "model, dataset and out must not be null");
    require(sample_index >= 0 && sample_index < dataset->impl.size(),
            "sample_index out of range");
    *out = gtwnn::predict(model->impl,
                          dataset->impl.samples[static_cast<std::size_t>(sample_index)]);
  });
}

gtwnn_status gtwnn_model_arch(const gtwnn_model* model, const char** out_tag) {
  return guarded([&] {
    require(model && out_tag, "model and out_tag must not be null");
    *out_tag = gtwnn::to_string(model->impl.spec.kind);
  });
}

gtwnn_status gtwnn_model_save(const gtwnn_model* model, const char* path) {
  return guarded([&] {
    require(model && path, "model and path must not be null");
    gtwnn::save_model(model->impl, path);
  });
}

gtwnn_status gtwnn_model_load(const char* path, gtwnn_model** out) {
  return guarded([&] {
    require(path && out, "path and out must not be null");
    *out = new gtwnn_model{gtwnn::load_model(path)};
  });
}

void gtwnn_model_free(gtwnn_model* model) { delete model; }

/* ---- diagnostics ---- */

gtwnn_status gtwnn_acf(const double* series, int64_t n, int64_t max_lag, double alpha,
                       double* values, double* band) {
  return guarded([&] {
    require(series && values && band, "series and output pointers must not be null");
    require(n >= 0, "n must be non-negative");
    std::vector<double> s(series, series + n);
    gtwnn::CorrelationCurve curve = gtwnn::acf(s, max_lag, alpha);
    for (std::size_t i = 0; i < curve.values.size(); ++i) {
      values[i] = curve.values[i];
      band[i] = curve.band[i];
    }
  });
}

gtwnn_status gtwnn_pacf(const double* series, int64_t n, int64_t max_lag, double alpha,
                        double* values, double* band) {
  return guarded([&] {
    require(series && values && band, "series and output pointers must not be null");
    require(n >= 0, "n must be non-negative");
    std::vector<double> s(series, series + n);
    gtwnn::CorrelationCurve curve = gtwnn::pacf(s, max_lag, alpha);
    for (std::size_t i = 0; i < curve.values.size(); ++i) {
      values[i] = curve.values[i];
      band[i] = curve.band[i];
    }
  });
}

void gtwnn_diag_options_init(gtwnn_diag_options* opts) {
  if (!opts) return;
  opts->temporal_max_lag = 20;
  opts->spatial_max_lag = 5;
  opts->alpha = 0.05;
  opts->isotropy_window = 7;
  opts->isotropy_sample_frac = 0.25;
  opts->isotropy_threshold = 0.15;
  opts->top_slices = 10;
  opts->seed = 0;
}

gtwnn_status gtwnn_diagnose(const gtwnn_grid* grid, const gtwnn_diag_options* opts,
                            gtwnn_diagnostics** out) {
  return guarded([&] {
    require(grid && opts && out, "grid, opts and out must not be null");
    gtwnn::DiagnosticsOptions options;
    options.temporal_max_lag = opts->temporal_max_lag;
    options.spatial_max_lag = opts->spatial_max_lag;
    options.alpha = opts->alpha;
    options.isotropy_window = opts->isotropy_window;
    options.isotropy_sample_frac = opts->isotropy_sample_frac;
    options.isotropy_threshold = opts->isotropy_threshold;
    options.top_slices = opts->top_slices;
    options.seed = opts->seed;
    *out = new gtwnn_diagnostics{gtwnn::run_diagnostics(*grid->impl, options)};
  });
}

gtwnn_status gtwnn_diagnostics_verdict(const gtwnn_diagnostics* diag, const char** out_tag) {
  return guarded([&] {
    require(diag && out_tag, "diag and out_tag must not be null");
    *out_tag = gtwnn::to_string(diag->impl.prescription.recommended);
  });
}

gtwnn_status gtwnn_diagnostics_flags(const gtwnn_diagnostics* diag, int32_t* temporal_significant,
                                     int32_t* spatial_significant, int32_t* history_inappropriate,
                                     int32_t* isotropic) {
  return guarded([&] {
    require(diag != nullptr, "diag must not be null");
    const gtwnn::Prescription& p = diag->impl.prescription;
    if (temporal_significant) *temporal_significant = p.temporal_significant ? 1 : 0;
    if (spatial_significant) *spatial_significant = p.spatial_significant ? 1 : 0;
    if (history_inappropriate) *history_inappropriate = p.history_inappropriate ? 1 : 0;
    if (isotropic) *isotropic = diag->impl.isotropy.isotropic ? 1 : 0;
  });
}

gtwnn_status gtwnn_diagnostics_write(const gtwnn_diagnostics* diag, const char* dir) {
  return guarded([&] {
    require(diag && dir, "diag and dir must not be null");
    std::string base = dir;
    gtwnn::write_curve_csv(base + "/acf.csv", diag->impl.acf_total);
    gtwnn::write_curve_csv(base + "/pacf.csv", diag->impl.pacf_total);
    gtwnn::write_curve_csv(base + "/spatial_x.csv", diag->impl.spatial_x);
    gtwnn::write_curve_csv(base + "/spatial_y.csv", diag->impl.spatial_y);
    gtwnn::write_curve_csv(base + "/spatial_hd_x.csv", diag->impl.spatial_hd_x);
    gtwnn::write_curve_csv(base + "/spatial_hd_y.csv", diag->impl.spatial_hd_y);
    gtwnn::write_isotropy_csv(base + "/isotropy.csv", diag->impl.isotropy);
    gtwnn::write_prescription(base + "/prescription.txt", diag->impl.prescription);
  });
}

void gtwnn_diagnostics_free(gtwnn_diagnostics* diag) { delete diag; }

/* ---- architecture search ---- */

gtwnn_status gtwnn_min_trials(double top_fraction, double confidence, int64_t* out) {
  return guarded([&] {
    require(out != nullptr, "out must not be null");
    *out = gtwnn::min_trials_for_top_fraction(top_fraction, confidence);
  });
}

void gtwnn_search_options_init(gtwnn_search_options* opts) {
  if (!opts) return;
  opts->budget = 50;
  opts->layers_min = 0;
  opts->layers_max = 0;
  opts->neurons_min = 1;
  opts->neurons_max = 15;
  opts->per_layer_neurons = 1;
}

gtwnn_status gtwnn_search(const char* arch, const gtwnn_dataset* train, const gtwnn_dataset* test,
                          const gtwnn_search_options* opts, const gtwnn_train_config* config,
                          const gtwnn_loss_config* loss, gtwnn_search_report** out) {
  return guarded([&] {
    require(arch && train && test && opts && out,
            "arch, datasets, opts and out must not be null");
    gtwnn::Arch kind = gtwnn::arch_from_string(arch);
    gtwnn::SearchSpace space = gtwnn::default_space(kind);
    if (opts->layers_min > 0) space.layers_min = opts->layers_min;
    if (opts->layers_max > 0) space.layers_max = opts->layers_max;
    space.neurons_min = opts->neurons_min;
    space.neurons_max = opts->neurons_max;
    space.per_layer_neurons = opts->per_layer_neurons != 0;
    gtwnn::TrainConfig cfg = to_core(config);
    gtwnn::LossSpec spec = to_core(loss, kind);
    *out = new gtwnn_search_report{gtwnn::run_architecture_search(
        kind, train->impl, test->impl, space, opts->budget, cfg, spec)};
  });
}

gtwnn_status gtwnn_search_report_best(const gtwnn_search_report* report, int64_t* out_depth,
                                      double* out_mse, double* out_mape, double* out_r2) {
  return guarded([&] {
    require(report != nullptr, "report must not be null");
    const gtwnn::DepthRow& row = report->impl.rows[report->impl.best_row];
    if (out_depth) *out_depth = row.depth;
    if (out_mse) *out_mse = row.best.objective;
    if (out_mape) *out_mape = row.best.mape;
    if (out_r2) *out_r2 = row.best.r2;
  });
}

gtwnn_status gtwnn_search_report_write(const gtwnn_search_report* report, const char* table_csv,
                                       const char* trials_csv) {
  return guarded([&] {
    require(report != nullptr, "report must not be null");
    if (table_csv) gtwnn::write_search_report_csv(table_csv, report->impl);
    if (trials_csv) gtwnn::write_trial_log_csv(trials_csv, report->impl.trials);
  });
}

void gtwnn_search_report_free(gtwnn_search_report* report) { delete report; }

/* ---- evaluation ---- */

gtwnn_status gtwnn_metrics(const double* actual, const double* predicted, int64_t n,
                           double* out_mse, double* out_mape, double* out_r2,
                           int32_t* out_r2_undefined) {
  return guarded([&] {
    require(actual && predicted, "actual and predicted must not be null");
    require(n > 0, "n must be positive");
    std::vector<double> a(actual, actual + n);
    std::vector<double> p(predicted, predicted + n);
    gtwnn::Metrics m = gtwnn::compute_metrics(a, p);
    if (out_mse) *out_mse = m.mse;
    if (out_mape) *out_mape = m.mape;
    if (out_r2) *out_r2 = m.r2;
    if (out_r2_undefined) *out_r2_undefined = m.r2_undefined ? 1 : 0;
  });
}

gtwnn_status gtwnn_evaluate(const gtwnn_model* model, const gtwnn_dataset* dataset, int32_t oracle,
                            const char* out_dir, double* out_mse, double* out_mape, double* out_r2,
                            int32_t* out_r2_undefined) {
  return guarded([&] {
    require(model && dataset, "model and dataset must not be null");
    gtwnn::EvalResult result = gtwnn::evaluate_model(model->impl, dataset->impl, oracle != 0);
    if (out_dir) {
      std::string base = out_dir;
      gtwnn::write_eval_report_csv(base + "/eval_report.csv", result.metrics);
      gtwnn::write_matrix_csv(base + "/actual_map.csv", result.actual_map);
      gtwnn::write_matrix_csv(base + "/predicted_map.csv", result.predicted_map);
      gtwnn::write_matrix_csv(base + "/diff_map.csv", result.diff);
      gtwnn::write_matrix_ppm_gray(base + "/actual_map.ppm", result.actual_map);
      gtwnn::write_matrix_ppm_gray(base + "/predicted_map.ppm", result.predicted_map);
      gtwnn::write_matrix_ppm_diverging(base + "/diff_map.ppm", result.diff);
    }
    if (out_mse) *out_mse = result.metrics.mse;
    if (out_mape) *out_mape = result.metrics.mape;
    if (out_r2) *out_r2 = result.metrics.r2;
    if (out_r2_undefined) *out_r2_undefined = result.metrics.r2_undefined ? 1 : 0;
  });
}

gtwnn_status gtwnn_write_loss_curve(const char* path, const double* losses, int64_t n) {
  return guarded([&] {
    require(path && losses, "path and losses must not be null");
    require(n >= 0, "n must be non-negative");
    std::vector<double> l(losses, losses + n);
    gtwnn::write_loss_curve_csv(path, l);
  });
}

}  // extern "C"
