#ifndef GTWNN_GTWNN_H
#define GTWNN_GTWNN_H

/*
 * C interface to the gtwnn library: geographically and temporally weighted
 * neural networks over gridded spatiotemporal count data, with the
 * correlation diagnostics that prescribe them and a Bayesian-optimization
 * architecture search.
 *
 * Conventions:
 *   - Every fallible function returns a gtwnn_status; GTWNN_OK is 0.
 *   - On failure, gtwnn_last_error() returns a thread-local message
 *     describing the most recent failing call on this thread.
 *   - Objects returned through gtwnn_*** out-pointers are owned by the
 *     caller and released with the matching gtwnn_*_free function.
 *   - Options structs must be initialized with their _init function before
 *     use so new fields keep working defaults.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define GTWNN_API __declspec(dllexport)
#else
#define GTWNN_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum gtwnn_status {
  GTWNN_OK = 0,
  GTWNN_ERR_INVALID_ARGUMENT = 1,
  GTWNN_ERR_DOMAIN = 2,
  GTWNN_ERR_IO = 3,
  GTWNN_ERR_PARSE = 4,
  GTWNN_ERR_INTERNAL = 5
} gtwnn_status;

GTWNN_API const char* gtwnn_version(void);

/* Message for the most recent failing call on the calling thread; empty
 * string if none. The pointer stays valid until this thread's next failing
 * call. */
GTWNN_API const char* gtwnn_last_error(void);

/* Deterministic sub-seed derivation: one master seed fans out to named
 * streams (e.g. "shuffle", "init", "nas", "synth"). */
GTWNN_API uint64_t gtwnn_derive_seed(uint64_t master, const char* name);

/* ------------------------------------------------------------------ */
/* Projection                                                          */
/* ------------------------------------------------------------------ */

/* crs is "BNG" or "UTM17N". Coordinates outside the zone of validity are
 * a domain error. Outputs are in kilometres. */
GTWNN_API gtwnn_status gtwnn_project(const char* crs, double lon_deg, double lat_deg,
                                     double* easting_km, double* northing_km);
GTWNN_API gtwnn_status gtwnn_unproject(const char* crs, double easting_km, double northing_km,
                                       double* lon_deg, double* lat_deg);

/* ------------------------------------------------------------------ */
/* Grid container                                                      */
/* ------------------------------------------------------------------ */

typedef struct gtwnn_grid gtwnn_grid;

typedef struct gtwnn_grid_info {
  int64_t rows;
  int64_t cols;
  int64_t t_steps;
  int64_t n_types;
  double origin_e_km;
  double origin_n_km;
  double cell_w_km;
  double cell_h_km;
  int32_t monthly; /* 1 for monthly resolution, 0 for daily */
  char start_date[16];
} gtwnn_grid_info;

GTWNN_API gtwnn_status gtwnn_grid_load(const char* path, gtwnn_grid** out);
GTWNN_API gtwnn_status gtwnn_grid_save(const gtwnn_grid* grid, const char* path);
GTWNN_API gtwnn_status gtwnn_grid_get_info(const gtwnn_grid* grid, gtwnn_grid_info* out);
GTWNN_API gtwnn_status gtwnn_grid_count(const gtwnn_grid* grid, int64_t t, int64_t r, int64_t c,
                                        int64_t* out);
GTWNN_API gtwnn_status gtwnn_grid_type_count(const gtwnn_grid* grid, int64_t type_index, int64_t t,
                                             int64_t r, int64_t c, int64_t* out);
/* The returned label pointer stays valid while the grid lives. */
GTWNN_API gtwnn_status gtwnn_grid_type_label(const gtwnn_grid* grid, int64_t type_index,
                                             const char** out);
/* One CSV matrix per time step (t0000.csv, ...) into dir. */
GTWNN_API gtwnn_status gtwnn_grid_export_csv(const gtwnn_grid* grid, const char* dir);
GTWNN_API void gtwnn_grid_free(gtwnn_grid* grid);

/* ------------------------------------------------------------------ */
/* Ingest                                                              */
/* ------------------------------------------------------------------ */

typedef struct gtwnn_ingest_options {
  const char* crs;        /* "BNG" or "UTM17N" */
  const char* resolution; /* "monthly" or "daily" */
  int32_t grid_seed;      /* grid sizing seed: aims at ~grid_seed^2 cells (default 32) */
  const char* col_longitude; /* NULL keeps the default column name */
  const char* col_latitude;
  const char* col_date;
  const char* col_type;
  char delimiter; /* 0 keeps ',' */
} gtwnn_ingest_options;

typedef struct gtwnn_ingest_summary {
  int64_t records_kept;
  int64_t records_dropped;
  int64_t out_of_extent;
  int64_t rows;
  int64_t cols;
  int64_t t_steps;
  double cell_w_km;
  double cell_h_km;
} gtwnn_ingest_summary;

GTWNN_API void gtwnn_ingest_options_init(gtwnn_ingest_options* opts);
GTWNN_API gtwnn_status gtwnn_ingest_csv(const char* path, const gtwnn_ingest_options* opts,
                                        gtwnn_grid** out_grid, gtwnn_ingest_summary* out_summary);

/* Near-square grid dimensioning for a width x height extent (km), aiming
 * at roughly grid_seed^2 cells. */
GTWNN_API gtwnn_status gtwnn_compute_grid_dims(double width_km, double height_km,
                                               int32_t grid_seed, int64_t* out_rows,
                                               int64_t* out_cols);

/* ------------------------------------------------------------------ */
/* Synthetic generator                                                 */
/* ------------------------------------------------------------------ */

typedef struct gtwnn_synth_params {
  int64_t rows;
  int64_t cols;
  int64_t t_steps;
  int32_t n_ar;   /* number of AR coefficients used, 0..2 */
  double ar1;
  double ar2;
  int64_t kernel_radius; /* spatial smoothing radius, both axes */
  int64_t radius_rows;   /* per-axis override; -1 falls back to kernel_radius */
  int64_t radius_cols;
  double base_rate;
  uint64_t seed;
} gtwnn_synth_params;

GTWNN_API void gtwnn_synth_params_init(gtwnn_synth_params* params);
GTWNN_API gtwnn_status gtwnn_synth_generate(const gtwnn_synth_params* params, gtwnn_grid** out);

/* ------------------------------------------------------------------ */
/* Datasets                                                            */
/* ------------------------------------------------------------------ */

typedef struct gtwnn_dataset gtwnn_dataset;

GTWNN_API gtwnn_status gtwnn_dataset_build(const gtwnn_grid* grid, gtwnn_dataset** out);
/* The dataset plus its seven dihedral-transformed copies (exactly 8x). */
GTWNN_API gtwnn_status gtwnn_dataset_build_augmented(const gtwnn_grid* grid, gtwnn_dataset** out);
/* Train/test split: test = the final year of steps, both halves shuffled
 * deterministically from seed. */
GTWNN_API gtwnn_status gtwnn_dataset_split(const gtwnn_dataset* dataset, uint64_t seed,
                                           gtwnn_dataset** out_train, gtwnn_dataset** out_test);
GTWNN_API gtwnn_status gtwnn_dataset_size(const gtwnn_dataset* dataset, int64_t* out);
GTWNN_API void gtwnn_dataset_free(gtwnn_dataset* dataset);

/* ------------------------------------------------------------------ */
/* Models and training                                                 */
/* ------------------------------------------------------------------ */

typedef struct gtwnn_model gtwnn_model;

typedef struct gtwnn_train_config {
  int64_t epochs;     /* default 6 */
  int64_t batch_size; /* default 10 */
  uint64_t seed;
  double learning_rate; /* default 1e-3 */
} gtwnn_train_config;

typedef struct gtwnn_loss_config {
  const char* kind;   /* NULL: the architecture's default loss */
  double bandwidth_h; /* <= 0: one cell width */
  double bandwidth_ht; /* <= 0: one time step */
} gtwnn_loss_config;

GTWNN_API void gtwnn_train_config_init(gtwnn_train_config* config);
GTWNN_API void gtwnn_loss_config_init(gtwnn_loss_config* config);

/* arch is one of the eight tags: vanilla, gwann, gtwnn, gtwnn_ls,
 * gtwnn_lst, hdgtwnn, hdgtwnn_ls, hdgtwnn_lst. neurons holds one width per
 * hidden layer (n_neurons == hidden_layers). */
GTWNN_API gtwnn_status gtwnn_model_create(const char* arch, int64_t hidden_layers,
                                          const int64_t* neurons, int64_t n_neurons,
                                          int64_t n_types, uint64_t seed, gtwnn_model** out);

/* Trains in place. If epoch_losses is non-NULL it receives up to
 * epoch_capacity per-epoch mean batch losses; *n_epochs_out (may be NULL)
 * reports how many were written. */
GTWNN_API gtwnn_status gtwnn_model_train(gtwnn_model* model, const gtwnn_dataset* dataset,
                                         const gtwnn_train_config* config,
                                         const gtwnn_loss_config* loss, double* epoch_losses,
                                         int64_t epoch_capacity, int64_t* n_epochs_out);

/* Center-cell prediction for one dataset sample. */
GTWNN_API gtwnn_status gtwnn_model_predict(const gtwnn_model* model, const gtwnn_dataset* dataset,
                                           int64_t sample_index, double* out);

GTWNN_API gtwnn_status gtwnn_model_arch(const gtwnn_model* model, const char** out_tag);

/* Checkpoints round-trip bit-exactly. */
GTWNN_API gtwnn_status gtwnn_model_save(const gtwnn_model* model, const char* path);
GTWNN_API gtwnn_status gtwnn_model_load(const char* path, gtwnn_model** out);
GTWNN_API void gtwnn_model_free(gtwnn_model* model);

/* ------------------------------------------------------------------ */
/* Diagnostics                                                         */
/* ------------------------------------------------------------------ */

/* Autocorrelation of a series. values/band must hold max_lag + 1 entries
 * (lag 0 first; values[0] is exactly 1, band[0] is 0). */
GTWNN_API gtwnn_status gtwnn_acf(const double* series, int64_t n, int64_t max_lag, double alpha,
                                 double* values, double* band);
/* Partial autocorrelation; values/band must hold max_lag entries (lags
 * start at 1). */
GTWNN_API gtwnn_status gtwnn_pacf(const double* series, int64_t n, int64_t max_lag, double alpha,
                                  double* values, double* band);

typedef struct gtwnn_diag_options {
  int64_t temporal_max_lag;   /* default 20 */
  int64_t spatial_max_lag;    /* default 5 */
  double alpha;               /* default 0.05 */
  int64_t isotropy_window;    /* default 7 */
  double isotropy_sample_frac;/* default 0.25 */
  double isotropy_threshold;  /* default 0.15 */
  int64_t top_slices;         /* default 10 */
  uint64_t seed;
} gtwnn_diag_options;

typedef struct gtwnn_diagnostics gtwnn_diagnostics;

GTWNN_API void gtwnn_diag_options_init(gtwnn_diag_options* opts);
GTWNN_API gtwnn_status gtwnn_diagnose(const gtwnn_grid* grid, const gtwnn_diag_options* opts,
                                      gtwnn_diagnostics** out);
/* The architecture tag the diagnostics prescribe. Pointer has static
 * storage duration. */
GTWNN_API gtwnn_status gtwnn_diagnostics_verdict(const gtwnn_diagnostics* diag,
                                                 const char** out_tag);
/* Any flag pointer may be NULL. */
GTWNN_API gtwnn_status gtwnn_diagnostics_flags(const gtwnn_diagnostics* diag,
                                               int32_t* temporal_significant,
                                               int32_t* spatial_significant,
                                               int32_t* history_inappropriate,
                                               int32_t* isotropic);
/* Writes acf.csv, pacf.csv, spatial_{x,y}.csv, spatial_hd_{x,y}.csv,
 * isotropy.csv and prescription.txt into dir. */
GTWNN_API gtwnn_status gtwnn_diagnostics_write(const gtwnn_diagnostics* diag, const char* dir);
GTWNN_API void gtwnn_diagnostics_free(gtwnn_diagnostics* diag);

/* ------------------------------------------------------------------ */
/* Architecture search                                                 */
/* ------------------------------------------------------------------ */

/* Smallest n with 1 - (1-p)^n reaching the confidence level. */
GTWNN_API gtwnn_status gtwnn_min_trials(double top_fraction, double confidence, int64_t* out);

typedef struct gtwnn_search_options {
  int64_t budget;      /* default 50 */
  int64_t layers_min;  /* 0: the architecture's default range */
  int64_t layers_max;
  int64_t neurons_min; /* default 1 */
  int64_t neurons_max; /* default 15 */
  int32_t per_layer_neurons; /* default 1 */
} gtwnn_search_options;

typedef struct gtwnn_search_report gtwnn_search_report;

GTWNN_API void gtwnn_search_options_init(gtwnn_search_options* opts);
GTWNN_API gtwnn_status gtwnn_search(const char* arch, const gtwnn_dataset* train,
                                    const gtwnn_dataset* test, const gtwnn_search_options* opts,
                                    const gtwnn_train_config* config,
                                    const gtwnn_loss_config* loss, gtwnn_search_report** out);
/* Best row across depths. Any out-pointer may be NULL. */
GTWNN_API gtwnn_status gtwnn_search_report_best(const gtwnn_search_report* report,
                                                int64_t* out_depth, double* out_mse,
                                                double* out_mape, double* out_r2);
/* Writes the per-depth table and the full trial log (wall-time last
 * column). Either path may be NULL to skip that file. */
GTWNN_API gtwnn_status gtwnn_search_report_write(const gtwnn_search_report* report,
                                                 const char* table_csv, const char* trials_csv);
GTWNN_API void gtwnn_search_report_free(gtwnn_search_report* report);

/* ------------------------------------------------------------------ */
/* Evaluation                                                          */
/* ------------------------------------------------------------------ */

/* r2_undefined is set to 1 when the actuals have zero variance (the mean
 * baseline is degenerate); r2 is 0 in that case. */
GTWNN_API gtwnn_status gtwnn_metrics(const double* actual, const double* predicted, int64_t n,
                                     double* out_mse, double* out_mape, double* out_r2,
                                     int32_t* out_r2_undefined);

/* Evaluates the model over the dataset. When out_dir is non-NULL, writes
 * eval_report.csv, the three map CSVs (actual, predicted, diff) and their
 * pixmap renderings into it. With oracle nonzero, predictions are replaced
 * by the true targets (test hook; r2 becomes exactly 1). Metric
 * out-pointers may be NULL. */
GTWNN_API gtwnn_status gtwnn_evaluate(const gtwnn_model* model, const gtwnn_dataset* dataset,
                                      int32_t oracle, const char* out_dir, double* out_mse,
                                      double* out_mape, double* out_r2, int32_t* out_r2_undefined);

/* Per-epoch loss curve CSV (epoch,loss). */
GTWNN_API gtwnn_status gtwnn_write_loss_curve(const char* path, const double* losses, int64_t n);

#ifdef __cplusplus
}
#endif

#endif /* GTWNN_GTWNN_H */
