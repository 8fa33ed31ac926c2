#pragma once

#include <string>

#include "core/diagnostics.hpp"
#include "core/eval.hpp"
#include "core/matrix.hpp"
#include "core/nas.hpp"

namespace gtwnn {

// All writers emit locale-independent, byte-stable text (shortest
// round-trip float formatting); failures to open or write are io errors.

// Correlation curve as CSV: lag,value,band.
void write_curve_csv(const std::string& path, const CorrelationCurve& curve);

// Trial log as CSV: arch,hidden_layers,neurons,objective,mape,r2,seed,
// wall_time_s. The wall-time column is the only non-deterministic field and
// deliberately sits last. Neuron widths are joined with ';'.
void write_trial_log_csv(const std::string& path, const std::vector<TrialResult>& trials);

// Per-depth best table as CSV: depth,arch,neurons,mse,mape,r2.
void write_search_report_csv(const std::string& path, const SearchReport& report);

// Metrics as CSV rows metric,value; an undefined r-squared is written as
// the literal string "undefined".
void write_eval_report_csv(const std::string& path, const Metrics& metrics);

// Matrix as a CSV of rows in grid order (row 0 first).
void write_matrix_csv(const std::string& path, const Matrix& m);

// Matrix as a binary portable pixmap, north-up: the last grid row (highest
// northing) is the top image row. Grayscale maps [min,max] to black..white.
void write_matrix_ppm_gray(const std::string& path, const Matrix& m);

// Diverging blue-white-red pixmap centered at zero, symmetric range
// [-max|v|, +max|v|]; north-up as above.
void write_matrix_ppm_diverging(const std::string& path, const Matrix& m);

// Isotropy deviations as CSV: transform,deviation; then an `isotropic` row
// with true/false and a `threshold` row.
void write_isotropy_csv(const std::string& path, const IsotropyReport& report);

// Prescription verdict as key=value lines.
void write_prescription(const std::string& path, const Prescription& p);

// Per-epoch training losses as CSV: epoch,loss.
void write_loss_curve_csv(const std::string& path, const std::vector<double>& epoch_losses);

}  // namespace gtwnn
