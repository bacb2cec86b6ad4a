#pragma once

#include "capcurv/ball_geometry.hpp"
#include "capcurv/curvature_fit.hpp"
#include "capcurv/harness/config.hpp"
#include "capcurv/variational.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace capcurv::harness {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitSolver = 3;

/// Command-line overrides of the experiment file.
struct RunOptions {
  std::optional<int> workers;
  std::optional<std::string> out_dir;
  std::optional<int> resolution_level;
  /// Write measured runtimes into the CSV. Off by default so that reruns
  /// reproduce the CSV byte for byte; the JSON report always has them.
  bool timing = false;
};

/// Applies the overrides to a parsed spec.
ExperimentSpec apply_overrides(ExperimentSpec spec, const RunOptions& options);

struct ResultRow {
  std::string model;
  int n = 3;
  double lambda = 0.0;
  double r = 0.0;
  std::string method;  // quadrature | szego_bound | variational | series
  double capacity = 0.0;
  double c_n = 0.0;
  double deficit = 0.0;
  double predicted_capacity = 0.0;
  double predicted_deficit_coeff = 0.0;
  double S_true = 0.0;
  std::optional<double> S_hat;
  double error_estimate = 0.0;
  double runtime_ms = 0.0;
};

/// Fixed CSV column order.
inline constexpr const char* kCsvHeader =
    "model,n,lambda,r,method,capacity,c_n,deficit,predicted_capacity,predicted_deficit_coeff,"
    "S_true,S_hat,error_estimate,runtime_ms";

/// Orders rows by model, lambda, descending r, method.
void sort_rows(std::vector<ResultRow>& rows);

std::string rows_to_csv(const std::vector<ResultRow>& rows, bool timing);

struct FitRecord {
  std::string model;
  double lambda = 0.0;
  std::string method;
  FitResult fit;
  SignDecision sign;
};

struct InvariantCheck {
  std::string name;
  bool passed = true;
  std::string detail;
};

struct DruetRecord {
  std::string model;
  DruetScan scan;
};

struct FieldDump {
  std::string file;
  DiscreteField field;
};

struct RunReport {
  ExperimentSpec spec;
  std::vector<MetricModel> models;
  std::vector<ResultRow> rows;  // sorted
  std::vector<FitRecord> fits;
  std::vector<InvariantCheck> checks;
  std::vector<DruetRecord> druet;
  std::string resolution;  // describe() of the variational resolution
  std::vector<FieldDump> fields;  // only when output.field_dump is set
};

/// Computes every (model, lambda, r, method) task, the fits and the
/// invariant checks. Writes nothing. Throws SolverError on solver failure.
RunReport execute(const ExperimentSpec& spec, const std::vector<MetricModel>& models);

/// Writes the CSV, the JSON report, plot files and field dumps; returns the
/// paths written.
std::vector<std::string> write_outputs(const RunReport& report, bool timing);

/// `run <config>` end to end, with exit codes 0 / 2 (validation, nothing
/// written) / 3 (solver failure, nothing written).
int run_command(const std::string& config_path, const RunOptions& options, std::ostream& log,
                std::ostream& err);

/// `scan-conjecture <config>`: per model and lambda, the r^2 fit and residual
/// r^4 coefficient on a scalar-flat model. Models with S(p) != 0 are a
/// validation failure.
int scan_conjecture_command(const std::string& config_path, const RunOptions& options,
                            std::ostream& log, std::ostream& err);

}  // namespace capcurv::harness
