#include "capcurv/harness/format.hpp"
#include "capcurv/harness/runner.hpp"

#include "json_helpers.hpp"

#include <cmath>
#include <filesystem>
#include <ostream>
#include <sstream>

namespace capcurv::harness {

namespace fs = std::filesystem;
using detail::Json;

namespace {

struct ModelScan {
  std::string model;
  std::vector<ConjectureRow> rows;
};

constexpr const char* kConjectureHeader =
    "model,n,lambda,kappa_hat,extrapolation_gap,noise_floor,r2_status,zero_flag,dead_zone,"
    "r4_coefficient,ls_a2,residual_norm,method";

}  // namespace

int scan_conjecture_command(const std::string& config_path, const RunOptions& options,
                            std::ostream& log, std::ostream& err) {
  ExperimentSpec spec;
  std::vector<MetricModel> models;
  try {
    spec = apply_overrides(load_experiment(config_path), options);
    models = validate_experiment(spec);
    for (const auto& m : models) {
      if (std::abs(m.scalar_curvature()) > 1e-12) {
        std::ostringstream msg;
        msg << "model '" << m.label() << "' has S(p) = " << format_number(m.scalar_curvature())
            << "; the conjecture scan needs a scalar-flat model";
        throw ConfigError(msg.str());
      }
    }
    if (spec.radii.size() < 3) throw ConfigError("the conjecture scan needs at least 3 radii");
  } catch (const std::logic_error& e) {
    err << "validation error: " << e.what() << "\n";
    return kExitValidation;
  }

  CollectOptions collect;
  collect.resolution = Resolution::level(spec.resolution_level);
  collect.workers = spec.workers;

  std::vector<ModelScan> scans;
  try {
    for (const auto& m : models) scans.push_back({m.label(), conjecture_scan(m, spec.lambdas, spec.radii, collect)});
  } catch (const SolverError& e) {
    err << "solver failure: " << e.what() << " (iterations " << e.iterations() << ")\n";
    return kExitSolver;
  } catch (const std::logic_error& e) {
    err << "validation error: " << e.what() << "\n";
    return kExitValidation;
  }

  std::ostringstream csv;
  csv << kConjectureHeader << "\n";
  Json report;
  report["name"] = spec.name;
  report["radii"] = spec.radii;
  report["resolution"] = collect.resolution.describe();
  Json entries = Json::array();
  for (std::size_t i = 0; i < scans.size(); ++i) {
    const MetricModel& m = models[i];
    for (const auto& row : scans[i].rows) {
      const char* method = row.fit.from_variational ? "variational" : "quadrature";
      csv << csv_field(m.label()) << ',' << m.dim() << ',' << format_number(row.lambda) << ','
          << format_number(row.fit.kappa_hat) << ',' << format_number(row.fit.extrapolation_gap)
          << ',' << format_number(row.fit.noise_floor) << ',' << to_string(row.r2_status.call)
          << ',' << (row.r2_status.zero_flag ? "true" : "false") << ','
          << format_number(row.r2_status.dead_zone) << ',' << format_number(row.r4_coefficient)
          << ',' << format_number(row.fit.ls_a2) << ',' << format_number(row.fit.residual_norm)
          << ',' << method << "\n";
      Json e;
      e["model"] = m.label();
      e["lambda"] = row.lambda;
      e["method"] = method;
      e["fit"] = detail::fit_json(row.fit);
      e["r2_status"] = detail::sign_json(row.r2_status);
      e["r4_coefficient"] = row.r4_coefficient;
      Json samples = Json::array();
      for (const auto& s : row.samples) samples.push_back(detail::sample_json(s));
      e["samples"] = samples;
      entries.push_back(e);
    }
  }
  report["scans"] = entries;
  Json ms = Json::array();
  for (const auto& m : models) ms.push_back(detail::model_json(m));
  report["models"] = ms;

  try {
    const fs::path dir(spec.output.dir);
    fs::create_directories(dir);
    detail::write_text(dir / "conjecture.csv", csv.str());
    detail::write_text(dir / "conjecture.json", report.dump(2) + "\n");
    log << "scan-conjecture '" << spec.name << "': wrote " << (dir / "conjecture.csv").string()
        << " and " << (dir / "conjecture.json").string() << "\n";
  } catch (const std::exception& e) {
    err << "output error: " << e.what() << "\n";
    return kExitFailed;
  }
  for (std::size_t i = 0; i < scans.size(); ++i) {
    for (const auto& row : scans[i].rows) {
      log << "  " << scans[i].model << " lambda=" << format_number(row.lambda)
          << ": kappa_hat=" << format_number(row.fit.kappa_hat) << " ("
          << to_string(row.r2_status.call) << (row.r2_status.zero_flag ? ", zero" : "")
          << "), r4 coefficient " << format_number(row.r4_coefficient) << "\n";
    }
  }
  return kExitOk;
}

}  // namespace capcurv::harness
