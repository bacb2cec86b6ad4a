#include "capcurv/harness/runner.hpp"

#include "capcurv/ball_geometry.hpp"
#include "capcurv/capacity.hpp"
#include "capcurv/expansion.hpp"
#include "capcurv/harness/format.hpp"
#include "capcurv/parallel.hpp"
#include "capcurv/variational.hpp"

#include "json_helpers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <map>
#include <ostream>
#include <sstream>
#include <tuple>

namespace capcurv::harness {

namespace fs = std::filesystem;
using detail::Json;

namespace {

struct Task {
  std::size_t model;
  double lambda;
  double r;
  Method method;
};

struct TaskOutput {
  ResultRow row;
  std::optional<DiscreteField> field;
};

// tolerance on the quadrature path's error budget
constexpr double kQuadratureErrorBudget = 1e-10;
// szego integral vs symmetric quadrature on rotationally symmetric models
constexpr double kSymmetricAgreement = 1e-10;
// solver stopping tolerance folded into variational comparisons
constexpr double kSolverSlack = 1e-9;

TaskOutput run_task(const MetricModel& model, const Task& t, const Resolution& resolution,
                    bool keep_field) {
  const auto start = std::chrono::steady_clock::now();
  const int n = model.dim();
  const double S = model.scalar_curvature();
  const CapacityQuery query{model, t.r, t.lambda};
  const ExpansionPrediction pred = predicted_capacity(n, t.lambda, t.r, S);

  TaskOutput out;
  ResultRow& row = out.row;
  row.model = model.label();
  row.n = n;
  row.lambda = t.lambda;
  row.r = t.r;
  row.c_n = pred.euclidean_capacity;
  row.predicted_capacity = pred.predicted_capacity;
  row.predicted_deficit_coeff = pred.deficit_coefficient;
  row.S_true = S;

  switch (t.method) {
    case Method::quadrature: {
      const CapacityResult c =
          model.rotationally_symmetric() ? symmetric_capacity(query) : szego_upper_bound(query);
      row.method = model.rotationally_symmetric() ? "quadrature" : "szego_bound";
      row.capacity = c.value;
      row.error_estimate = c.error_estimate;
      break;
    }
    case Method::variational: {
      VariationalResult v = variational_capacity(query, resolution);
      row.method = "variational";
      row.capacity = v.capacity.value;
      row.error_estimate = v.capacity.error_estimate;
      if (keep_field) out.field = std::move(v.field);
      break;
    }
    case Method::series: {
      row.method = "series";
      row.capacity = pred.predicted_capacity;
      row.error_estimate = bound_predictions(n, t.lambda, t.r, S).window;
      break;
    }
  }
  row.deficit = 1.0 - row.capacity / row.c_n;
  row.runtime_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return out;
}

bool sphere_areas_available(const MetricModel& m) {
  return m.rotationally_symmetric() || m.dim() == 3;
}

std::string describe_failures(const std::vector<std::string>& items) {
  if (items.empty()) return "ok";
  std::ostringstream out;
  out << items.size() << " violation(s); first: " << items.front();
  return out.str();
}

std::string where(const ResultRow& r) {
  std::ostringstream out;
  out << r.model << " lambda=" << format_number(r.lambda) << " r=" << format_number(r.r) << " "
      << r.method;
  return out.str();
}

std::vector<InvariantCheck> invariant_checks(const std::vector<ResultRow>& rows,
                                             const std::vector<MetricModel>& models,
                                             const std::map<std::tuple<std::string, double, double>, CapacityResult>& szego) {
  std::vector<InvariantCheck> checks;
  std::map<std::string, const MetricModel*> by_label;
  for (const auto& m : models) by_label[m.label()] = &m;

  {
    std::vector<std::string> bad;
    for (const auto& r : rows) {
      for (double v : {r.lambda, r.r, r.capacity, r.c_n, r.deficit, r.predicted_capacity,
                       r.predicted_deficit_coeff, r.S_true, r.error_estimate}) {
        if (!std::isfinite(v)) {
          bad.push_back(where(r));
          break;
        }
      }
    }
    checks.push_back({"finite_fields", bad.empty(), describe_failures(bad)});
  }
  {
    std::vector<std::string> bad;
    for (const auto& r : rows) {
      if (r.method == "quadrature" && r.error_estimate > kQuadratureErrorBudget * r.capacity) {
        bad.push_back(where(r));
      }
    }
    checks.push_back({"quadrature_error_budget", bad.empty(), describe_failures(bad)});
  }
  {
    // szego >= best estimate - error; symmetric models: variational within
    // its error estimate of the exact value
    std::vector<std::string> bad;
    int compared = 0;
    for (const auto& r : rows) {
      if (r.method != "variational" && r.method != "quadrature") continue;
      const auto it = szego.find({r.model, r.lambda, r.r});
      if (it == szego.end()) continue;
      ++compared;
      const double bound = it->second.value;
      if (r.method == "quadrature") {
        // two independent integrations of the same radial formula
        if (std::abs(r.capacity - bound) > kSymmetricAgreement * bound) {
          bad.push_back(where(r) + " (szego vs quadrature)");
        }
        continue;
      }
      if (bound < r.capacity - r.error_estimate - kSolverSlack * r.capacity) bad.push_back(where(r));
      if (by_label.at(r.model)->rotationally_symmetric() &&
          std::abs(r.capacity - bound) > r.error_estimate + kSolverSlack * bound) {
        bad.push_back(where(r) + " (symmetric agreement)");
      }
    }
    std::ostringstream detail;
    detail << compared << " value(s) compared; " << describe_failures(bad);
    checks.push_back({"bound_ordering", bad.empty(), detail.str()});
  }
  {
    std::vector<std::string> bad;
    std::map<std::pair<std::string, double>, std::vector<const ResultRow*>> by_lambda;
    std::map<std::pair<std::string, double>, std::vector<const ResultRow*>> by_r;
    for (const auto& r : rows) {
      if (r.method != "quadrature") continue;
      by_lambda[{r.model, r.r}].push_back(&r);
      by_r[{r.model, r.lambda}].push_back(&r);
    }
    for (auto& [key, v] : by_lambda) {
      std::sort(v.begin(), v.end(), [](auto a, auto b) { return a->lambda < b->lambda; });
      for (std::size_t i = 1; i < v.size(); ++i) {
        if (!(v[i]->capacity < v[i - 1]->capacity)) bad.push_back(where(*v[i]) + " (lambda)");
      }
    }
    for (auto& [key, v] : by_r) {
      std::sort(v.begin(), v.end(), [](auto a, auto b) { return a->r < b->r; });
      for (std::size_t i = 1; i < v.size(); ++i) {
        if (!(v[i]->capacity > v[i - 1]->capacity)) bad.push_back(where(*v[i]) + " (r)");
      }
    }
    checks.push_back({"monotonicity", bad.empty(), describe_failures(bad)});
  }
  {
    // the window constant was calibrated on space forms only
    std::vector<std::string> bad;
    int compared = 0;
    for (const auto& r : rows) {
      if (r.method != "quadrature") continue;
      const MetricModel& m = *by_label.at(r.model);
      if (!std::holds_alternative<SpaceForm>(m.presentation())) continue;
      ++compared;
      const BoundPredictions b = bound_predictions(r.n, r.lambda, r.r, r.S_true);
      if (std::abs(r.capacity - b.upper_central) > b.window) bad.push_back(where(r));
    }
    std::ostringstream detail;
    detail << compared << " space-form value(s) compared; " << describe_failures(bad);
    checks.push_back({"sandwich_window", bad.empty(), detail.str()});
  }
  {
    std::vector<std::string> bad;
    for (const auto& m : models) {
      if (!m.diagnostics().accepted) bad.push_back(m.label());
    }
    checks.push_back({"model_validation", bad.empty(), describe_failures(bad)});
  }
  return checks;
}

Json row_json(const ResultRow& r) {
  Json j;
  j["model"] = r.model;
  j["n"] = r.n;
  j["lambda"] = r.lambda;
  j["r"] = r.r;
  j["method"] = r.method;
  j["capacity"] = r.capacity;
  j["c_n"] = r.c_n;
  j["deficit"] = r.deficit;
  j["predicted_capacity"] = r.predicted_capacity;
  j["predicted_deficit_coeff"] = r.predicted_deficit_coeff;
  j["S_true"] = r.S_true;
  j["S_hat"] = r.S_hat ? Json(*r.S_hat) : Json(nullptr);
  j["error_estimate"] = r.error_estimate;
  j["runtime_ms"] = r.runtime_ms;
  return j;
}

Json report_json(const RunReport& rep) {
  Json j;
  j["name"] = rep.spec.name;
  Json cfg;
  cfg["lambdas"] = rep.spec.lambdas;
  cfg["radii"] = rep.spec.radii;
  Json methods = Json::array();
  for (Method m : rep.spec.methods) methods.push_back(to_string(m));
  cfg["methods"] = methods;
  cfg["resolution_level"] = rep.spec.resolution_level;
  cfg["resolution"] = rep.resolution;
  cfg["seed"] = rep.spec.seed;
  cfg["workers"] = rep.spec.workers;
  j["config"] = cfg;
  Json models = Json::array();
  for (const auto& m : rep.models) models.push_back(detail::model_json(m));
  j["models"] = models;
  Json rows = Json::array();
  for (const auto& r : rep.rows) rows.push_back(row_json(r));
  j["rows"] = rows;
  Json fits = Json::array();
  for (const auto& f : rep.fits) {
    Json e;
    e["model"] = f.model;
    e["lambda"] = f.lambda;
    e["method"] = f.method;
    e["fit"] = detail::fit_json(f.fit);
    e["sign"] = detail::sign_json(f.sign);
    fits.push_back(e);
  }
  j["fits"] = fits;
  Json checks = Json::array();
  bool all = true;
  for (const auto& c : rep.checks) {
    checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    all = all && c.passed;
  }
  j["invariants"] = checks;
  j["all_invariants_passed"] = all;
  Json druet = Json::array();
  for (const auto& d : rep.druet) {
    druet.push_back({{"model", d.model},
                     {"epsilon", 0.1},
                     {"radii", d.scan.radii},
                     {"margins", d.scan.margins},
                     {"threshold_radius", d.scan.threshold_radius}});
  }
  j["druet"] = druet;
  return j;
}

std::string plot_text(const FitRecord* fit, const std::vector<const ResultRow*>& group) {
  std::ostringstream out;
  const ResultRow& first = *group.front();
  out << "# model=" << first.model << " n=" << first.n << " lambda=" << format_number(first.lambda)
      << " method=" << first.method << "\n";
  out << "# predicted " << format_number(first.predicted_deficit_coeff) << "\n";
  if (fit) out << "# fitted " << format_number(fit->fit.kappa_hat) << "\n";
  out << "# r deficit_over_r2\n";
  for (const ResultRow* r : group) {
    out << format_number(r->r) << " " << format_number(r->deficit / (r->r * r->r)) << "\n";
  }
  return out.str();
}

}  // namespace

ExperimentSpec apply_overrides(ExperimentSpec spec, const RunOptions& options) {
  if (options.workers) spec.workers = *options.workers;
  if (options.out_dir) spec.output.dir = *options.out_dir;
  if (options.resolution_level) spec.resolution_level = *options.resolution_level;
  return spec;
}

void sort_rows(std::vector<ResultRow>& rows) {
  std::sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
    return std::make_tuple(std::cref(a.model), a.lambda, -a.r, std::cref(a.method)) <
           std::make_tuple(std::cref(b.model), b.lambda, -b.r, std::cref(b.method));
  });
}

std::string rows_to_csv(const std::vector<ResultRow>& rows, bool timing) {
  std::ostringstream out;
  out << kCsvHeader << "\n";
  for (const auto& r : rows) {
    out << csv_field(r.model) << ',' << r.n << ',' << format_number(r.lambda) << ','
        << format_number(r.r) << ',' << r.method << ',' << format_number(r.capacity) << ','
        << format_number(r.c_n) << ',' << format_number(r.deficit) << ','
        << format_number(r.predicted_capacity) << ',' << format_number(r.predicted_deficit_coeff)
        << ',' << format_number(r.S_true) << ',' << (r.S_hat ? format_number(*r.S_hat) : "")
        << ',' << format_number(r.error_estimate) << ','
        << (timing ? format_number(r.runtime_ms) : "0") << "\n";
  }
  return out.str();
}

RunReport execute(const ExperimentSpec& spec, const std::vector<MetricModel>& models) {
  const Resolution resolution = Resolution::level(spec.resolution_level);
  std::vector<Task> tasks;
  for (std::size_t m = 0; m < models.size(); ++m) {
    for (double lambda : spec.lambdas) {
      for (double r : spec.radii) {
        for (Method method : spec.methods) tasks.push_back({m, lambda, r, method});
      }
    }
  }
  std::vector<TaskOutput> outputs(tasks.size());
  parallel_for(tasks.size(), spec.workers, [&](std::size_t i) {
    outputs[i] = run_task(models[tasks[i].model], tasks[i], resolution, spec.output.field_dump);
  });

  // Szego bounds for every point with a variational or symmetric quadrature value
  std::map<std::tuple<std::string, double, double>, CapacityResult> szego;
  for (const auto& t : tasks) {
    const MetricModel& m = models[t.model];
    const bool wanted = t.method == Method::variational ||
                        (t.method == Method::quadrature && m.rotationally_symmetric());
    if (!wanted || !sphere_areas_available(m)) continue;
    szego.emplace(std::make_tuple(models[t.model].label(), t.lambda, t.r),
                  szego_upper_bound({models[t.model], t.r, t.lambda}));
  }

  RunReport rep;
  rep.spec = spec;
  rep.models = models;
  rep.resolution = resolution.describe();
  for (std::size_t i = 0; i < outputs.size(); ++i) {
    rep.rows.push_back(outputs[i].row);
    if (outputs[i].field) {
      const Task& t = tasks[i];
      rep.fields.push_back({"field_" + file_token(models[t.model].label()) + "_lambda" +
                                format_number(t.lambda) + "_r" + format_number(t.r) + ".csv",
                            std::move(*outputs[i].field)});
    }
  }
  sort_rows(rep.rows);

  // fits per (model, lambda, method) over the descending radii
  std::map<std::tuple<std::string, double, std::string>, std::vector<ResultRow*>> groups;
  for (auto& r : rep.rows) groups[{r.model, r.lambda, r.method}].push_back(&r);
  for (auto& [key, group] : groups) {
    std::vector<DeficitSample> samples;
    for (const ResultRow* r : group) {
      DeficitSample s;
      s.r = r->r;
      s.deficit = r->deficit;
      s.method = r->method == "variational" ? CapacityMethod::variational
                                            : CapacityMethod::symmetric_quadrature;
      s.error_estimate = r->error_estimate / r->c_n;
      samples.push_back(s);
    }
    try {
      FitRecord rec;
      rec.model = std::get<0>(key);
      rec.lambda = std::get<1>(key);
      rec.method = std::get<2>(key);
      rec.fit = fit_deficit_coefficient(samples, group.front()->n, rec.lambda);
      rec.sign = nonnegativity_detector(rec.fit);
      for (ResultRow* r : group) r->S_hat = rec.fit.S_hat;
      rep.fits.push_back(std::move(rec));
    } catch (const PreconditionError&) {
      // too few radii or no (r, r/2) pair: no fit for this group
    }
  }

  rep.checks = invariant_checks(rep.rows, models, szego);

  for (const auto& m : models) {
    if (!sphere_areas_available(m)) continue;
    const double r_max = std::min(spec.radii.front(), 0.5 * m.validity_radius());
    rep.druet.push_back({m.label(), druet_scan(m, 0.1, r_max, 8)});
  }

  return rep;
}

std::vector<std::string> write_outputs(const RunReport& rep, bool timing) {
  const fs::path dir(rep.spec.output.dir);
  fs::create_directories(dir);
  std::vector<std::string> written;
  const fs::path csv = dir / rep.spec.output.csv;
  detail::write_text(csv, rows_to_csv(rep.rows, timing));
  written.push_back(csv.string());
  const fs::path json = dir / rep.spec.output.json;
  detail::write_text(json, report_json(rep).dump(2) + "\n");
  written.push_back(json.string());

  if (rep.spec.output.plots) {
    std::map<std::tuple<std::string, double, std::string>, std::vector<const ResultRow*>> groups;
    for (const auto& r : rep.rows) groups[{r.model, r.lambda, r.method}].push_back(&r);
    for (const auto& [key, group] : groups) {
      const FitRecord* fit = nullptr;
      for (const auto& f : rep.fits) {
        if (f.model == std::get<0>(key) && f.lambda == std::get<1>(key) && f.method == std::get<2>(key)) {
          fit = &f;
        }
      }
      const fs::path p = dir / ("plot_" + file_token(std::get<0>(key)) + "_lambda" +
                                format_number(std::get<1>(key)) + "_" + std::get<2>(key) + ".dat");
      detail::write_text(p, plot_text(fit, group));
      written.push_back(p.string());
    }
  }
  for (const auto& f : rep.fields) {
    const fs::path p = dir / f.file;
    f.field.write_csv(p.string());
    written.push_back(p.string());
  }
  return written;
}


int run_command(const std::string& config_path, const RunOptions& options, std::ostream& log,
                std::ostream& err) {
  ExperimentSpec spec;
  std::vector<MetricModel> models;
  try {
    spec = apply_overrides(load_experiment(config_path), options);
    models = validate_experiment(spec);
  } catch (const std::logic_error& e) {
    err << "validation error: " << e.what() << "\n";
    return kExitValidation;
  }

  RunReport rep;
  try {
    rep = execute(spec, models);
  } catch (const SolverError& e) {
    err << "solver failure: " << e.what() << " (iterations " << e.iterations()
        << ", last relative change " << e.last_relative_change() << ")\n";
    return kExitSolver;
  } catch (const std::logic_error& e) {
    err << "validation error: " << e.what() << "\n";
    return kExitValidation;
  }

  std::vector<std::string> written;
  try {
    written = write_outputs(rep, options.timing);
  } catch (const std::exception& e) {
    err << "output error: " << e.what() << "\n";
    return kExitFailed;
  }
  log << "run '" << spec.name << "': " << rep.rows.size() << " rows, " << rep.fits.size()
      << " fit(s)\n";
  for (const auto& c : rep.checks) {
    log << "  invariant " << c.name << ": " << (c.passed ? "pass" : "FAIL") << " (" << c.detail
        << ")\n";
  }
  for (const auto& w : written) log << "  wrote " << w << "\n";
  return kExitOk;
}

}  // namespace capcurv::harness
