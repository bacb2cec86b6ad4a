#pragma once

#include "capcurv/errors.hpp"
#include "capcurv/metric_model.hpp"

#include <optional>
#include <string>
#include <vector>

namespace capcurv::harness {

/// Malformed or inconsistent experiment file. Maps to exit code 2.
class ConfigError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

enum class Method { quadrature, variational, series };

const char* to_string(Method m);

struct WarpSpec {
  std::string kind = "sine";  // sine | sinh | linear | polynomial
  double k = 1.0;
  double c = 0.0;
  double a = 0.0;
};

struct ModelSpec {
  std::string name;
  std::string family;  // space_form | warped_product | curvature_polynomial
  int dim = 3;
  double curvature = 0.0;  // space_form
  WarpSpec warp;           // warped_product
  std::vector<CurvatureTensor::Generator> generators;  // zero-based after parsing
  std::optional<double> valid_radius;
};

struct OutputSpec {
  std::string dir = "out";
  std::string csv = "results.csv";
  std::string json = "report.json";
  bool plots = true;
  bool field_dump = false;
};

struct ExperimentSpec {
  std::string name;
  std::vector<ModelSpec> models;
  std::vector<double> lambdas;
  std::vector<double> radii;  // strictly decreasing after parsing
  std::vector<Method> methods;
  int resolution_level = 2;
  OutputSpec output;
  unsigned seed = 1;
  int workers = 1;
};

/// Parses YAML text. Throws ConfigError on syntax or schema problems.
ExperimentSpec parse_experiment(const std::string& yaml_text);
ExperimentSpec load_experiment(const std::string& path);

/// Builds and labels the model. Throws ValidationError / DomainError when the
/// parameters do not describe an admissible model.
MetricModel build_model(const ModelSpec& spec);

/// Everything the runner needs, checked up front: models validate, every
/// lambda * r stays inside the validity radius, each method is available for
/// each model. Throws ConfigError with a message naming the offending entry.
std::vector<MetricModel> validate_experiment(const ExperimentSpec& spec);

}  // namespace capcurv::harness
