#include "capcurv/harness/config.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace capcurv::harness {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ConfigError(where + ": " + what);
}

void allow_keys(const YAML::Node& node, const std::string& where,
                std::initializer_list<const char*> keys) {
  if (!node.IsMap()) fail(where, "expected a mapping");
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (std::none_of(keys.begin(), keys.end(), [&](const char* k) { return key == k; })) {
      fail(where, "unknown key '" + key + "'");
    }
  }
}

template <class T>
T scalar(const YAML::Node& node, const std::string& where) {
  if (!node.IsScalar()) fail(where, "expected a scalar");
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    fail(where, "cannot read '" + node.Scalar() + "'");
  }
}

std::vector<double> number_list(const YAML::Node& node, const std::string& where) {
  std::vector<double> out;
  if (node.IsScalar()) {
    out.push_back(scalar<double>(node, where));
  } else if (node.IsSequence()) {
    for (std::size_t i = 0; i < node.size(); ++i) {
      out.push_back(scalar<double>(node[i], where + "[" + std::to_string(i) + "]"));
    }
  } else {
    fail(where, "expected a number or a list of numbers");
  }
  return out;
}

std::vector<double> parse_radii(const YAML::Node& node) {
  if (node.IsMap()) {
    allow_keys(node, "radii", {"dyadic"});
    const YAML::Node d = node["dyadic"];
    allow_keys(d, "radii.dyadic", {"r0", "levels"});
    if (!d["r0"] || !d["levels"]) fail("radii.dyadic", "needs r0 and levels");
    const double r0 = scalar<double>(d["r0"], "radii.dyadic.r0");
    const int levels = scalar<int>(d["levels"], "radii.dyadic.levels");
    if (levels < 1 || levels > 30) fail("radii.dyadic.levels", "must be in [1, 30]");
    std::vector<double> r;
    for (int k = 0; k < levels; ++k) r.push_back(std::ldexp(r0, -k));
    return r;
  }
  std::vector<double> r = number_list(node, "radii");
  std::sort(r.begin(), r.end(), std::greater<>());
  if (std::adjacent_find(r.begin(), r.end()) != r.end()) fail("radii", "duplicate radius");
  return r;
}

ModelSpec parse_model(const YAML::Node& node, const std::string& where) {
  allow_keys(node, where,
             {"name", "family", "dim", "curvature", "warp", "generators", "valid_radius"});
  ModelSpec m;
  if (!node["family"]) fail(where, "missing 'family'");
  m.family = scalar<std::string>(node["family"], where + ".family");
  if (node["name"]) m.name = scalar<std::string>(node["name"], where + ".name");
  if (node["dim"]) m.dim = scalar<int>(node["dim"], where + ".dim");
  if (node["valid_radius"]) m.valid_radius = scalar<double>(node["valid_radius"], where + ".valid_radius");

  if (m.family == "space_form") {
    if (!node["curvature"]) fail(where, "space_form needs 'curvature'");
    m.curvature = scalar<double>(node["curvature"], where + ".curvature");
  } else if (m.family == "warped_product") {
    const YAML::Node w = node["warp"];
    if (!w) fail(where, "warped_product needs 'warp'");
    allow_keys(w, where + ".warp", {"kind", "k", "c", "a"});
    if (!w["kind"]) fail(where + ".warp", "missing 'kind'");
    m.warp.kind = scalar<std::string>(w["kind"], where + ".warp.kind");
    if (w["k"]) m.warp.k = scalar<double>(w["k"], where + ".warp.k");
    if (w["c"]) m.warp.c = scalar<double>(w["c"], where + ".warp.c");
    if (w["a"]) m.warp.a = scalar<double>(w["a"], where + ".warp.a");
  } else if (m.family == "curvature_polynomial") {
    const YAML::Node g = node["generators"];
    if (g) {
      if (!g.IsSequence()) fail(where + ".generators", "expected a list of [i, k, j, l, value]");
      for (std::size_t i = 0; i < g.size(); ++i) {
        const std::string at = where + ".generators[" + std::to_string(i) + "]";
        if (!g[i].IsSequence() || g[i].size() != 5) fail(at, "expected [i, k, j, l, value]");
        int idx[4];
        for (int t = 0; t < 4; ++t) {
          idx[t] = scalar<int>(g[i][t], at);
          if (idx[t] < 1 || idx[t] > m.dim) fail(at, "indices are 1-based and at most dim");
        }
        m.generators.push_back({idx[0] - 1, idx[1] - 1, idx[2] - 1, idx[3] - 1,
                                scalar<double>(g[i][4], at)});
      }
    }
  } else {
    fail(where + ".family", "unknown family '" + m.family + "'");
  }
  return m;
}

Method parse_method(const std::string& s) {
  if (s == "quadrature") return Method::quadrature;
  if (s == "variational") return Method::variational;
  if (s == "series") return Method::series;
  fail("methods", "unknown method '" + s + "'");
}

}  // namespace

const char* to_string(Method m) {
  switch (m) {
    case Method::quadrature: return "quadrature";
    case Method::variational: return "variational";
    case Method::series: return "series";
  }
  return "?";
}

ExperimentSpec parse_experiment(const std::string& yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("config syntax: ") + e.what());
  }
  allow_keys(root, "config",
             {"name", "model", "models", "lambdas", "radii", "methods", "resolution", "output",
              "seed", "workers"});
  ExperimentSpec spec;
  if (!root["name"]) fail("config", "missing 'name'");
  spec.name = scalar<std::string>(root["name"], "name");

  if (root["model"] && root["models"]) fail("config", "give either 'model' or 'models'");
  if (root["model"]) {
    spec.models.push_back(parse_model(root["model"], "model"));
  } else if (root["models"]) {
    const YAML::Node ms = root["models"];
    if (!ms.IsSequence()) fail("models", "expected a list");
    for (std::size_t i = 0; i < ms.size(); ++i) {
      spec.models.push_back(parse_model(ms[i], "models[" + std::to_string(i) + "]"));
    }
  } else {
    fail("config", "missing 'model'");
  }

  if (!root["lambdas"]) fail("config", "missing 'lambdas'");
  spec.lambdas = number_list(root["lambdas"], "lambdas");
  std::sort(spec.lambdas.begin(), spec.lambdas.end());
  if (std::adjacent_find(spec.lambdas.begin(), spec.lambdas.end()) != spec.lambdas.end()) {
    fail("lambdas", "duplicate value");
  }
  if (!root["radii"]) fail("config", "missing 'radii'");
  spec.radii = parse_radii(root["radii"]);

  if (root["methods"]) {
    const YAML::Node ms = root["methods"];
    if (ms.IsScalar()) {
      spec.methods.push_back(parse_method(ms.Scalar()));
    } else if (ms.IsSequence()) {
      for (const auto& m : ms) spec.methods.push_back(parse_method(scalar<std::string>(m, "methods")));
    } else {
      fail("methods", "expected a name or a list of names");
    }
  } else {
    spec.methods.push_back(Method::quadrature);
  }
  std::sort(spec.methods.begin(), spec.methods.end());
  spec.methods.erase(std::unique(spec.methods.begin(), spec.methods.end()), spec.methods.end());

  if (root["resolution"]) spec.resolution_level = scalar<int>(root["resolution"], "resolution");
  if (root["seed"]) spec.seed = scalar<unsigned>(root["seed"], "seed");
  if (root["workers"]) spec.workers = scalar<int>(root["workers"], "workers");
  if (const YAML::Node out = root["output"]) {
    allow_keys(out, "output", {"dir", "csv", "json", "plots", "field_dump"});
    if (out["dir"]) spec.output.dir = scalar<std::string>(out["dir"], "output.dir");
    if (out["csv"]) spec.output.csv = scalar<std::string>(out["csv"], "output.csv");
    if (out["json"]) spec.output.json = scalar<std::string>(out["json"], "output.json");
    if (out["plots"]) spec.output.plots = scalar<bool>(out["plots"], "output.plots");
    if (out["field_dump"]) spec.output.field_dump = scalar<bool>(out["field_dump"], "output.field_dump");
  }
  return spec;
}

ExperimentSpec load_experiment(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_experiment(text.str());
}

MetricModel build_model(const ModelSpec& spec) {
  auto make = [&]() -> MetricModel {
    if (spec.family == "space_form") {
      if (spec.valid_radius) throw ConfigError("space_form takes no valid_radius");
      return MetricModel::space_form(spec.dim, spec.curvature);
    }
    if (spec.family == "warped_product") {
      const WarpSpec& w = spec.warp;
      std::optional<Warp> warp;
      if (w.kind == "sine") warp = Warp::sine(w.k);
      else if (w.kind == "sinh") warp = Warp::sinh(w.k);
      else if (w.kind == "linear") warp = Warp::linear();
      else if (w.kind == "polynomial") warp = Warp::polynomial(w.c, w.a);
      else throw ConfigError("unknown warp kind '" + w.kind + "'");
      return MetricModel::warped_product(spec.dim, *warp, spec.valid_radius);
    }
    if (spec.family == "curvature_polynomial") {
      return MetricModel::curvature_polynomial(
          CurvatureTensor::from_generators(spec.dim, spec.generators), spec.valid_radius);
    }
    throw ConfigError("unknown family '" + spec.family + "'");
  };
  MetricModel m = make();
  if (!spec.name.empty()) m.set_label(spec.name);
  return m;
}

std::vector<MetricModel> validate_experiment(const ExperimentSpec& spec) {
  if (spec.name.empty()) fail("name", "must not be empty");
  if (spec.models.empty()) fail("models", "at least one model is required");
  if (spec.lambdas.empty()) fail("lambdas", "at least one value is required");
  if (spec.radii.empty()) fail("radii", "at least one value is required");
  if (spec.methods.empty()) fail("methods", "at least one method is required");
  for (double l : spec.lambdas) {
    if (!std::isfinite(l) || !(l > 1.0)) {
      std::ostringstream msg;
      msg << "lambda must be > 1, got " << l;
      fail("lambdas", msg.str());
    }
  }
  for (double r : spec.radii) {
    if (!std::isfinite(r) || !(r > 0.0)) fail("radii", "radii must be positive and finite");
  }
  if (spec.resolution_level < 0 || spec.resolution_level > 5) {
    fail("resolution", "level must be in [0, 5]");
  }
  if (spec.workers < 1) fail("workers", "must be >= 1");

  std::vector<MetricModel> models;
  std::set<std::string> labels;
  for (std::size_t i = 0; i < spec.models.size(); ++i) {
    const std::string where = "models[" + std::to_string(i) + "]";
    std::optional<MetricModel> built;
    try {
      built = build_model(spec.models[i]);
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      fail(where, e.what());
    }
    const MetricModel& m = *built;
    if (!labels.insert(m.label()).second) fail(where, "duplicate model name '" + m.label() + "'");
    const ModelDiagnostics d = validate(m, spec.seed);
    if (!d.accepted) {
      std::ostringstream msg;
      msg << "model failed validation (worst violation " << d.worst_violation << ")";
      fail(where, msg.str());
    }
    const double reach = spec.radii.front() * spec.lambdas.back();
    if (reach > m.validity_radius()) {
      std::ostringstream msg;
      msg << "largest outer radius " << reach << " exceeds the validity radius "
          << m.validity_radius();
      fail(where, msg.str());
    }
    for (Method method : spec.methods) {
      if (method == Method::variational && m.dim() != 3) {
        fail(where, "the variational solver supports dimension 3 only");
      }
      if (method == Method::quadrature && !m.rotationally_symmetric() && m.dim() != 3) {
        fail(where, "non-symmetric quadrature (sphere areas) supports dimension 3 only");
      }
    }
    models.push_back(m);
  }
  return models;
}

}  // namespace capcurv::harness
