#pragma once

#include "capcurv/curvature_fit.hpp"
#include "capcurv/metric_model.hpp"

#include "json.hpp"

#include <filesystem>
#include <fstream>
#include <string>

namespace capcurv::harness::detail {

using Json = nlohmann::ordered_json;

inline Json fit_json(const FitResult& f) {
  Json j;
  j["n"] = f.n;
  j["lambda"] = f.lambda;
  j["kappa_hat"] = f.kappa_hat;
  j["S_hat"] = f.S_hat;
  j["extrapolation_gap"] = f.extrapolation_gap;
  j["residual_norm"] = f.residual_norm;
  j["ls_a2"] = f.ls_a2;
  j["ls_a4"] = f.ls_a4;
  j["ls_odd_a2"] = f.ls_odd_a2;
  j["ls_odd_a3"] = f.ls_odd_a3;
  j["noise_floor"] = f.noise_floor;
  j["low_confidence"] = f.low_confidence;
  j["from_variational"] = f.from_variational;
  j["radii_used"] = f.radii_used;
  Json levels = Json::array();
  for (const auto& l : f.richardson) {
    levels.push_back({{"r_coarse", l.r_coarse}, {"r_fine", l.r_fine}, {"value", l.value}, {"gap", l.gap}});
  }
  j["richardson"] = levels;
  return j;
}

inline Json sign_json(const SignDecision& d) {
  return {{"call", to_string(d.call)}, {"zero_flag", d.zero_flag}, {"dead_zone", d.dead_zone}};
}

inline Json sample_json(const DeficitSample& s) {
  return {{"r", s.r},
          {"deficit", s.deficit},
          {"method", to_string(s.method)},
          {"error_estimate", s.error_estimate}};
}

inline Json model_json(const MetricModel& m) {
  const ModelDiagnostics d = m.diagnostics();
  const char* family = std::visit(
      [](const auto& p) -> const char* {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, SpaceForm>) return "space_form";
        else if constexpr (std::is_same_v<T, WarpedProduct>) return "warped_product";
        else return "curvature_polynomial";
      },
      m.presentation());
  Json j;
  j["name"] = m.label();
  j["family"] = family;
  j["dim"] = m.dim();
  j["S"] = m.scalar_curvature();
  // null when unbounded
  j["validity_radius"] = m.validity_radius();
  j["rotationally_symmetric"] = m.rotationally_symmetric();
  j["diagnostics"] = {{"symmetry_violation", d.symmetry_violation},
                      {"gauss_lemma_residual", d.gauss_lemma_residual},
                      {"min_eigenvalue", d.min_eigenvalue},
                      {"worst_violation", d.worst_violation},
                      {"accepted", d.accepted}};
  return j;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace capcurv::harness::detail
