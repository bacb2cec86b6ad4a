#pragma once

#include "capcurv/curvature_tensor.hpp"

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <variant>

namespace capcurv {

/// Closed-form warp functions phi(r) for rotationally symmetric metrics
/// dr^2 + phi(r)^2 g_sphere. Every family satisfies phi(0) = 0, phi'(0) = 1,
/// phi''(0) = 0.
class Warp {
 public:
  enum class Kind { sine, sinh, linear, polynomial };

  /// sin(sqrt(k) r) / sqrt(k), k > 0.
  static Warp sine(double k);
  /// sinh(sqrt(k) r) / sqrt(k), k > 0.
  static Warp sinh(double k);
  static Warp linear();
  /// r - (c/6) r^3 + a r^5.
  static Warp polynomial(double c, double a);

  Kind kind() const { return kind_; }
  double value(double r) const;
  double derivative(double r) const;
  /// c = -phi'''(0); the sectional curvature of radial planes at the center.
  double center_curvature() const;
  /// Largest radius on which phi stays positive (infinity if it never
  /// vanishes).
  double natural_radius() const;

  double k() const { return k_; }
  double c() const { return c_; }
  double a() const { return a_; }

 private:
  Warp(Kind kind, double k, double c, double a) : kind_(kind), k_(k), c_(c), a_(a) {}

  Kind kind_;
  double k_;
  double c_;
  double a_;
};

struct SpaceForm {
  int dim;
  double sectional_curvature;
};

struct WarpedProduct {
  int dim;
  Warp warp;
};

struct CurvaturePolynomial {
  CurvatureTensor tensor;
};

/// Worst-case invariant violations found by validate().
struct ModelDiagnostics {
  double symmetry_violation = 0.0;
  double gauss_lemma_residual = 0.0;
  double min_eigenvalue = 1.0;  // of g over the sample grid
  double worst_violation = 0.0;
  bool accepted = true;
};

/// A pointed Riemannian manifold presented in normal coordinates about p,
/// with |y| equal to geodesic distance from p. Immutable once constructed.
class MetricModel {
 public:
  using Presentation = std::variant<SpaceForm, WarpedProduct, CurvaturePolynomial>;

  static constexpr double kRejectThreshold = 1e-12;

  /// Throws ValidationError / DomainError on bad parameters.
  static MetricModel space_form(int dim, double sectional_curvature);
  static MetricModel warped_product(int dim, Warp warp,
                                    std::optional<double> valid_radius = {});
  /// Without valid_radius, uses the largest radius at which the minimum
  /// eigenvalue of g over the sampled directions stays above 0.5.
  static MetricModel curvature_polynomial(CurvatureTensor tensor,
                                          std::optional<double> valid_radius = {});

  const Presentation& presentation() const { return presentation_; }
  int dim() const;
  double validity_radius() const { return valid_radius_; }
  bool rotationally_symmetric() const;
  /// Short human-readable tag used in result tables.
  std::string label() const;
  void set_label(std::string label) { label_ = std::move(label); }

  /// g_ij(y). Throws DomainError when |y| exceeds the validity radius.
  Eigen::MatrixXd metric_at(const Eigen::VectorXd& y) const;

  /// S(p), analytically.
  double scalar_curvature() const;

  /// sn(r) such that A(r) = omega_{n-1} sn(r)^{n-1}; rotationally symmetric
  /// models only.
  double radial_profile(double r) const;

  /// Checks the type invariants on the model's own parameters.
  ModelDiagnostics diagnostics() const;

 private:
  MetricModel(Presentation p, double valid_radius)
      : presentation_(std::move(p)), valid_radius_(valid_radius) {}

  Presentation presentation_;
  double valid_radius_;
  std::string label_;
};

/// Full invariant sweep: tensor symmetries, Bianchi identity, Gauss lemma at
/// random points, positive definiteness on a sample grid, trace vs declared S.
ModelDiagnostics validate(const MetricModel& model, unsigned seed = 1,
                          int gauss_lemma_points = 10000);

/// Default validity radius for a curvature-polynomial metric (see
/// MetricModel::curvature_polynomial).
double default_valid_radius(const CurvatureTensor& tensor);

/// Finite-difference scalar curvature of metric_at at y = 0. Relies on the
/// first derivatives of g vanishing at the origin.
double numerical_scalar_curvature(const MetricModel& model, double step = 1e-3);

}  // namespace capcurv
