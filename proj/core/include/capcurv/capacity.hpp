#pragma once

#include "capcurv/metric_model.hpp"

#include <limits>
#include <string>

namespace capcurv {

inline constexpr double kInfiniteRadius = std::numeric_limits<double>::infinity();

/// c_n(R1, R2). n >= 3: 1/(R1^{2-n} - R2^{2-n}) with R2 = infinity allowed;
/// n = 2: 1/log(R2/R1); n = 1: 1/(R2 - R1).
double euclidean_relative_capacity(int n, double R1, double R2);

/// Capacity of the closed geodesic ball of radius r relative to the open
/// ball of radius ratio * r, both about the model's base point.
struct CapacityQuery {
  MetricModel model;
  double inner_radius;
  double ratio;

  double outer_radius() const { return inner_radius * ratio; }
  /// Throws DomainError unless r > 0, ratio > 1 and ratio * r is inside the
  /// model's validity ball.
  void check() const;
};

enum class CapacityMethod { euclidean_closed_form, symmetric_quadrature, szego_bound, variational };

const char* to_string(CapacityMethod m);

struct CapacityResult {
  double value = 0.0;
  CapacityMethod method = CapacityMethod::symmetric_quadrature;
  double error_estimate = 0.0;
  double euclidean_reference = 0.0;
  double deficit = 0.0;  // 1 - value / euclidean_reference
  /// Set when value is only known to bound the capacity from above
  /// (Szego bound on a non-symmetric model).
  bool upper_bound = false;
};

/// [(n-2) omega_{n-1}]^{-1} [int_r^{lambda r} dt / A(t)]^{-1} for a
/// rotationally symmetric model, where it is the exact capacity. Throws
/// UnsupportedMethod for curvature-polynomial models.
CapacityResult symmetric_capacity(const CapacityQuery& query);

/// Same formula with the model's geodesic-sphere areas, integrating 1 / A(t)
/// directly. Always an upper bound; on symmetric models it equals
/// symmetric_capacity up to quadrature error, which makes the pair a
/// cross-check of two independent integrations.
CapacityResult szego_upper_bound(const CapacityQuery& query);

/// Nearly-radial harmonic function diagnostics on the annulus r <= |y| <= lambda r.
struct HarmonicProbeResult {
  double sup_deviation = 0.0;       // max |u_r - phi_0|
  double gradient_deviation = 0.0;  // max ||grad u_r| - (n-2) c_n |y|^{1-n}|
  double radius = 0.0;
};

/// Euclidean model profile on the annulus: (1 - (r/|y|)^{n-2}) / (1 - lambda^{2-n}).
double euclidean_profile(int n, double lambda, double r, double rho);

/// Probe for rotationally symmetric models using the exact radial solution
/// u_r(rho) = int_r^rho dt/A(t) / int_r^{lambda r} dt/A(t).
HarmonicProbeResult symmetric_harmonic_probe(const CapacityQuery& query, int samples = 401);

}  // namespace capcurv
