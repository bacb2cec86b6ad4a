#pragma once

#include "capcurv/metric_model.hpp"

#include <vector>

namespace capcurv {

/// Volume of the unit n-ball, beta_n.
double unit_ball_volume(int n);
/// Area of the unit (n-1)-sphere, omega_{n-1} = n beta_n.
double unit_sphere_area(int n);

enum class GeometryMethod { closed_form, quadrature };

const char* to_string(GeometryMethod m);

struct Measure {
  double value = 0.0;
  GeometryMethod method = GeometryMethod::closed_form;
  double error = 0.0;
};

struct BallGeometry {
  double radius = 0.0;
  double volume = 0.0;
  double area = 0.0;
  GeometryMethod method = GeometryMethod::closed_form;
  double quadrature_error = 0.0;
};

/// A(t) for one model, with any per-model setup (angular grids) done once.
/// Curvature-polynomial models in dimension 3 use a Gauss-Legendre (cos theta)
/// x trapezoid (phi) sphere grid whose order is doubled until two successive
/// orders agree to 1e-13 relative at max_radius.
class SphereAreaProfile {
 public:
  SphereAreaProfile(const MetricModel& model, double max_radius);

  Measure operator()(double t) const;

  int angular_order() const { return order_; }

 private:
  double curvature_polynomial_area(double t) const;

  MetricModel model_;
  double max_radius_;
  // per-direction weight, tr and det of the tangential block of R(w, w)
  std::vector<double> weight_;
  std::vector<double> trace_;
  std::vector<double> det_;
  int order_ = 0;
  double angular_error_ = 0.0;
};

Measure sphere_area(const MetricModel& model, double r);
Measure ball_volume(const MetricModel& model, double r);
BallGeometry ball_geometry(const MetricModel& model, double r);

/// beta_n r^n (1 - S r^2 / (6(n+2))).
double v_series(int n, double S, double r);
/// omega_{n-1} r^{n-1} (1 - S r^2 / (6n)).
double a_series(int n, double S, double r);

/// |dB|^2 - [n^2 beta_n^{2/n} |B|^{2(n-1)/n} - (n S / (n+2) + eps) |B|^2] for
/// the geodesic ball B of the given radius. Nonnegative where the sharp local
/// isoperimetric inequality holds for B.
double druet_margin(const MetricModel& model, double region_radius, double epsilon);

struct DruetScan {
  std::vector<double> radii;    // descending
  std::vector<double> margins;  // same order
  /// Largest sampled radius below which every sampled margin is >= 0
  /// (0 when the smallest radius already fails).
  double threshold_radius = 0.0;
};

/// Margins on the dyadic radii r_max 2^-k, k = 0..levels-1.
DruetScan druet_scan(const MetricModel& model, double epsilon, double r_max, int levels);

}  // namespace capcurv
