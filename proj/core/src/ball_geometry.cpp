#include "capcurv/ball_geometry.hpp"

#include "capcurv/errors.hpp"
#include "capcurv/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace capcurv {

namespace {

void check_radius(const MetricModel& model, double r) {
  if (!(r > 0.0) || r > model.validity_radius()) {
    std::ostringstream msg;
    msg << "radius " << r << " outside (0, " << model.validity_radius() << "]";
    throw DomainError(msg.str());
  }
}

}  // namespace

double unit_ball_volume(int n) {
  if (n < 1) throw DomainError("unit_ball_volume: n must be >= 1");
  return std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

double unit_sphere_area(int n) { return n * unit_ball_volume(n); }

const char* to_string(GeometryMethod m) {
  return m == GeometryMethod::closed_form ? "closed_form" : "quadrature";
}

SphereAreaProfile::SphereAreaProfile(const MetricModel& model, double max_radius)
    : model_(model), max_radius_(max_radius) {
  const auto* poly = std::get_if<CurvaturePolynomial>(&model.presentation());
  if (poly == nullptr) return;
  if (model.dim() != 3) {
    throw UnsupportedMethod("curvature-polynomial areas are implemented for n = 3 only");
  }

  auto build = [&](int order) {
    weight_.clear();
    trace_.clear();
    det_.clear();
    const QuadratureRule polar = gauss_legendre(order);
    const int nphi = 2 * order;
    const double dphi = 2.0 * std::numbers::pi / nphi;
    for (std::size_t a = 0; a < polar.size(); ++a) {
      const double ct = polar.nodes[a];
      const double st = std::sqrt(1.0 - ct * ct);
      for (int b = 0; b < nphi; ++b) {
        const double phi = (b + 0.5) * dphi;
        const double cp = std::cos(phi), sp = std::sin(phi);
        Eigen::Vector3d w(st * cp, st * sp, ct);
        Eigen::Matrix<double, 3, 2> frame;
        frame.col(0) << ct * cp, ct * sp, -st;
        frame.col(1) << -sp, cp, 0.0;
        const Eigen::Matrix3d q = poly->tensor.contract(w);
        const Eigen::Matrix2d tangential = frame.transpose() * q * frame;
        weight_.push_back(polar.weights[a] * dphi);
        trace_.push_back(tangential.trace());
        det_.push_back(tangential.determinant());
      }
    }
    order_ = order;
  };

  const double probe = std::isfinite(max_radius_) ? max_radius_ : 1.0;
  build(8);
  double previous = curvature_polynomial_area(probe);
  for (int order = 16; order <= 256; order *= 2) {
    build(order);
    const double current = curvature_polynomial_area(probe);
    angular_error_ = std::abs(current - previous) / current;
    if (angular_error_ <= 1e-13) break;
    previous = current;
  }
}

double SphereAreaProfile::curvature_polynomial_area(double t) const {
  const double s = t * t / 3.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < weight_.size(); ++i) {
    acc += weight_[i] * std::sqrt(1.0 - s * trace_[i] + s * s * det_[i]);
  }
  return t * t * acc;
}

Measure SphereAreaProfile::operator()(double t) const {
  Measure m;
  if (model_.rotationally_symmetric()) {
    const int n = model_.dim();
    m.value = unit_sphere_area(n) * std::pow(model_.radial_profile(t), n - 1);
    m.method = GeometryMethod::closed_form;
    return m;
  }
  m.value = curvature_polynomial_area(t);
  m.method = GeometryMethod::quadrature;
  m.error = angular_error_ * m.value;
  return m;
}

Measure sphere_area(const MetricModel& model, double r) {
  check_radius(model, r);
  return SphereAreaProfile(model, r)(r);
}

Measure ball_volume(const MetricModel& model, double r) {
  check_radius(model, r);
  const SphereAreaProfile area(model, r);
  const Integral integral = integrate_adaptive([&](double t) { return area(t).value; }, 0.0, r);
  Measure m;
  m.value = integral.value;
  m.method = GeometryMethod::quadrature;
  m.error = integral.error + area(r).error / r * integral.value;
  return m;
}

BallGeometry ball_geometry(const MetricModel& model, double r) {
  const Measure a = sphere_area(model, r);
  const Measure v = ball_volume(model, r);
  BallGeometry g;
  g.radius = r;
  g.area = a.value;
  g.volume = v.value;
  g.method = model.rotationally_symmetric() ? GeometryMethod::closed_form : GeometryMethod::quadrature;
  g.quadrature_error = std::max(a.error, v.error);
  return g;
}

double v_series(int n, double S, double r) {
  if (n < 3) throw DomainError("v_series: n must be >= 3");
  return unit_ball_volume(n) * std::pow(r, n) * (1.0 - S * r * r / (6.0 * (n + 2)));
}

double a_series(int n, double S, double r) {
  if (n < 3) throw DomainError("a_series: n must be >= 3");
  return unit_sphere_area(n) * std::pow(r, n - 1) * (1.0 - S * r * r / (6.0 * n));
}

double druet_margin(const MetricModel& model, double region_radius, double epsilon) {
  const int n = model.dim();
  const double area = sphere_area(model, region_radius).value;
  const double volume = ball_volume(model, region_radius).value;
  const double S = model.scalar_curvature();
  const double beta = unit_ball_volume(n);
  const double euclidean = n * n * std::pow(beta, 2.0 / n) * std::pow(volume, 2.0 * (n - 1) / n);
  const double correction = (n * S / (n + 2.0) + epsilon) * volume * volume;
  return area * area - (euclidean - correction);
}

DruetScan druet_scan(const MetricModel& model, double epsilon, double r_max, int levels) {
  DruetScan scan;
  for (int k = 0; k < levels; ++k) {
    const double r = r_max * std::ldexp(1.0, -k);
    scan.radii.push_back(r);
    scan.margins.push_back(druet_margin(model, r, epsilon));
  }
  // walk up from the smallest radius while margins stay nonnegative
  scan.threshold_radius = 0.0;
  for (int k = levels - 1; k >= 0; --k) {
    if (scan.margins[k] < 0.0) break;
    scan.threshold_radius = scan.radii[k];
  }
  return scan;
}

}  // namespace capcurv
