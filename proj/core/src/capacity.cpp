#include "capcurv/capacity.hpp"

#include "capcurv/ball_geometry.hpp"
#include "capcurv/errors.hpp"
#include "capcurv/quadrature.hpp"

#include <cmath>
#include <sstream>

namespace capcurv {

namespace {

// Adaptive tolerance for the radial integrals; leaves error estimates
// comfortably under 1e-10 of the capacity.
constexpr double kRadialTolerance = 1e-12;

// int_a^b sn(t)^{1-n} dt as the exact Euclidean part plus a quadrature of
// the curvature correction, so the error estimate scales with the
// correction rather than with the steep t^{1-n} factor.
Integral inverse_profile_integral(const MetricModel& model, double a, double b) {
  const int n = model.dim();
  const double euclid = (std::pow(a, 2 - n) - std::pow(b, 2 - n)) / (n - 2.0);
  const Integral corr = integrate_adaptive(
      [&](double t) {
        const double w = t / model.radial_profile(t);
        return std::pow(t, 1 - n) * std::expm1((n - 1) * std::log(w));
      },
      a, b, kRadialTolerance, 1e-2 * kRadialTolerance * euclid);
  return {euclid + corr.value, corr.error};
}

CapacityResult finish(const CapacityQuery& q, double value, double error, CapacityMethod method) {
  CapacityResult res;
  res.value = value;
  res.method = method;
  res.error_estimate = error;
  res.euclidean_reference =
      euclidean_relative_capacity(q.model.dim(), q.inner_radius, q.outer_radius());
  res.deficit = 1.0 - value / res.euclidean_reference;
  return res;
}

}  // namespace

double euclidean_relative_capacity(int n, double R1, double R2) {
  if (n < 1) throw DomainError("euclidean_relative_capacity: n must be >= 1");
  if (!(R1 > 0.0)) throw DomainError("euclidean_relative_capacity: R1 must be > 0");
  if (!(R1 < R2)) throw DomainError("euclidean_relative_capacity: need R1 < R2");
  if (std::isinf(R2)) {
    if (n <= 2) throw DomainError("euclidean_relative_capacity: R2 = infinity needs n >= 3");
    return std::pow(R1, n - 2);
  }
  if (n == 1) return 1.0 / (R2 - R1);
  if (n == 2) return 1.0 / std::log(R2 / R1);
  return 1.0 / (std::pow(R1, 2 - n) - std::pow(R2, 2 - n));
}

void CapacityQuery::check() const {
  if (!(inner_radius > 0.0)) throw DomainError("capacity query: inner radius must be > 0");
  if (!(ratio > 1.0)) throw DomainError("capacity query: ratio must be > 1");
  if (outer_radius() > model.validity_radius()) {
    std::ostringstream msg;
    msg << "capacity query: outer radius " << outer_radius() << " exceeds validity radius "
        << model.validity_radius();
    throw DomainError(msg.str());
  }
}

const char* to_string(CapacityMethod m) {
  switch (m) {
    case CapacityMethod::euclidean_closed_form: return "euclidean_closed_form";
    case CapacityMethod::symmetric_quadrature: return "symmetric_quadrature";
    case CapacityMethod::szego_bound: return "szego_bound";
    case CapacityMethod::variational: return "variational";
  }
  return "?";
}

CapacityResult symmetric_capacity(const CapacityQuery& query) {
  query.check();
  if (!query.model.rotationally_symmetric()) {
    throw UnsupportedMethod("symmetric_capacity needs a space form or warped product");
  }
  const int n = query.model.dim();
  const MetricModel& model = query.model;
  // omega_{n-1} cancels: cap = 1 / ((n-2) int dt / sn(t)^{n-1})
  const Integral j = inverse_profile_integral(model, query.inner_radius, query.outer_radius());
  const double value = 1.0 / ((n - 2.0) * j.value);
  return finish(query, value, value * j.error / j.value, CapacityMethod::symmetric_quadrature);
}

CapacityResult szego_upper_bound(const CapacityQuery& query) {
  query.check();
  const int n = query.model.dim();
  const SphereAreaProfile area(query.model, query.outer_radius());
  const Integral j = integrate_adaptive([&](double t) { return 1.0 / area(t).value; },
                                        query.inner_radius, query.outer_radius(),
                                        kRadialTolerance);
  const double omega = unit_sphere_area(n);
  const double value = 1.0 / ((n - 2.0) * omega * j.value);
  const double angular = area(query.outer_radius()).error / area(query.outer_radius()).value;
  CapacityResult res =
      finish(query, value, value * (j.error / j.value + angular), CapacityMethod::szego_bound);
  res.upper_bound = true;
  return res;
}

double euclidean_profile(int n, double lambda, double r, double rho) {
  return (1.0 - std::pow(r / rho, n - 2)) / (1.0 - std::pow(lambda, 2 - n));
}

HarmonicProbeResult symmetric_harmonic_probe(const CapacityQuery& query, int samples) {
  query.check();
  if (!query.model.rotationally_symmetric()) {
    throw UnsupportedMethod("symmetric_harmonic_probe needs a rotationally symmetric model");
  }
  if (samples < 2) throw DomainError("harmonic probe needs at least two samples");
  const int n = query.model.dim();
  const double r = query.inner_radius;
  const double R = query.outer_radius();
  const MetricModel& model = query.model;
  auto inv_profile = [&](double t) { return std::pow(model.radial_profile(t), 1 - n); };

  const double total = inverse_profile_integral(model, r, R).value;
  const double cn = euclidean_relative_capacity(n, r, R);

  HarmonicProbeResult out;
  out.radius = r;
  double partial = 0.0;
  double prev = r;
  for (int k = 0; k < samples; ++k) {
    const double rho = k + 1 == samples ? R : r + (R - r) * k / (samples - 1.0);
    if (k > 0) partial += inverse_profile_integral(model, prev, rho).value;
    prev = rho;
    const double u = partial / total;
    const double grad = inv_profile(rho) / total;
    const double model_grad = (n - 2.0) * cn * std::pow(rho, 1 - n);
    out.sup_deviation =
        std::max(out.sup_deviation, std::abs(u - euclidean_profile(n, query.ratio, r, rho)));
    out.gradient_deviation = std::max(out.gradient_deviation, std::abs(grad - model_grad));
  }
  return out;
}

}  // namespace capcurv
