#include "capcurv/metric_model.hpp"

#include "capcurv/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

namespace capcurv {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_dim(int dim) {
  if (dim < 3) throw DomainError("model dimension must be >= 3");
}

// Sample directions for the positive-definiteness scan: normalized nodes of a
// 20-per-axis grid on [-1, 1]^n, or seeded random directions when that grid
// gets too large.
std::vector<Eigen::VectorXd> sample_directions(int dim) {
  constexpr int kPerAxis = 20;
  std::vector<Eigen::VectorXd> dirs;
  const double total = std::pow(static_cast<double>(kPerAxis), dim);
  if (total <= 2.0e5) {
    std::vector<int> idx(dim, 0);
    const auto count = static_cast<long>(total);
    for (long c = 0; c < count; ++c) {
      long rem = c;
      Eigen::VectorXd y(dim);
      for (int d = 0; d < dim; ++d) {
        const int i = static_cast<int>(rem % kPerAxis);
        rem /= kPerAxis;
        y[d] = -1.0 + 2.0 * i / (kPerAxis - 1);
      }
      const double nrm = y.norm();
      if (nrm > 0.0) dirs.push_back(y / nrm);
    }
  } else {
    std::mt19937_64 rng(20);
    std::normal_distribution<double> normal;
    for (int c = 0; c < 20000; ++c) {
      Eigen::VectorXd y(dim);
      for (int d = 0; d < dim; ++d) y[d] = normal(rng);
      dirs.push_back(y.normalized());
    }
  }
  // axes and 45-degree pair directions catch the extreme sectional planes
  for (int a = 0; a < dim; ++a) {
    dirs.push_back(Eigen::VectorXd::Unit(dim, a));
    for (int b = a + 1; b < dim; ++b) {
      dirs.push_back((Eigen::VectorXd::Unit(dim, a) + Eigen::VectorXd::Unit(dim, b)).normalized());
    }
  }
  return dirs;
}

// Largest eigenvalue of R(w, w) over the sample directions. Along a ray,
// g(t w) has eigenvalues 1 - t^2 mu_i(w) / 3.
double max_directional_curvature(const CurvatureTensor& t) {
  double mu = -kInf;
  for (const auto& w : sample_directions(t.dim())) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t.contract(w), Eigen::EigenvaluesOnly);
    mu = std::max(mu, es.eigenvalues().maxCoeff());
  }
  return mu;
}

double min_eigenvalue_on_ball(const CurvatureTensor& t, double radius) {
  if (!std::isfinite(radius)) {
    return max_directional_curvature(t) > 0.0 ? -kInf : 1.0;
  }
  return 1.0 - radius * radius * max_directional_curvature(t) / 3.0;
}

}  // namespace

// ---- Warp ------------------------------------------------------------------

Warp Warp::sine(double k) {
  if (!(k > 0.0)) throw DomainError("sine warp needs k > 0");
  return Warp(Kind::sine, k, k, 0.0);
}

Warp Warp::sinh(double k) {
  if (!(k > 0.0)) throw DomainError("sinh warp needs k > 0");
  return Warp(Kind::sinh, k, -k, 0.0);
}

Warp Warp::linear() { return Warp(Kind::linear, 0.0, 0.0, 0.0); }

Warp Warp::polynomial(double c, double a) { return Warp(Kind::polynomial, 0.0, c, a); }

double Warp::value(double r) const {
  switch (kind_) {
    case Kind::sine: return std::sin(std::sqrt(k_) * r) / std::sqrt(k_);
    case Kind::sinh: return std::sinh(std::sqrt(k_) * r) / std::sqrt(k_);
    case Kind::linear: return r;
    case Kind::polynomial: {
      const double r2 = r * r;
      return r * (1.0 - c_ * r2 / 6.0 + a_ * r2 * r2);
    }
  }
  return r;
}

double Warp::derivative(double r) const {
  switch (kind_) {
    case Kind::sine: return std::cos(std::sqrt(k_) * r);
    case Kind::sinh: return std::cosh(std::sqrt(k_) * r);
    case Kind::linear: return 1.0;
    case Kind::polynomial: {
      const double r2 = r * r;
      return 1.0 - c_ * r2 / 2.0 + 5.0 * a_ * r2 * r2;
    }
  }
  return 1.0;
}

double Warp::center_curvature() const { return c_; }

double Warp::natural_radius() const {
  switch (kind_) {
    case Kind::sine: return std::numbers::pi / std::sqrt(k_);
    case Kind::sinh:
    case Kind::linear: return kInf;
    case Kind::polynomial: {
      // phi / r = 1 - (c/6) s + a s^2 with s = r^2
      const double b = -c_ / 6.0;
      double smallest = kInf;
      if (a_ == 0.0) {
        if (b < 0.0) smallest = -1.0 / b;
      } else {
        const double disc = b * b - 4.0 * a_;
        if (disc >= 0.0) {
          for (double sgn : {-1.0, 1.0}) {
            const double s = (-b + sgn * std::sqrt(disc)) / (2.0 * a_);
            if (s > 0.0) smallest = std::min(smallest, s);
          }
        }
      }
      return std::isfinite(smallest) ? std::sqrt(smallest) : kInf;
    }
  }
  return kInf;
}

// ---- MetricModel -------------------------------------------------------------

MetricModel MetricModel::space_form(int dim, double sectional_curvature) {
  require_dim(dim);
  if (!std::isfinite(sectional_curvature)) throw DomainError("sectional curvature must be finite");
  const double valid =
      sectional_curvature > 0.0 ? std::numbers::pi / std::sqrt(sectional_curvature) : kInf;
  return MetricModel(SpaceForm{dim, sectional_curvature}, valid);
}

MetricModel MetricModel::warped_product(int dim, Warp warp, std::optional<double> valid_radius) {
  require_dim(dim);
  const double natural = warp.natural_radius();
  double valid = valid_radius.value_or(natural);
  if (!(valid > 0.0)) throw DomainError("valid radius must be positive");
  if (valid > natural) {
    std::ostringstream msg;
    msg << "warp vanishes at r = " << natural << ", inside the requested valid radius " << valid;
    throw ValidationError(msg.str());
  }
  return MetricModel(WarpedProduct{dim, warp}, valid);
}

MetricModel MetricModel::curvature_polynomial(CurvatureTensor tensor,
                                              std::optional<double> valid_radius) {
  require_dim(tensor.dim());
  const double valid = valid_radius.value_or(default_valid_radius(tensor));
  if (!(valid > 0.0)) throw DomainError("valid radius must be positive");
  MetricModel model(CurvaturePolynomial{std::move(tensor)}, valid);
  const ModelDiagnostics diag = model.diagnostics();
  if (!diag.accepted) {
    std::ostringstream msg;
    msg << "curvature-polynomial model rejected: symmetry/Bianchi violation "
        << diag.symmetry_violation << ", min eigenvalue of g " << diag.min_eigenvalue;
    throw ValidationError(msg.str());
  }
  return model;
}

int MetricModel::dim() const {
  return std::visit(Overloaded{[](const SpaceForm& s) { return s.dim; },
                               [](const WarpedProduct& w) { return w.dim; },
                               [](const CurvaturePolynomial& c) { return c.tensor.dim(); }},
                    presentation_);
}

bool MetricModel::rotationally_symmetric() const {
  return !std::holds_alternative<CurvaturePolynomial>(presentation_);
}

std::string MetricModel::label() const {
  if (!label_.empty()) return label_;
  std::ostringstream out;
  std::visit(Overloaded{[&](const SpaceForm& s) {
                          out << "space_form(n=" << s.dim << ",K=" << s.sectional_curvature << ")";
                        },
                        [&](const WarpedProduct& w) {
                          out << "warped_product(n=" << w.dim << ",c=" << w.warp.center_curvature()
                              << ")";
                        },
                        [&](const CurvaturePolynomial& c) {
                          out << "curvature_polynomial(n=" << c.tensor.dim()
                              << ",S=" << c.tensor.scalar_trace() << ")";
                        }},
             presentation_);
  return out.str();
}

double MetricModel::radial_profile(double r) const {
  return std::visit(
      Overloaded{[&](const SpaceForm& s) {
                   const double K = s.sectional_curvature;
                   if (K > 0.0) return std::sin(std::sqrt(K) * r) / std::sqrt(K);
                   if (K < 0.0) return std::sinh(std::sqrt(-K) * r) / std::sqrt(-K);
                   return r;
                 },
                 [&](const WarpedProduct& w) { return w.warp.value(r); },
                 [](const CurvaturePolynomial&) -> double {
                   throw UnsupportedMethod("curvature-polynomial models have no radial profile");
                 }},
      presentation_);
}

Eigen::MatrixXd MetricModel::metric_at(const Eigen::VectorXd& y) const {
  const int n = dim();
  if (y.size() != n) throw DomainError("metric_at: point has the wrong dimension");
  const double rho = y.norm();
  if (rho > valid_radius_ * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "metric_at: |y| = " << rho << " exceeds the validity radius " << valid_radius_;
    throw DomainError(msg.str());
  }
  if (const auto* poly = std::get_if<CurvaturePolynomial>(&presentation_)) {
    Eigen::MatrixXd g = Eigen::MatrixXd::Identity(n, n);
    g -= poly->tensor.contract(y) / 3.0;
    return g;
  }
  if (rho == 0.0) return Eigen::MatrixXd::Identity(n, n);
  const double ratio = radial_profile(rho) / rho;
  const double f = ratio * ratio;
  const Eigen::VectorXd w = y / rho;
  Eigen::MatrixXd g = f * Eigen::MatrixXd::Identity(n, n);
  g += (1.0 - f) * (w * w.transpose());
  return g;
}

double MetricModel::scalar_curvature() const {
  return std::visit(
      Overloaded{[](const SpaceForm& s) { return s.dim * (s.dim - 1.0) * s.sectional_curvature; },
                 [](const WarpedProduct& w) {
                   return w.dim * (w.dim - 1.0) * w.warp.center_curvature();
                 },
                 [](const CurvaturePolynomial& c) { return c.tensor.scalar_trace(); }},
      presentation_);
}

ModelDiagnostics MetricModel::diagnostics() const {
  ModelDiagnostics d;
  if (const auto* poly = std::get_if<CurvaturePolynomial>(&presentation_)) {
    d.symmetry_violation = poly->tensor.max_symmetry_violation();
    d.min_eigenvalue = min_eigenvalue_on_ball(poly->tensor, valid_radius_);
  } else if (std::isfinite(valid_radius_)) {
    const double sn = radial_profile(valid_radius_);
    const double ratio = sn / valid_radius_;
    d.min_eigenvalue = std::min(1.0, ratio * ratio);
  }
  d.worst_violation = std::max({d.symmetry_violation, d.gauss_lemma_residual,
                                std::max(0.0, -d.min_eigenvalue)});
  d.accepted = d.symmetry_violation <= kRejectThreshold &&
               d.gauss_lemma_residual <= kRejectThreshold && d.min_eigenvalue > 0.0;
  return d;
}

ModelDiagnostics validate(const MetricModel& model, unsigned seed, int gauss_lemma_points) {
  ModelDiagnostics d = model.diagnostics();
  const int n = model.dim();
  const double radius = std::isfinite(model.validity_radius()) ? model.validity_radius() : 1.0;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int s = 0; s < gauss_lemma_points; ++s) {
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) y[i] = normal(rng);
    y *= radius * std::pow(unit(rng), 1.0 / n) / y.norm();
    const Eigen::VectorXd residual = model.metric_at(y) * y - y;
    d.gauss_lemma_residual = std::max(d.gauss_lemma_residual, residual.cwiseAbs().maxCoeff());
  }
  d.worst_violation = std::max({d.symmetry_violation, d.gauss_lemma_residual,
                                std::max(0.0, -d.min_eigenvalue)});
  d.accepted = d.symmetry_violation <= MetricModel::kRejectThreshold &&
               d.gauss_lemma_residual <= MetricModel::kRejectThreshold && d.min_eigenvalue > 0.0;
  return d;
}

double default_valid_radius(const CurvatureTensor& tensor) {
  const double mu = max_directional_curvature(tensor);
  if (mu <= 0.0) return kInf;
  return std::sqrt(1.5 / mu);
}

double numerical_scalar_curvature(const MetricModel& model, double step) {
  const int n = model.dim();
  const double h = step;
  auto g = [&](const Eigen::VectorXd& y) { return model.metric_at(y); };
  const Eigen::MatrixXd g0 = g(Eigen::VectorXd::Zero(n));

  // S = sum_ij (d_i d_j g_ij - d_j d_j g_ii), valid where dg = 0.
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Eigen::VectorXd ei = h * Eigen::VectorXd::Unit(n, i);
      const Eigen::VectorXd ej = h * Eigen::VectorXd::Unit(n, j);
      double dij_gij;
      if (i == j) {
        dij_gij = (g(ei)(i, i) - 2.0 * g0(i, i) + g(-ei)(i, i)) / (h * h);
      } else {
        dij_gij = (g(ei + ej)(i, j) - g(ei - ej)(i, j) - g(ej - ei)(i, j) + g(-ei - ej)(i, j)) /
                  (4.0 * h * h);
      }
      const double djj_gii = (g(ej)(i, i) - 2.0 * g0(i, i) + g(-ej)(i, i)) / (h * h);
      s += dij_gij - djj_gii;
    }
  }
  return s;
}

}  // namespace capcurv
