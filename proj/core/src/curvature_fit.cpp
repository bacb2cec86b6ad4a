#include "capcurv/curvature_fit.hpp"

#include "capcurv/errors.hpp"
#include "capcurv/expansion.hpp"
#include "capcurv/parallel.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace capcurv {

namespace {

bool is_half(double coarse, double fine) {
  return std::abs(2.0 * fine - coarse) <= 1e-9 * coarse;
}

// Least squares q = sum_k c_k r^{powers[k]}; returns coefficients and RMS residual.
std::pair<Eigen::VectorXd, double> fit_powers(const std::vector<DeficitSample>& s,
                                              const std::vector<int>& powers) {
  const auto rows = static_cast<Eigen::Index>(s.size());
  const auto cols = static_cast<Eigen::Index>(powers.size());
  Eigen::MatrixXd X(rows, cols);
  Eigen::VectorXd q(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const double r = s[i].r;
    q[i] = s[i].deficit / (r * r);
    for (Eigen::Index k = 0; k < cols; ++k) X(i, k) = std::pow(r, powers[k]);
  }
  const Eigen::VectorXd coef = X.colPivHouseholderQr().solve(q);
  const double rms = std::sqrt((X * coef - q).squaredNorm() / static_cast<double>(rows));
  return {coef, rms};
}

}  // namespace

const char* to_string(SignCall s) {
  switch (s) {
    case SignCall::nonnegative: return "nonnegative";
    case SignCall::negative: return "negative";
    case SignCall::indeterminate: return "indeterminate";
  }
  return "?";
}

std::vector<double> default_radii(const MetricModel& model, double lambda, int levels) {
  const double r0 = std::min(0.2, model.validity_radius() / (2.0 * lambda));
  std::vector<double> radii;
  for (int k = 0; k < levels; ++k) radii.push_back(r0 * std::ldexp(1.0, -k));
  return radii;
}

std::vector<DeficitSample> collect_deficits(const MetricModel& model, double lambda,
                                            std::span<const double> radii,
                                            const CollectOptions& options) {
  for (std::size_t i = 1; i < radii.size(); ++i) {
    if (!(radii[i] < radii[i - 1])) throw PreconditionError("radii must be strictly decreasing");
  }
  for (double r : radii) CapacityQuery{model, r, lambda}.check();

  std::vector<DeficitSample> out(radii.size());
  parallel_for(radii.size(), options.workers, [&](std::size_t i) {
    const CapacityQuery q{model, radii[i], lambda};
    const CapacityResult res = model.rotationally_symmetric()
                                   ? symmetric_capacity(q)
                                   : variational_capacity(q, options.resolution, options.solver).capacity;
    out[i] = DeficitSample{radii[i], res.deficit, res.method,
                           res.error_estimate / res.euclidean_reference};
  });
  return out;
}

FitResult fit_deficit_coefficient(std::span<const DeficitSample> samples, int n, double lambda) {
  if (samples.size() < 3) throw PreconditionError("deficit fit needs at least 3 samples");
  std::vector<DeficitSample> s(samples.begin(), samples.end());
  std::sort(s.begin(), s.end(), [](const auto& a, const auto& b) { return a.r > b.r; });

  FitResult fit;
  fit.n = n;
  fit.lambda = lambda;
  for (const auto& x : s) {
    fit.radii_used.push_back(x.r);
    if (x.method == CapacityMethod::variational) {
      fit.from_variational = true;
      if (x.error_estimate > 0.1 * std::abs(x.deficit)) fit.low_confidence = true;
    }
  }

  auto q = [](const DeficitSample& x) { return x.deficit / (x.r * x.r); };
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = i + 1; j < s.size(); ++j) {
      if (!is_half(s[i].r, s[j].r)) continue;
      const double value = (4.0 * q(s[j]) - q(s[i])) / 3.0;
      fit.richardson.push_back({s[i].r, s[j].r, value, std::abs(value - q(s[j]))});
      const double noise =
          (4.0 * s[j].error_estimate / (s[j].r * s[j].r) + s[i].error_estimate / (s[i].r * s[i].r)) /
          3.0;
      fit.noise_floor = std::max(fit.noise_floor, noise);
    }
  }
  if (fit.richardson.empty()) {
    throw PreconditionError("deficit fit needs at least one pair of radii (r, r/2)");
  }
  // coarse to fine by the finer radius of each pair
  std::stable_sort(fit.richardson.begin(), fit.richardson.end(),
                   [](const auto& a, const auto& b) { return a.r_fine > b.r_fine; });

  fit.kappa_hat = fit.richardson.back().value;
  fit.extrapolation_gap = fit.richardson.back().gap;

  const auto [even, even_rms] = fit_powers(s, {0, 2});
  fit.ls_a2 = even[0];
  fit.ls_a4 = even[1];
  fit.residual_norm = even_rms;
  const auto [odd, odd_rms] = fit_powers(s, {0, 1, 2});
  fit.ls_odd_a2 = odd[0];
  fit.ls_odd_a3 = odd[1];

  fit.S_hat = fit.kappa_hat / deficit_coefficient(n, lambda, 1.0);
  return fit;
}

SignDecision nonnegativity_detector(const FitResult& fit) {
  SignDecision d;
  d.dead_zone = kDeadZoneFactor * fit.extrapolation_gap;
  const double zero_tolerance = std::max(kDeadZoneFactor * fit.noise_floor, 1e-9);
  const double k = fit.kappa_hat;
  if (std::abs(k) <= zero_tolerance) {
    // zero satisfies the weak inequality
    d.call = SignCall::nonnegative;
    d.zero_flag = true;
  } else if (std::abs(k) <= d.dead_zone) {
    // variational capacities are upper bounds, so their deficits err low:
    // a positive estimate survives, a negative one does not
    d.call = fit.from_variational && k > 0.0 ? SignCall::nonnegative : SignCall::indeterminate;
  } else {
    d.call = k > 0.0 ? SignCall::nonnegative : SignCall::negative;
  }
  return d;
}

SignDecision nonnegativity_detector(std::span<const DeficitSample> samples, int n, double lambda) {
  return nonnegativity_detector(fit_deficit_coefficient(samples, n, lambda));
}

std::vector<ConjectureRow> conjecture_scan(const MetricModel& model,
                                           std::span<const double> lambdas,
                                           std::span<const double> radii,
                                           const CollectOptions& options) {
  const double S = model.scalar_curvature();
  if (std::abs(S) > 1e-12) {
    std::ostringstream msg;
    msg << "conjecture scan needs a scalar-flat model, got S(p) = " << S;
    throw PreconditionError(msg.str());
  }
  std::vector<ConjectureRow> rows;
  for (double lambda : lambdas) {
    ConjectureRow row;
    row.lambda = lambda;
    row.samples = collect_deficits(model, lambda, radii, options);
    row.fit = fit_deficit_coefficient(row.samples, model.dim(), lambda);
    row.r2_status = nonnegativity_detector(row.fit);
    row.r4_coefficient = row.fit.ls_a4;
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace capcurv
