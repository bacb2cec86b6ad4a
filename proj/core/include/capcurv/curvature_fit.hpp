#pragma once

#include "capcurv/capacity.hpp"
#include "capcurv/variational.hpp"

#include <optional>
#include <span>
#include <vector>

namespace capcurv {

struct DeficitSample {
  double r = 0.0;
  double deficit = 0.0;  // 1 - cap / c_n(r, lambda r)
  CapacityMethod method = CapacityMethod::symmetric_quadrature;
  double error_estimate = 0.0;  // in deficit units
};

struct CollectOptions {
  Resolution resolution = Resolution::level(kDefaultResolutionLevel);
  SolverOptions solver;
  int workers = 1;
};

/// One sample per radius; symmetric quadrature when the model allows it,
/// otherwise the variational solver. Radii must be strictly decreasing.
std::vector<DeficitSample> collect_deficits(const MetricModel& model, double lambda,
                                            std::span<const double> radii,
                                            const CollectOptions& options = {});

struct RichardsonLevel {
  double r_coarse = 0.0;
  double r_fine = 0.0;  // r_coarse / 2
  double value = 0.0;   // (4 q(r/2) - q(r)) / 3, q = deficit / r^2
  double gap = 0.0;     // |value - q(r/2)|: how far extrapolation moved the fine value
};

struct FitResult {
  int n = 3;
  double lambda = 2.0;
  double kappa_hat = 0.0;  // finest Richardson value
  double S_hat = 0.0;
  double residual_norm = 0.0;  // RMS residual of the even least-squares fit of q
  std::vector<double> radii_used;
  std::vector<RichardsonLevel> richardson;  // coarse to fine
  double extrapolation_gap = 0.0;  // gap of the finest pair
  double ls_a2 = 0.0;  // q = a2 + a4 r^2
  double ls_a4 = 0.0;
  double ls_odd_a2 = 0.0;  // q = a2 + a3 r + a4 r^2
  double ls_odd_a3 = 0.0;
  double noise_floor = 0.0;  // kappa uncertainty from the samples' own error estimates
  bool low_confidence = false;
  bool from_variational = false;
};

/// Needs at least 3 samples, at least one of them paired with a sample at
/// half its radius. Throws PreconditionError otherwise.
FitResult fit_deficit_coefficient(std::span<const DeficitSample> samples, int n, double lambda);

enum class SignCall { nonnegative, negative, indeterminate };

const char* to_string(SignCall s);

struct SignDecision {
  SignCall call = SignCall::indeterminate;
  bool zero_flag = false;  // kappa_hat indistinguishable from 0 at method precision
  double dead_zone = 0.0;
};

inline constexpr double kDeadZoneFactor = 3.0;

SignDecision nonnegativity_detector(const FitResult& fit);
SignDecision nonnegativity_detector(std::span<const DeficitSample> samples, int n, double lambda);

struct ConjectureRow {
  double lambda = 2.0;
  FitResult fit;
  SignDecision r2_status;
  double r4_coefficient = 0.0;  // deficit ~ a4 r^4, from the even fit
  std::vector<DeficitSample> samples;
};

/// Exploratory scan on a model with S(p) = 0: per lambda, the r^2 fit and the
/// residual r^4 coefficient. Throws PreconditionError when S(p) != 0.
std::vector<ConjectureRow> conjecture_scan(const MetricModel& model,
                                           std::span<const double> lambdas,
                                           std::span<const double> radii,
                                           const CollectOptions& options = {});

/// r0 2^-k for k = 0..levels-1 with r0 = min(0.2, validity / (2 lambda)).
std::vector<double> default_radii(const MetricModel& model, double lambda, int levels = 6);

}  // namespace capcurv
