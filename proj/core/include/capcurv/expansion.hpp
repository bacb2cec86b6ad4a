#pragma once

namespace capcurv {

enum class ExpansionBranch { n3, n4, n5plus, unified };

const char* to_string(ExpansionBranch b);

/// Leading-order prediction cap = c_n(r, lambda r) (1 - kappa r^2).
struct ExpansionPrediction {
  int n = 3;
  double lambda = 2.0;
  double r = 0.0;
  double S = 0.0;
  double euclidean_capacity = 0.0;
  double deficit_coefficient = 0.0;  // kappa from the dimension branch
  double predicted_capacity = 0.0;
  ExpansionBranch branch = ExpansionBranch::n3;
  double unified_deficit = 0.0;  // kappa r^2 from the unified c_n / c_{n-2} form
  double unified_capacity = 0.0;
  /// False when kappa r^2 > 0.5 or the predicted value is not positive.
  bool in_asymptotic_regime = true;
};

/// kappa(n, lambda, S) from the explicit n = 3, n = 4 and n >= 5 branches.
double deficit_coefficient(int n, double lambda, double S);

/// (n-2) S / (6 n |n-4|*) * c_n(r, lambda r) / c_{n-2}(r, lambda r), where
/// |n-4|* drops the factor for n = 4. Equals deficit_coefficient * r^2.
double unified_deficit(int n, double lambda, double r, double S);

ExpansionPrediction predicted_capacity(int n, double lambda, double r, double S);

/// Central values of the upper (O(r^4) remainder) and lower (o(r^2)
/// remainder) capacity bounds. Both coincide with the leading-order
/// prediction; the harness checks computed capacities against
/// central +/- window.
struct BoundPredictions {
  double upper_central = 0.0;
  double lower_central = 0.0;
  int upper_remainder_order = 4;  // relative O(r^4)
  const char* lower_remainder = "o(r^2)";
  /// Half-width of the acceptance window:
  /// coefficient * S^2 * c_n * lambda^max(0, 6 - n) * r^4.
  double window = 0.0;
};

/// Empirical window coefficient. On space forms with 3 <= n <= 8,
/// lambda <= 32 and lambda * r <= 1.6 the observed constant stays below 4e-3.
inline constexpr double kSandwichWindowCoefficient = 0.02;

BoundPredictions bound_predictions(int n, double lambda, double r, double S,
                                   double window_coefficient = kSandwichWindowCoefficient);

}  // namespace capcurv
