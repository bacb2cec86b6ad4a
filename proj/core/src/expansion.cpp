#include "capcurv/expansion.hpp"

#include "capcurv/capacity.hpp"
#include "capcurv/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace capcurv {

namespace {

void check_parameters(int n, double lambda) {
  if (n < 3) throw DomainError("expansion: n must be >= 3");
  if (!(lambda > 1.0)) throw DomainError("expansion: lambda must be > 1");
}

}  // namespace

const char* to_string(ExpansionBranch b) {
  switch (b) {
    case ExpansionBranch::n3: return "n3";
    case ExpansionBranch::n4: return "n4";
    case ExpansionBranch::n5plus: return "n5plus";
    case ExpansionBranch::unified: return "unified";
  }
  return "?";
}

double deficit_coefficient(int n, double lambda, double S) {
  check_parameters(n, lambda);
  if (n == 3) return S * lambda / 18.0;
  if (n == 4) return S / 12.0 * std::log(lambda) / (1.0 - std::pow(lambda, -2.0));
  const double nd = n;
  return (nd - 2.0) * S / (6.0 * nd * (nd - 4.0)) * (1.0 - std::pow(lambda, 4.0 - nd)) /
         (1.0 - std::pow(lambda, 2.0 - nd));
}

double unified_deficit(int n, double lambda, double r, double S) {
  check_parameters(n, lambda);
  if (!(r > 0.0)) throw DomainError("expansion: r must be > 0");
  // |n-4|* : the factor is dropped in dimension four
  const double abs_n4 = n == 4 ? 1.0 : std::abs(n - 4.0);
  const double ratio = euclidean_relative_capacity(n, r, lambda * r) /
                       euclidean_relative_capacity(n - 2, r, lambda * r);
  return (n - 2.0) * S / (6.0 * n * abs_n4) * ratio;
}

ExpansionPrediction predicted_capacity(int n, double lambda, double r, double S) {
  ExpansionPrediction p;
  p.n = n;
  p.lambda = lambda;
  p.r = r;
  p.S = S;
  p.branch = n == 3 ? ExpansionBranch::n3 : n == 4 ? ExpansionBranch::n4 : ExpansionBranch::n5plus;
  p.deficit_coefficient = deficit_coefficient(n, lambda, S);
  p.euclidean_capacity = euclidean_relative_capacity(n, r, lambda * r);
  p.predicted_capacity = p.euclidean_capacity * (1.0 - p.deficit_coefficient * r * r);
  p.unified_deficit = unified_deficit(n, lambda, r, S);
  p.unified_capacity = p.euclidean_capacity * (1.0 - p.unified_deficit);
  p.in_asymptotic_regime = p.deficit_coefficient * r * r <= 0.5 && p.predicted_capacity > 0.0;
  return p;
}

BoundPredictions bound_predictions(int n, double lambda, double r, double S,
                                   double window_coefficient) {
  const ExpansionPrediction p = predicted_capacity(n, lambda, r, S);
  BoundPredictions b;
  b.upper_central = p.predicted_capacity;
  b.lower_central = p.predicted_capacity;
  // The r^4 remainder picks up powers of the outer radius in low dimension.
  const double lambda_weight = std::pow(lambda, std::max(0, 6 - n));
  b.window = window_coefficient * S * S * p.euclidean_capacity * lambda_weight * std::pow(r, 4);
  return b;
}

}  // namespace capcurv
