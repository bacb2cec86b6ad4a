#include "capcurv/quadrature.hpp"

#include "capcurv/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/legendre.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>

namespace capcurv {

QuadratureRule gauss_legendre(int n) {
  if (n < 1) throw DomainError("gauss_legendre: need at least one point");
  // Boost returns the nonnegative zeros in ascending order.
  const std::vector<double> positive = boost::math::legendre_p_zeros<double>(n);
  QuadratureRule rule;
  rule.nodes.reserve(n);
  for (auto it = positive.rbegin(); it != positive.rend(); ++it) {
    if (*it != 0.0) rule.nodes.push_back(-*it);
  }
  for (double x : positive) rule.nodes.push_back(x);
  rule.weights.reserve(n);
  for (double x : rule.nodes) {
    const double dp = boost::math::legendre_p_prime(n, x);
    rule.weights.push_back(2.0 / ((1.0 - x * x) * dp * dp));
  }
  return rule;
}

QuadratureRule gauss_legendre(int n, double a, double b) {
  QuadratureRule rule = gauss_legendre(n);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (b + a);
  for (std::size_t i = 0; i < rule.size(); ++i) {
    rule.nodes[i] = mid + half * rule.nodes[i];
    rule.weights[i] *= half;
  }
  return rule;
}

Integral integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                            double rel_tol, double abs_tol) {
  // Boost's recursive driver leaves leaf errors in reference-interval units,
  // so only its fixed rule is used here and the error is rescaled per piece.
  using Kronrod = boost::math::quadrature::gauss_kronrod<double, 15>;
  struct Piece {
    double a, b, value, error;
    bool operator<(const Piece& o) const { return error < o.error; }
  };
  auto rule = [&](double lo, double hi) {
    double err = 0.0;
    const double v = Kronrod::integrate(f, lo, hi, 0, 0.0, &err);
    return Piece{lo, hi, v, err * 0.5 * std::abs(hi - lo)};
  };
  constexpr int kMaxPieces = 2000;
  std::priority_queue<Piece> heap;
  heap.push(rule(a, b));
  double value = heap.top().value;
  double error = heap.top().error;
  while (static_cast<int>(heap.size()) < kMaxPieces &&
         error > std::max(rel_tol * std::abs(value), abs_tol)) {
    const Piece worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const Piece left = rule(worst.a, mid);
    const Piece right = rule(mid, worst.b);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }
  // re-sum to shed the drift of the running updates
  value = 0.0;
  error = 0.0;
  while (!heap.empty()) {
    value += heap.top().value;
    error += heap.top().error;
    heap.pop();
  }
  return {value, error};
}

std::vector<double> chebyshev_lobatto(int p, double a, double b) {
  if (p < 1) throw DomainError("chebyshev_lobatto: degree must be >= 1");
  std::vector<double> x(p + 1);
  for (int j = 0; j <= p; ++j) {
    const double t = -std::cos(std::numbers::pi * j / p);
    x[j] = 0.5 * (a + b) + 0.5 * (b - a) * t;
  }
  x.front() = a;
  x.back() = b;
  return x;
}

LagrangeBasis::LagrangeBasis(std::vector<double> nodes) : nodes_(std::move(nodes)) {
  const std::size_t m = nodes_.size();
  bary_.assign(m, 1.0);
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t k = 0; k < m; ++k) {
      if (k != j) bary_[j] /= (nodes_[j] - nodes_[k]);
    }
  }
}

void LagrangeBasis::evaluate(double x, std::vector<double>& values,
                             std::vector<double>& derivatives) const {
  const std::size_t m = nodes_.size();
  values.assign(m, 0.0);
  derivatives.assign(m, 0.0);

  const double span = std::abs(nodes_.back() - nodes_.front());
  for (std::size_t j = 0; j < m; ++j) {
    if (std::abs(x - nodes_[j]) <= 1e-14 * span) {
      // x sits on a node: use the differentiation-matrix row.
      values[j] = 1.0;
      double diag = 0.0;
      for (std::size_t k = 0; k < m; ++k) {
        if (k == j) continue;
        diag += 1.0 / (nodes_[j] - nodes_[k]);
        derivatives[k] = (bary_[k] / bary_[j]) / (nodes_[j] - nodes_[k]);
      }
      derivatives[j] = diag;
      return;
    }
  }

  double ell = 1.0;
  double sum_inv = 0.0;
  for (double xk : nodes_) {
    ell *= (x - xk);
    sum_inv += 1.0 / (x - xk);
  }
  for (std::size_t j = 0; j < m; ++j) {
    const double inv = 1.0 / (x - nodes_[j]);
    values[j] = ell * bary_[j] * inv;
    derivatives[j] = values[j] * (sum_inv - inv);
  }
}

}  // namespace capcurv
