#pragma once

#include <functional>
#include <vector>

namespace capcurv {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const { return nodes.size(); }
};

/// n-point Gauss-Legendre rule on [-1, 1].
QuadratureRule gauss_legendre(int n);

/// n-point Gauss-Legendre rule mapped to [a, b].
QuadratureRule gauss_legendre(int n, double a, double b);

struct Integral {
  double value = 0.0;
  double error = 0.0;
};

/// Globally adaptive Gauss-Kronrod (7/15) integration of a smooth integrand:
/// the interval with the largest error is bisected until the summed error
/// estimate is at most max(rel_tol * |value|, abs_tol), or the interval
/// budget runs out (the estimate then reports what was reached).
Integral integrate_adaptive(const std::function<double(double)>& f, double a,
                            double b, double rel_tol = 1e-12, double abs_tol = 0.0);

/// Chebyshev-Gauss-Lobatto points on [a, b], ascending, p+1 of them.
std::vector<double> chebyshev_lobatto(int p, double a, double b);

/// Lagrange basis for an arbitrary node set, evaluated with the barycentric
/// formula. values[j] = l_j(x), derivatives[j] = l_j'(x).
class LagrangeBasis {
 public:
  explicit LagrangeBasis(std::vector<double> nodes);

  std::size_t size() const { return nodes_.size(); }
  const std::vector<double>& nodes() const { return nodes_; }

  void evaluate(double x, std::vector<double>& values,
                std::vector<double>& derivatives) const;

 private:
  std::vector<double> nodes_;
  std::vector<double> bary_;
};

}  // namespace capcurv
