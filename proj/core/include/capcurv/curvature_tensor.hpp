#pragma once

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace capcurv {

/// Riemann tensor components R_{ikjl} at the base point, stored densely.
///
/// Index convention: R_{ikik} for i != k is the sectional curvature of the
/// (e_i, e_k) plane, and the normal-coordinate metric is
/// g_ij(y) = delta_ij - (1/3) R_{ikjl} y^k y^l. Indices are zero-based here;
/// the config file uses one-based indices.
class CurvatureTensor {
 public:
  struct Generator {
    int i, k, j, l;
    double value;
  };

  /// The zero tensor of dimension dim.
  explicit CurvatureTensor(int dim);

  /// Closes the generators under antisymmetry in each pair and pair
  /// exchange. Throws ValidationError when two generators disagree on a
  /// component. The first Bianchi identity is not enforced here; validate()
  /// reports it.
  static CurvatureTensor from_generators(int dim, std::span<const Generator> gens);

  /// Raw components in row-major (i,k,j,l) order, taken as given.
  static CurvatureTensor from_components(int dim, std::vector<double> components);

  int dim() const { return dim_; }

  double operator()(int i, int k, int j, int l) const {
    return data_[index(i, k, j, l)];
  }

  /// Sum over i,k of R_{ikik}: the scalar curvature at the base point.
  double scalar_trace() const;

  /// Q_ij = R_{ikjl} y^k y^l.
  Eigen::MatrixXd contract(const Eigen::VectorXd& y) const;

  /// Largest absolute violation of antisymmetry, pair symmetry and the first
  /// Bianchi identity over all index quadruples.
  double max_symmetry_violation() const;

  bool is_zero() const;

 private:
  std::size_t index(int i, int k, int j, int l) const {
    return ((static_cast<std::size_t>(i) * dim_ + k) * dim_ + j) * dim_ + l;
  }

  int dim_;
  std::vector<double> data_;
};

}  // namespace capcurv
