#include "capcurv/curvature_tensor.hpp"

#include "capcurv/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace capcurv {

CurvatureTensor::CurvatureTensor(int dim) : dim_(dim) {
  if (dim < 2) throw DomainError("CurvatureTensor: dimension must be >= 2");
  data_.assign(static_cast<std::size_t>(dim) * dim * dim * dim, 0.0);
}

CurvatureTensor CurvatureTensor::from_generators(int dim, std::span<const Generator> gens) {
  CurvatureTensor t(dim);
  std::vector<char> set(t.data_.size(), 0);

  auto assign = [&](int i, int k, int j, int l, double v) {
    const std::size_t idx = t.index(i, k, j, l);
    if (set[idx] && std::abs(t.data_[idx] - v) > 0.0) {
      std::ostringstream msg;
      msg << "curvature generators conflict at (" << i + 1 << "," << k + 1 << "," << j + 1
          << "," << l + 1 << "): " << t.data_[idx] << " vs " << v;
      throw ValidationError(msg.str());
    }
    t.data_[idx] = v;
    set[idx] = 1;
  };

  for (const Generator& g : gens) {
    for (int idx : {g.i, g.k, g.j, g.l}) {
      if (idx < 0 || idx >= dim) throw DomainError("curvature generator index out of range");
    }
    const double v = g.value;
    // antisymmetry within each pair, then the same for the exchanged pairs
    assign(g.i, g.k, g.j, g.l, v);
    assign(g.k, g.i, g.j, g.l, -v);
    assign(g.i, g.k, g.l, g.j, -v);
    assign(g.k, g.i, g.l, g.j, v);
    assign(g.j, g.l, g.i, g.k, v);
    assign(g.l, g.j, g.i, g.k, -v);
    assign(g.j, g.l, g.k, g.i, -v);
    assign(g.l, g.j, g.k, g.i, v);
  }
  return t;
}

CurvatureTensor CurvatureTensor::from_components(int dim, std::vector<double> components) {
  CurvatureTensor t(dim);
  if (components.size() != t.data_.size()) {
    throw DomainError("CurvatureTensor: expected dim^4 components");
  }
  t.data_ = std::move(components);
  return t;
}

double CurvatureTensor::scalar_trace() const {
  double s = 0.0;
  for (int i = 0; i < dim_; ++i) {
    for (int k = 0; k < dim_; ++k) s += (*this)(i, k, i, k);
  }
  return s;
}

Eigen::MatrixXd CurvatureTensor::contract(const Eigen::VectorXd& y) const {
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(dim_, dim_);
  for (int i = 0; i < dim_; ++i) {
    for (int j = 0; j < dim_; ++j) {
      double acc = 0.0;
      for (int k = 0; k < dim_; ++k) {
        if (y[k] == 0.0) continue;
        for (int l = 0; l < dim_; ++l) acc += (*this)(i, k, j, l) * y[k] * y[l];
      }
      q(i, j) = acc;
    }
  }
  return q;
}

double CurvatureTensor::max_symmetry_violation() const {
  double worst = 0.0;
  const auto& R = *this;
  for (int i = 0; i < dim_; ++i)
    for (int k = 0; k < dim_; ++k)
      for (int j = 0; j < dim_; ++j)
        for (int l = 0; l < dim_; ++l) {
          const double v = R(i, k, j, l);
          worst = std::max(worst, std::abs(v + R(k, i, j, l)));
          worst = std::max(worst, std::abs(v + R(i, k, l, j)));
          worst = std::max(worst, std::abs(v - R(j, l, i, k)));
          worst = std::max(worst, std::abs(v + R(i, j, l, k) + R(i, l, k, j)));
        }
  return worst;
}

bool CurvatureTensor::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return v == 0.0; });
}

}  // namespace capcurv
