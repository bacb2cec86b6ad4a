#include "capcurv/variational.hpp"

#include "capcurv/ball_geometry.hpp"
#include "capcurv/errors.hpp"
#include "capcurv/quadrature.hpp"

#include <Eigen/Sparse>

#include <array>
#include <cmath>
#include <deque>
#include <fstream>
#include <numbers>
#include <sstream>

namespace capcurv {

namespace {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

constexpr int kAngularPoints = 3;  // Gauss points per cell and direction

// Latitude-longitude sphere grid with collapsed poles. Angular node ids:
// 0 = north pole, 1 + (a-1) * nphi + b for ring a in [1, ntheta-1], last = south pole.
struct SphereGrid {
  int ntheta;
  int nphi;

  std::size_t size() const { return 2 + static_cast<std::size_t>(ntheta - 1) * nphi; }

  std::size_t node(int a, int b) const {
    if (a == 0) return 0;
    if (a == ntheta) return size() - 1;
    return 1 + static_cast<std::size_t>(a - 1) * nphi + static_cast<std::size_t>(b % nphi);
  }

  double theta(int a) const { return std::numbers::pi * a / ntheta; }
  double phi(int b) const { return 2.0 * std::numbers::pi * b / nphi; }
};

// Shape functions of one bilinear cell at (xi, eta) in [0,1]^2, corner order
// (a,b), (a,b+1), (a+1,b), (a+1,b+1).
struct CellShape {
  std::array<double, 4> value;
  std::array<double, 4> d_theta;
  std::array<double, 4> d_phi;
};

CellShape cell_shape(double xi, double eta, double dtheta, double dphi) {
  CellShape s;
  s.value = {(1 - xi) * (1 - eta), (1 - xi) * eta, xi * (1 - eta), xi * eta};
  s.d_theta = {-(1 - eta) / dtheta, -eta / dtheta, (1 - eta) / dtheta, eta / dtheta};
  s.d_phi = {-(1 - xi) / dphi, (1 - xi) / dphi, -xi / dphi, xi / dphi};
  return s;
}

// Inverse metric in the orthonormal spherical frame, scaled so that
// |grad u|_g^2 = dq^T inverse_scaled dq with q = (rho, theta, phi), and the
// coordinate volume factor sqrt(det g) rho^2 sin(theta).
struct PointMetric {
  Eigen::Matrix3d inverse_scaled;
  double volume;
};

PointMetric point_metric(const MetricModel& model, double rho, double theta, double phi) {
  const double st = std::sin(theta), ct = std::cos(theta);
  const double sp = std::sin(phi), cp = std::cos(phi);
  Eigen::Matrix3d frame;
  frame.col(0) << st * cp, st * sp, ct;   // e_rho
  frame.col(1) << ct * cp, ct * sp, -st;  // e_theta
  frame.col(2) << -sp, cp, 0.0;           // e_phi
  const Eigen::Matrix3d g = model.metric_at(rho * frame.col(0));
  const Eigen::Matrix3d m = frame.transpose() * g.inverse() * frame;
  const Eigen::Vector3d scale(1.0, 1.0 / rho, 1.0 / (rho * st));
  return {scale.asDiagonal() * m * scale.asDiagonal(), std::sqrt(g.determinant()) * rho * rho * st};
}

struct Discretization {
  SphereGrid sphere;
  std::vector<double> radial_nodes;  // physical, ascending, p + 1 of them
  LagrangeBasis basis;               // on reference nodes in [-1, 1]
  QuadratureRule radial_rule;        // reference
  QuadratureRule angular_rule;       // on [0, 1]
  double inner, outer;

  int degree() const { return static_cast<int>(radial_nodes.size()) - 1; }
  double half() const { return 0.5 * (outer - inner); }
  double rho(double s) const { return 0.5 * (inner + outer) + half() * s; }
};

Discretization make_discretization(const CapacityQuery& q, const Resolution& res) {
  std::vector<double> reference = chebyshev_lobatto(res.radial_degree, -1.0, 1.0);
  Discretization d{SphereGrid{res.polar_cells, res.azimuthal_cells},
                   chebyshev_lobatto(res.radial_degree, q.inner_radius, q.outer_radius()),
                   LagrangeBasis(std::move(reference)),
                   gauss_legendre(res.radial_degree + 4),
                   gauss_legendre(kAngularPoints, 0.0, 1.0),
                   q.inner_radius,
                   q.outer_radius()};
  return d;
}

struct LinearSystem {
  SparseMatrix A;
  Eigen::VectorXd b;
  double c = 0.0;  // energy of the boundary lift
};

// Unknowns are radial levels 1..p-1; level 0 carries u = 0 and level p u = 1.
LinearSystem assemble(const MetricModel& model, const Discretization& d) {
  const int p = d.degree();
  const SphereGrid& sg = d.sphere;
  const std::size_t shell = sg.size();
  const std::size_t unknowns = static_cast<std::size_t>(p - 1) * shell;
  const double dtheta = std::numbers::pi / sg.ntheta;
  const double dphi = 2.0 * std::numbers::pi / sg.nphi;
  const int nr = static_cast<int>(d.radial_rule.size());
  const int m = p + 1;

  // Radial basis at the radial quadrature points (physical derivatives).
  std::vector<std::vector<double>> lv(nr), ld(nr);
  for (int k = 0; k < nr; ++k) {
    d.basis.evaluate(d.radial_rule.nodes[k], lv[k], ld[k]);
    for (double& v : ld[k]) v /= d.half();
  }

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(sg.ntheta) * sg.nphi * 16 * m * m);
  LinearSystem sys;
  sys.b = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(unknowns));

  // radial moments R[ab][j][j'] for the current angular point
  std::vector<double> moments(9 * static_cast<std::size_t>(m) * m);
  std::vector<double> element(static_cast<std::size_t>(4 * m) * (4 * m));

  for (int a = 0; a < sg.ntheta; ++a) {
    for (int b = 0; b < sg.nphi; ++b) {
      std::fill(element.begin(), element.end(), 0.0);
      for (std::size_t qa = 0; qa < d.angular_rule.size(); ++qa) {
        for (std::size_t qb = 0; qb < d.angular_rule.size(); ++qb) {
          const double xi = d.angular_rule.nodes[qa];
          const double eta = d.angular_rule.nodes[qb];
          const double theta = sg.theta(a) + xi * dtheta;
          const double phi = sg.phi(b) + eta * dphi;
          const double w_ang = d.angular_rule.weights[qa] * d.angular_rule.weights[qb] * dtheta * dphi;
          const CellShape shape = cell_shape(xi, eta, dtheta, dphi);

          std::fill(moments.begin(), moments.end(), 0.0);
          for (int k = 0; k < nr; ++k) {
            const double rho = d.rho(d.radial_rule.nodes[k]);
            const double w = d.radial_rule.weights[k] * d.half();
            const PointMetric pm = point_metric(model, rho, theta, phi);
            const Eigen::Matrix3d D = pm.inverse_scaled * (pm.volume * w);
            // f_0 = l', f_1 = f_2 = l
            for (int al = 0; al < 3; ++al) {
              const std::vector<double>& fa = al == 0 ? ld[k] : lv[k];
              for (int be = 0; be < 3; ++be) {
                const double dab = D(al, be);
                if (dab == 0.0) continue;
                const std::vector<double>& fb = be == 0 ? ld[k] : lv[k];
                double* row = &moments[static_cast<std::size_t>(al * 3 + be) * m * m];
                for (int j = 0; j < m; ++j) {
                  const double s = dab * fa[j];
                  for (int jj = 0; jj < m; ++jj) row[j * m + jj] += s * fb[jj];
                }
              }
            }
          }

          std::array<std::array<double, 4>, 3> h{shape.value, shape.d_theta, shape.d_phi};
          for (int al = 0; al < 3; ++al) {
            for (int be = 0; be < 3; ++be) {
              const double* row = &moments[static_cast<std::size_t>(al * 3 + be) * m * m];
              for (int c = 0; c < 4; ++c) {
                const double hc = w_ang * h[al][c];
                if (hc == 0.0) continue;
                for (int cc = 0; cc < 4; ++cc) {
                  const double f = hc * h[be][cc];
                  if (f == 0.0) continue;
                  for (int j = 0; j < m; ++j) {
                    double* out = &element[static_cast<std::size_t>(j * 4 + c) * (4 * m)];
                    for (int jj = 0; jj < m; ++jj) out[jj * 4 + cc] += f * row[j * m + jj];
                  }
                }
              }
            }
          }
        }
      }

      const std::array<std::size_t, 4> corners{sg.node(a, b), sg.node(a, b + 1), sg.node(a + 1, b),
                                               sg.node(a + 1, b + 1)};
      for (int j = 0; j < m; ++j) {
        for (int c = 0; c < 4; ++c) {
          const double* erow = &element[static_cast<std::size_t>(j * 4 + c) * (4 * m)];
          for (int jj = 0; jj < m; ++jj) {
            for (int cc = 0; cc < 4; ++cc) {
              const double v = erow[jj * 4 + cc];
              const bool free_i = j > 0 && j < p;
              const bool free_k = jj > 0 && jj < p;
              const double u_k = jj == p ? 1.0 : 0.0;
              if (free_i && free_k) {
                triplets.emplace_back(static_cast<int>((j - 1) * shell + corners[c]),
                                      static_cast<int>((jj - 1) * shell + corners[cc]), v);
              } else if (free_i) {
                sys.b[static_cast<Eigen::Index>((j - 1) * shell + corners[c])] -= v * u_k;
              } else if (!free_k) {
                const double u_i = j == p ? 1.0 : 0.0;
                sys.c += v * u_i * u_k;
              }
            }
          }
        }
      }
    }
  }

  sys.A.resize(static_cast<Eigen::Index>(unknowns), static_cast<Eigen::Index>(unknowns));
  sys.A.setFromTriplets(triplets.begin(), triplets.end());
  sys.A.makeCompressed();
  return sys;
}

// Jacobi-preconditioned conjugate gradients on A x = b, i.e. minimization of
// E(x) = x^T A x - 2 b^T x + c.
SolverStats minimize(const LinearSystem& sys, Eigen::VectorXd& x, const SolverOptions& opt,
                     double& energy) {
  const Eigen::VectorXd inv_diag = sys.A.diagonal().cwiseInverse();
  Eigen::VectorXd r = sys.b - sys.A * x;
  Eigen::VectorXd z = inv_diag.cwiseProduct(r);
  Eigen::VectorXd dir = z;
  Eigen::VectorXd Ad(x.size());
  double rz = r.dot(z);
  const double b_norm = sys.b.norm();

  auto current_energy = [&]() { return sys.c - x.dot(sys.b) - x.dot(r); };

  std::deque<double> history{current_energy()};
  SolverStats stats;
  stats.unknowns = static_cast<std::size_t>(x.size());
  stats.nonzeros = static_cast<std::size_t>(sys.A.nonZeros());

  for (int it = 1; it <= opt.max_iterations; ++it) {
    Ad.noalias() = sys.A * dir;
    const double dAd = dir.dot(Ad);
    if (!(dAd > 0.0)) break;  // exact solution reached
    const double alpha = rz / dAd;
    x += alpha * dir;
    r -= alpha * Ad;
    z = inv_diag.cwiseProduct(r);
    const double rz_next = r.dot(z);
    dir = z + (rz_next / rz) * dir;
    rz = rz_next;

    const double e = current_energy();
    history.push_back(e);
    if (static_cast<int>(history.size()) > opt.window + 1) history.pop_front();
    stats.iterations = it;
    if (static_cast<int>(history.size()) == opt.window + 1) {
      stats.final_relative_change = (history.front() - e) / std::abs(e);
      if (stats.final_relative_change < opt.energy_tolerance &&
          r.norm() <= opt.residual_tolerance * b_norm) {
        energy = sys.c + x.dot(sys.A * x) - 2.0 * sys.b.dot(x);
        return stats;
      }
    }
    if (r.norm() == 0.0) break;
  }
  if (stats.iterations >= opt.max_iterations) {
    std::ostringstream msg;
    msg << "variational solver did not converge in " << opt.max_iterations
        << " iterations (relative energy change " << stats.final_relative_change << ")";
    throw SolverError(msg.str(), stats.iterations, stats.final_relative_change);
  }
  energy = sys.c + x.dot(sys.A * x) - 2.0 * sys.b.dot(x);
  return stats;
}

HarmonicProbeResult probe_field(const MetricModel& model, const Discretization& d,
                                const std::vector<double>& values, double lambda) {
  const int n = 3;
  const int p = d.degree();
  const SphereGrid& sg = d.sphere;
  const std::size_t shell = sg.size();
  const double cn = euclidean_relative_capacity(n, d.inner, d.outer);
  const double dtheta = std::numbers::pi / sg.ntheta;
  const double dphi = 2.0 * std::numbers::pi / sg.nphi;

  HarmonicProbeResult out;
  out.radius = d.inner;
  for (int j = 0; j <= p; ++j) {
    const double phi0 = euclidean_profile(n, lambda, d.inner, d.radial_nodes[j]);
    for (std::size_t s = 0; s < shell; ++s) {
      out.sup_deviation = std::max(out.sup_deviation, std::abs(values[j * shell + s] - phi0));
    }
  }

  std::vector<double> lv, ld;
  for (int a = 0; a < sg.ntheta; ++a) {
    for (int b = 0; b < sg.nphi; ++b) {
      const std::array<std::size_t, 4> corners{sg.node(a, b), sg.node(a, b + 1), sg.node(a + 1, b),
                                               sg.node(a + 1, b + 1)};
      const CellShape shape = cell_shape(0.5, 0.5, dtheta, dphi);
      const double theta = sg.theta(a) + 0.5 * dtheta;
      const double phi = sg.phi(b) + 0.5 * dphi;
      for (std::size_t k = 0; k < d.radial_rule.size(); ++k) {
        const double rho = d.rho(d.radial_rule.nodes[k]);
        d.basis.evaluate(d.radial_rule.nodes[k], lv, ld);
        Eigen::Vector3d grad = Eigen::Vector3d::Zero();
        for (int j = 0; j <= p; ++j) {
          for (int c = 0; c < 4; ++c) {
            const double u = values[j * shell + corners[c]];
            grad[0] += u * ld[j] / d.half() * shape.value[c];
            grad[1] += u * lv[j] * shape.d_theta[c];
            grad[2] += u * lv[j] * shape.d_phi[c];
          }
        }
        const double norm = std::sqrt(grad.dot(point_metric(model, rho, theta, phi).inverse_scaled * grad));
        const double expected = (n - 2.0) * cn * std::pow(rho, 1 - n);
        out.gradient_deviation = std::max(out.gradient_deviation, std::abs(norm - expected));
      }
    }
  }
  return out;
}

}  // namespace

Resolution Resolution::level(int L) {
  if (L < 0 || L > 5) throw DomainError("resolution level must be in [0, 5]");
  return Resolution{4 + 4 * L, 8 << L, 16 << L};
}

Resolution Resolution::coarsen() const {
  return Resolution{std::max(2, radial_degree - 4), std::max(2, polar_cells / 2),
                    std::max(4, azimuthal_cells / 2)};
}

std::string Resolution::describe() const {
  std::ostringstream out;
  out << "p" << radial_degree << "x" << polar_cells << "x" << azimuthal_cells;
  return out.str();
}

void Resolution::check() const {
  if (radial_degree < 2) throw DomainError("resolution: radial degree must be >= 2");
  if (polar_cells < 2) throw DomainError("resolution: need at least 2 polar cells");
  if (azimuthal_cells < 3) throw DomainError("resolution: need at least 3 azimuthal cells");
}

DiscreteField::DiscreteField(int n_dim, double inner_radius, double outer_radius,
                             std::vector<double> radial_nodes, int polar_cells,
                             int azimuthal_cells, std::vector<double> values)
    : dim_(n_dim),
      inner_radius_(inner_radius),
      outer_radius_(outer_radius),
      radial_nodes_(std::move(radial_nodes)),
      polar_cells_(polar_cells),
      azimuthal_cells_(azimuthal_cells),
      values_(std::move(values)) {}

std::size_t DiscreteField::shell_size() const {
  return 2 + static_cast<std::size_t>(polar_cells_ - 1) * azimuthal_cells_;
}

Eigen::Vector3d DiscreteField::position(std::size_t index) const {
  const std::size_t shell = shell_size();
  const double rho = radial_nodes_[index / shell];
  const std::size_t s = index % shell;
  if (s == 0) return {0.0, 0.0, rho};
  if (s == shell - 1) return {0.0, 0.0, -rho};
  const auto a = static_cast<int>((s - 1) / azimuthal_cells_) + 1;
  const auto b = static_cast<int>((s - 1) % azimuthal_cells_);
  const double theta = std::numbers::pi * a / polar_cells_;
  const double phi = 2.0 * std::numbers::pi * b / azimuthal_cells_;
  return {rho * std::sin(theta) * std::cos(phi), rho * std::sin(theta) * std::sin(phi),
          rho * std::cos(theta)};
}

void DiscreteField::write_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open field dump " + path);
  out.precision(17);
  out << "x,y,z,rho,u\n";
  for (std::size_t i = 0; i < values_.size(); ++i) {
    const Eigen::Vector3d y = position(i);
    out << y[0] << ',' << y[1] << ',' << y[2] << ',' << y.norm() << ',' << values_[i] << '\n';
  }
}

DirichletSolution solve_dirichlet(const CapacityQuery& query, const Resolution& resolution,
                                  const SolverOptions& options) {
  query.check();
  resolution.check();
  if (query.model.dim() != 3) {
    throw UnsupportedMethod("variational capacity is implemented for n = 3 only");
  }
  const Discretization d = make_discretization(query, resolution);
  const LinearSystem sys = assemble(query.model, d);

  const int p = d.degree();
  const std::size_t shell = d.sphere.size();
  // start from the Euclidean radial profile
  Eigen::VectorXd x(static_cast<Eigen::Index>((p - 1) * shell));
  for (int j = 1; j < p; ++j) {
    const double u0 = euclidean_profile(3, query.ratio, query.inner_radius, d.radial_nodes[j]);
    x.segment(static_cast<Eigen::Index>((j - 1) * shell), static_cast<Eigen::Index>(shell))
        .setConstant(u0);
  }

  DirichletSolution sol;
  sol.stats = minimize(sys, x, options, sol.energy);

  std::vector<double> values(static_cast<std::size_t>(p + 1) * shell, 0.0);
  for (std::size_t s = 0; s < shell; ++s) values[p * shell + s] = 1.0;
  for (int j = 1; j < p; ++j) {
    for (std::size_t s = 0; s < shell; ++s) values[j * shell + s] = x[(j - 1) * shell + s];
  }
  sol.probe = probe_field(query.model, d, values, query.ratio);
  sol.field = DiscreteField(3, query.inner_radius, query.outer_radius(), d.radial_nodes,
                            resolution.polar_cells, resolution.azimuthal_cells, std::move(values));
  return sol;
}

VariationalResult variational_capacity(const CapacityQuery& query, const Resolution& resolution,
                                       const SolverOptions& options) {
  const double norm = 1.0 / unit_sphere_area(3);  // (n-2) omega_{n-1} with n = 3
  DirichletSolution fine = solve_dirichlet(query, resolution, options);
  const DirichletSolution coarse = solve_dirichlet(query, resolution.coarsen(), options);

  VariationalResult out;
  out.resolution = resolution;
  out.capacity.value = fine.energy * norm;
  out.capacity.method = CapacityMethod::variational;
  out.coarse_value = coarse.energy * norm;
  out.capacity.error_estimate = std::abs(out.coarse_value - out.capacity.value);
  out.capacity.euclidean_reference =
      euclidean_relative_capacity(3, query.inner_radius, query.outer_radius());
  out.capacity.deficit = 1.0 - out.capacity.value / out.capacity.euclidean_reference;
  out.capacity.upper_bound = true;
  out.field = std::move(fine.field);
  out.stats = fine.stats;
  out.probe = fine.probe;
  return out;
}

HarmonicProbeResult harmonic_probe(const CapacityQuery& query, const Resolution& resolution) {
  if (query.model.rotationally_symmetric()) return symmetric_harmonic_probe(query);
  return solve_dirichlet(query, resolution).probe;
}

}  // namespace capcurv
