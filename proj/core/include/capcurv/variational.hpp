#pragma once

#include "capcurv/capacity.hpp"

#include <string>
#include <vector>

namespace capcurv {

/// Discretization of the annulus r <= |y| <= lambda r in spherical
/// coordinates (rho, theta, phi): one polynomial element of the given degree
/// in rho on Chebyshev-Lobatto nodes, bilinear cells on a latitude-longitude
/// grid, the two poles collapsed to single nodes on every radial shell.
/// Spaces are nested under refine()/coarsen(), so discrete energies decrease
/// monotonically under refinement.
struct Resolution {
  int radial_degree = 12;
  int polar_cells = 32;
  int azimuthal_cells = 64;

  /// Level L: degree 4 + 4L, 8 * 2^L polar cells, 16 * 2^L azimuthal cells.
  static Resolution level(int L);
  Resolution coarsen() const;
  std::string describe() const;
  void check() const;
};

inline constexpr int kDefaultResolutionLevel = 2;

struct SolverOptions {
  /// Stop when the relative energy decrease over `window` iterations drops
  /// below this.
  double energy_tolerance = 1e-10;
  int window = 10;
  /// Also required: ||b - A x|| <= residual_tolerance ||b||. Guards the energy
  /// test against a stall on the first few iterations.
  double residual_tolerance = 1e-8;
  int max_iterations = 100000;
};

struct SolverStats {
  int iterations = 0;
  double final_relative_change = 0.0;
  std::size_t unknowns = 0;
  std::size_t nonzeros = 0;
};

/// Nodal values of the discrete minimizer plus the grid it lives on.
class DiscreteField {
 public:
  DiscreteField() = default;
  DiscreteField(int n_dim, double inner_radius, double outer_radius,
                std::vector<double> radial_nodes, int polar_cells, int azimuthal_cells,
                std::vector<double> values);

  std::size_t shell_size() const;
  std::size_t node_count() const { return values_.size(); }
  const std::vector<double>& values() const { return values_; }
  const std::vector<double>& radial_nodes() const { return radial_nodes_; }
  int polar_cells() const { return polar_cells_; }
  int azimuthal_cells() const { return azimuthal_cells_; }

  /// Cartesian coordinates of node `index`.
  Eigen::Vector3d position(std::size_t index) const;

  /// CSV with header "x,y,z,rho,u", one node per line.
  void write_csv(const std::string& path) const;

 private:
  int dim_ = 3;
  double inner_radius_ = 0.0;
  double outer_radius_ = 0.0;
  std::vector<double> radial_nodes_;
  int polar_cells_ = 0;
  int azimuthal_cells_ = 0;
  std::vector<double> values_;
};

struct DirichletSolution {
  double energy = 0.0;  // integral of |grad u|^2 dV
  DiscreteField field;
  SolverStats stats;
  HarmonicProbeResult probe;
};

/// Minimizes the discrete Dirichlet energy with u = 0 on |y| = r and u = 1 on
/// |y| = lambda r, using the model's metric at the element quadrature points.
/// Dimension 3 only. Throws SolverError when the iteration limit is hit.
DirichletSolution solve_dirichlet(const CapacityQuery& query, const Resolution& resolution,
                                  const SolverOptions& options = {});

struct VariationalResult {
  CapacityResult capacity;
  DiscreteField field;
  SolverStats stats;
  HarmonicProbeResult probe;
  double coarse_value = 0.0;  // capacity at resolution.coarsen()
  Resolution resolution;
};

/// Discrete energy / ((n-2) omega_{n-1}) at `resolution`; error_estimate is
/// the gap to the next-coarser nested level.
VariationalResult variational_capacity(const CapacityQuery& query, const Resolution& resolution,
                                       const SolverOptions& options = {});

/// Symmetric models: exact radial solution. Otherwise: deviations of the
/// discrete minimizer at `resolution` (nodal values, element gradients).
HarmonicProbeResult harmonic_probe(const CapacityQuery& query, const Resolution& resolution);

}  // namespace capcurv
