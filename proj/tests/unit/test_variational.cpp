#include "capcurv/errors.hpp"
#include "capcurv/variational.hpp"

#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

using namespace capcurv;
using Gen = CurvatureTensor::Generator;

namespace {

MetricModel s2xr_model() {
  const std::vector<Gen> g{{0, 1, 0, 1, 1.0}};
  return MetricModel::curvature_polynomial(CurvatureTensor::from_generators(3, g));
}

MetricModel flat_poly() { return MetricModel::curvature_polynomial(CurvatureTensor(3)); }

}  // namespace

TEST_CASE("resolution levels are nested") {
  const Resolution r2 = Resolution::level(2);
  CHECK(r2.radial_degree == 12);
  CHECK(r2.polar_cells == 32);
  CHECK(r2.azimuthal_cells == 64);
  const Resolution r1 = r2.coarsen();
  CHECK(r1.radial_degree == Resolution::level(1).radial_degree);
  CHECK(r1.polar_cells == Resolution::level(1).polar_cells);
  CHECK(r1.azimuthal_cells == Resolution::level(1).azimuthal_cells);
  CHECK(r2.describe() == "p12x32x64");
  CHECK_THROWS_AS(Resolution::level(-1), DomainError);
  CHECK_THROWS_AS(Resolution::level(9), DomainError);
  CHECK_THROWS_AS((Resolution{0, 8, 16}.check()), DomainError);
  CHECK_THROWS_AS((Resolution{4, 1, 16}.check()), DomainError);
}

TEST_CASE("flat annulus: default resolution within 1% of 2 and monotone refinement") {
  const CapacityQuery q{flat_poly(), 1.0, 2.0};
  std::vector<double> energies;
  for (int level = 0; level <= kDefaultResolutionLevel; ++level) {
    energies.push_back(solve_dirichlet(q, Resolution::level(level)).energy);
  }
  for (std::size_t i = 1; i < energies.size(); ++i) {
    CHECK(energies[i] <= energies[i - 1] * (1.0 + 1e-12));
  }
  const VariationalResult v = variational_capacity(q, Resolution::level(kDefaultResolutionLevel));
  CHECK(std::abs(v.capacity.value - 2.0) <= 0.02);
  CHECK(std::abs(v.capacity.value - 2.0) <= 1e-8);
  // nested spaces: discrete energies bound the exact one from above, up to
  // the solver tolerance
  CHECK(v.capacity.value >= 2.0 * (1.0 - 1e-9));
  CHECK(std::abs(v.capacity.deficit) <= 1e-8);
  CHECK(v.capacity.method == CapacityMethod::variational);
  CHECK(v.capacity.error_estimate == doctest::Approx(std::abs(v.coarse_value - v.capacity.value)));
  CHECK(v.stats.unknowns > 0);
  CHECK(v.probe.sup_deviation <= 1e-6);
  CHECK(v.probe.gradient_deviation <= 1e-5);
}

TEST_CASE("S3 as a warped product through the generic path") {
  const MetricModel s3 = MetricModel::warped_product(3, Warp::sine(1.0));
  const CapacityQuery q{s3, 0.1, 2.0};
  const VariationalResult v = variational_capacity(q, Resolution::level(1));
  const double exact = 0.19866933079506122;
  CHECK(std::abs(v.capacity.value / exact - 1.0) <= 0.01);
  CHECK(v.capacity.value >= exact - v.capacity.error_estimate);
  CHECK(std::abs(v.capacity.value - exact) <= std::max(v.capacity.error_estimate, 1e-10 * exact));
}

TEST_CASE("S2xR: variational value sits below the szego bound") {
  const CapacityQuery q{s2xr_model(), 0.2, 2.0};
  const VariationalResult v = variational_capacity(q, Resolution::level(1));
  const CapacityResult s = szego_upper_bound(q);
  CHECK(s.value >= v.capacity.value - v.capacity.error_estimate);
  CHECK(v.capacity.deficit > 0.0);
  CHECK(v.capacity.value < euclidean_relative_capacity(3, 0.2, 0.4));
}

TEST_CASE("harmonic probe dispatch") {
  const HarmonicProbeResult sym = harmonic_probe({MetricModel::space_form(3, 1.0), 0.1, 2.0},
                                                 Resolution::level(0));
  CHECK(sym.sup_deviation == doctest::Approx(0.0011462979792290495).epsilon(1e-4));
  const HarmonicProbeResult flat = harmonic_probe({flat_poly(), 1.0, 2.0}, Resolution::level(1));
  CHECK(flat.sup_deviation <= 1e-5);
  CHECK(flat.radius == 1.0);
}

TEST_CASE("solver limits and unsupported inputs") {
  const CapacityQuery q{s2xr_model(), 0.1, 2.0};
  SolverOptions tight;
  tight.max_iterations = 2;
  CHECK_THROWS_AS(solve_dirichlet(q, Resolution::level(1), tight), SolverError);

  const MetricModel four = MetricModel::space_form(4, 1.0);
  CHECK_THROWS_AS(solve_dirichlet({four, 0.1, 2.0}, Resolution::level(0)), UnsupportedMethod);
  CHECK_THROWS_AS(variational_capacity({s2xr_model(), 0.1, 0.5}, Resolution::level(0)), DomainError);
}

TEST_CASE("field dump") {
  const DirichletSolution s = solve_dirichlet({flat_poly(), 1.0, 2.0}, Resolution::level(0));
  const auto path = std::filesystem::temp_directory_path() / "capcurv_field_dump_test.csv";
  s.field.write_csv(path.string());
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "x,y,z,rho,u");
  std::size_t lines = 0;
  std::string line;
  while (std::getline(in, line)) ++lines;
  CHECK(lines == s.field.node_count());
  CHECK(s.field.node_count() == s.field.shell_size() * s.field.radial_nodes().size());
  // boundary values
  CHECK(s.field.values().front() == 0.0);
  CHECK(s.field.values().back() == 1.0);
  const Eigen::Vector3d outer = s.field.position(s.field.node_count() - 1);
  CHECK(outer.norm() == doctest::Approx(2.0));
  std::filesystem::remove(path);
}
