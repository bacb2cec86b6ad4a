#include "capcurv/capacity.hpp"
#include "capcurv/errors.hpp"

#include "doctest.h"

#include <cmath>
#include <numbers>
#include <vector>

using namespace capcurv;
using Gen = CurvatureTensor::Generator;

namespace {

MetricModel s2xr_model() {
  const std::vector<Gen> g{{0, 1, 0, 1, 1.0}};
  return MetricModel::curvature_polynomial(CurvatureTensor::from_generators(3, g));
}

double rel(double a, double b) { return std::abs(a / b - 1.0); }

}  // namespace

TEST_CASE("euclidean relative capacity") {
  CHECK(euclidean_relative_capacity(3, 1.0, 2.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(euclidean_relative_capacity(3, 1.0, kInfiniteRadius) == 1.0);
  CHECK(euclidean_relative_capacity(5, 0.5, kInfiniteRadius) == doctest::Approx(0.125));
  CHECK(euclidean_relative_capacity(2, 1.0, std::numbers::e) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(euclidean_relative_capacity(1, 1.0, 3.0) == 0.5);
  CHECK_THROWS_AS(euclidean_relative_capacity(2, 1.0, kInfiniteRadius), DomainError);
  CHECK_THROWS_AS(euclidean_relative_capacity(1, 1.0, kInfiniteRadius), DomainError);
  CHECK_THROWS_AS(euclidean_relative_capacity(3, 2.0, 1.0), DomainError);
  CHECK_THROWS_AS(euclidean_relative_capacity(3, 0.0, 1.0), DomainError);
}

TEST_CASE("symmetric capacity: closed-form oracles") {
  const CapacityResult flat = symmetric_capacity({MetricModel::space_form(3, 0.0), 1.0, 2.0});
  CHECK(rel(flat.value, 2.0) <= 1e-14);
  CHECK(std::abs(flat.deficit) <= 1e-14);

  const CapacityResult s3 = symmetric_capacity({MetricModel::space_form(3, 1.0), 0.1, 2.0});
  CHECK(rel(s3.value, 0.19866933079506122) <= 1e-12);
  CHECK(s3.deficit == doctest::Approx(0.0066533460246939227).epsilon(1e-9));
  CHECK(s3.method == CapacityMethod::symmetric_quadrature);
  CHECK(s3.error_estimate <= 1e-10 * s3.value);

  const CapacityResult h3 = symmetric_capacity({MetricModel::space_form(3, -1.0), 0.1, 2.0});
  CHECK(rel(h3.value, 0.20133600254109399) <= 1e-12);
  CHECK(h3.deficit == doctest::Approx(-0.0066800127054699381).epsilon(1e-9));

  // warped-product presentation of S3
  const CapacityResult w = symmetric_capacity({MetricModel::warped_product(3, Warp::sine(1.0)), 0.1, 2.0});
  CHECK(rel(w.value, 0.19866933079506122) <= 1e-12);

  CHECK_THROWS_AS(symmetric_capacity({s2xr_model(), 0.1, 2.0}), UnsupportedMethod);
}

TEST_CASE("capacity queries are checked") {
  const MetricModel s3 = MetricModel::space_form(3, 1.0);
  CHECK_THROWS_AS(symmetric_capacity({s3, 0.1, 1.0}), DomainError);
  CHECK_THROWS_AS(symmetric_capacity({s3, 0.1, 0.9}), DomainError);
  CHECK_THROWS_AS(symmetric_capacity({s3, -0.1, 2.0}), DomainError);
  CHECK_THROWS_AS(symmetric_capacity({s3, 2.0, 2.0}), DomainError);
}

TEST_CASE("quadrature error estimates stay below 1e-10 of the value") {
  for (int n = 3; n <= 8; ++n) {
    for (double K : {1.0, -1.0}) {
      for (double r : {0.2, 0.025, 0.003125}) {
        const CapacityResult c = symmetric_capacity({MetricModel::space_form(n, K), r, 2.0});
        CAPTURE(n);
        CAPTURE(r);
        CHECK(c.error_estimate <= 1e-10 * c.value);
      }
    }
  }
}

TEST_CASE("szego bound") {
  const CapacityQuery q{MetricModel::space_form(3, 1.0), 0.1, 2.0};
  const CapacityResult a = symmetric_capacity(q);
  const CapacityResult b = szego_upper_bound(q);
  CHECK(rel(b.value, a.value) <= 1e-12);
  CHECK(b.method == CapacityMethod::szego_bound);
  CHECK(b.upper_bound);
  for (int n = 3; n <= 8; ++n) {
    for (double K : {-1.0, 1.0}) {
      const CapacityQuery qn{MetricModel::space_form(n, K), 0.01, 10.0};
      CHECK(rel(szego_upper_bound(qn).value, symmetric_capacity(qn).value) <= 1e-11);
    }
  }

  const MetricModel flat_poly = MetricModel::curvature_polynomial(CurvatureTensor(3));
  const CapacityResult f = szego_upper_bound({flat_poly, 1.0, 2.0});
  CHECK(std::abs(f.value - 2.0) <= std::max(f.error_estimate, 1e-12));
  CHECK(f.upper_bound);
  CHECK(f.method == CapacityMethod::szego_bound);

  const CapacityResult s = szego_upper_bound({s2xr_model(), 0.2, 2.0});
  CHECK(rel(s.value, 0.3964165133580004) <= 1e-10);
  CHECK(s.value <= euclidean_relative_capacity(3, 0.2, 0.4));
  CHECK(s.deficit > 0.0);
  CHECK(s.error_estimate <= 1e-10 * s.value);
}

TEST_CASE("monotone in lambda and r, scaling on the flat model") {
  for (const auto& m : {MetricModel::space_form(3, 1.0), MetricModel::space_form(4, -1.0),
                        MetricModel::space_form(6, 0.5)}) {
    for (double r : {0.025, 0.05, 0.1}) {
      double prev = std::numeric_limits<double>::infinity();
      for (double lam : {1.5, 2.0, 4.0, 8.0}) {
        const double c = symmetric_capacity({m, r, lam}).value;
        CHECK(c < prev);
        prev = c;
      }
    }
    for (double lam : {1.5, 2.0, 4.0}) {
      double prev = 0.0;
      for (double r : {0.0125, 0.025, 0.05, 0.1}) {
        const double c = symmetric_capacity({m, r, lam}).value;
        CHECK(c > prev);
        prev = c;
      }
    }
  }
  for (int n = 3; n <= 7; ++n) {
    const MetricModel flat = MetricModel::space_form(n, 0.0);
    for (double lam : {1.5, 2.0, 10.0}) {
      const double unit = symmetric_capacity({flat, 1.0, lam}).value;
      for (double r : {0.01, 0.3, 7.0}) {
        const double c = symmetric_capacity({flat, r, lam}).value;
        CHECK(rel(c, std::pow(r, n - 2) * unit) <= 1e-10);
      }
    }
  }
}

TEST_CASE("harmonic probe on symmetric models") {
  const CapacityQuery flat{MetricModel::space_form(3, 0.0), 1.0, 2.0};
  const HarmonicProbeResult f = symmetric_harmonic_probe(flat);
  CHECK(f.sup_deviation <= 1e-12);
  CHECK(f.gradient_deviation <= 1e-12);

  // dense-grid oracle of the exact S3 radial solution
  const HarmonicProbeResult p1 = symmetric_harmonic_probe({MetricModel::space_form(3, 1.0), 0.1, 2.0});
  const HarmonicProbeResult p2 = symmetric_harmonic_probe({MetricModel::space_form(3, 1.0), 0.05, 2.0});
  CHECK(rel(p1.sup_deviation, 0.0011462979792290495) <= 1e-4);
  CHECK(rel(p1.gradient_deviation, 0.06671115348152767) <= 1e-4);
  CHECK(rel(p2.sup_deviation, 0.00028610942939377715) <= 1e-4);
  CHECK(rel(p2.gradient_deviation, 0.03333889021196512) <= 1e-4);
  CHECK(p1.sup_deviation / p2.sup_deviation == doctest::Approx(4.0).epsilon(0.02));
  CHECK(p1.gradient_deviation / p2.gradient_deviation == doctest::Approx(2.0).epsilon(0.02));

  CHECK(euclidean_profile(3, 2.0, 1.0, 1.0) == 0.0);
  CHECK(euclidean_profile(3, 2.0, 1.0, 2.0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(symmetric_harmonic_probe({s2xr_model(), 0.1, 2.0}), UnsupportedMethod);
}
