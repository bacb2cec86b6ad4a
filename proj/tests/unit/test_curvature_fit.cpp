#include "capcurv/curvature_fit.hpp"
#include "capcurv/errors.hpp"
#include "capcurv/expansion.hpp"

#include "doctest.h"

#include <cmath>
#include <vector>

using namespace capcurv;
using Gen = CurvatureTensor::Generator;

namespace {

std::vector<double> dyadic(double r0, int levels) {
  std::vector<double> r;
  for (int k = 0; k < levels; ++k) r.push_back(r0 * std::ldexp(1.0, -k));
  return r;
}

FitResult space_form_fit(int n, double K, double lambda, std::vector<double> radii) {
  const auto samples = collect_deficits(MetricModel::space_form(n, K), lambda, radii);
  return fit_deficit_coefficient(samples, n, lambda);
}

}  // namespace

TEST_CASE("collect deficits") {
  const std::vector<double> radii{0.2, 0.1, 0.05, 0.025};
  const auto flat = collect_deficits(MetricModel::space_form(3, 0.0), 2.0, radii);
  REQUIRE(flat.size() == 4);
  for (const auto& s : flat) CHECK(std::abs(s.deficit) <= 1e-12);

  const auto pos = collect_deficits(MetricModel::space_form(3, 1.0), 2.0, radii);
  const auto neg = collect_deficits(MetricModel::space_form(3, -1.0), 2.0, radii);
  CHECK(pos[1].deficit == doctest::Approx(0.0066533460246939227).epsilon(1e-9));
  CHECK(neg[1].deficit == doctest::Approx(-0.0066800127054699381).epsilon(1e-9));
  for (std::size_t i = 0; i < radii.size(); ++i) {
    CHECK(pos[i].r == radii[i]);
    CHECK(pos[i].method == CapacityMethod::symmetric_quadrature);
    CHECK(pos[i].deficit / (radii[i] * radii[i]) == doctest::Approx(2.0 / 3.0).epsilon(0.02));
    CHECK(neg[i].deficit / (radii[i] * radii[i]) == doctest::Approx(-2.0 / 3.0).epsilon(0.02));
    CHECK(pos[i].error_estimate >= 0.0);
  }

  const std::vector<double> ascending{0.05, 0.1};
  CHECK_THROWS_AS(collect_deficits(MetricModel::space_form(3, 1.0), 2.0, ascending), PreconditionError);
  const std::vector<double> too_big{2.0};
  CHECK_THROWS_AS(collect_deficits(MetricModel::space_form(3, 1.0), 2.0, too_big), DomainError);
}

TEST_CASE("fit on space forms") {
  const FitResult flat = space_form_fit(3, 0.0, 2.0, dyadic(0.2, 6));
  CHECK(std::abs(flat.kappa_hat) <= 1e-10);
  CHECK(std::abs(flat.S_hat) <= 1e-9);

  const FitResult s3 = space_form_fit(3, 1.0, 2.0, dyadic(0.2, 6));
  CHECK(s3.kappa_hat == doctest::Approx(2.0 / 3.0).epsilon(1e-3));
  CHECK(s3.S_hat == doctest::Approx(6.0).epsilon(1e-3));
  CHECK(s3.richardson.size() == 5);
  CHECK(s3.radii_used.size() == 6);
  CHECK_FALSE(s3.low_confidence);
  CHECK_FALSE(s3.from_variational);

  const FitResult h3 = space_form_fit(3, -1.0, 2.0, dyadic(0.2, 6));
  CHECK(h3.S_hat == doctest::Approx(-6.0).epsilon(1e-3));

  for (int n = 4; n <= 6; ++n) {
    for (double lam : {1.5, 2.0}) {
      const MetricModel m = MetricModel::space_form(n, 1.0);
      const FitResult f = space_form_fit(n, 1.0, lam, default_radii(m, lam));
      CHECK(f.kappa_hat == doctest::Approx(deficit_coefficient(n, lam, m.scalar_curvature())).epsilon(1e-6));
      CHECK(f.S_hat == doctest::Approx(n * (n - 1.0)).epsilon(1e-6));
    }
  }
}

TEST_CASE("extrapolation gap shrinks with the radius and bounds the least-squares gap") {
  for (int n : {3, 4, 5}) {
    for (double K : {1.0, -1.0}) {
      const FitResult f = space_form_fit(n, K, 2.0, dyadic(0.2, 6));
      for (std::size_t i = 1; i < f.richardson.size(); ++i) {
        CHECK(f.richardson[i - 1].gap / f.richardson[i].gap >= 3.5);
      }
      CHECK(std::abs(f.kappa_hat - f.ls_a2) <= 5.0 * f.extrapolation_gap);
      CHECK(std::abs(f.ls_odd_a3) < 1.0);
    }
  }
}

TEST_CASE("fit preconditions") {
  const auto samples = collect_deficits(MetricModel::space_form(3, 1.0), 2.0, dyadic(0.2, 4));
  CHECK_THROWS_AS(fit_deficit_coefficient(std::span(samples).first(2), 3, 2.0), PreconditionError);
  const auto no_pairs = collect_deficits(MetricModel::space_form(3, 1.0), 2.0,
                                         std::vector<double>{0.2, 0.15, 0.12});
  CHECK_THROWS_AS(fit_deficit_coefficient(no_pairs, 3, 2.0), PreconditionError);
}

TEST_CASE("nonnegativity detector") {
  for (int n = 3; n <= 6; ++n) {
    for (double K : {1.0, -1.0, 0.5, -0.5}) {
      const MetricModel m = MetricModel::space_form(n, K);
      if (std::abs(m.scalar_curvature()) < 1.0) continue;
      const auto samples = collect_deficits(m, 2.0, default_radii(m, 2.0));
      const SignDecision d = nonnegativity_detector(samples, n, 2.0);
      CHECK(d.call == (K > 0 ? SignCall::nonnegative : SignCall::negative));
      CHECK_FALSE(d.zero_flag);
    }
  }
  const auto flat = collect_deficits(MetricModel::space_form(3, 0.0), 2.0, dyadic(0.2, 6));
  const SignDecision z = nonnegativity_detector(flat, 3, 2.0);
  CHECK(z.call == SignCall::nonnegative);
  CHECK(z.zero_flag);
  CHECK(std::string(to_string(SignCall::indeterminate)) == "indeterminate");
}

TEST_CASE("detector dead zone and variational one-sidedness") {
  // hand-made fits exercising each rule
  FitResult f;
  f.extrapolation_gap = 0.1;
  f.kappa_hat = 0.2;
  CHECK(nonnegativity_detector(f).call == SignCall::indeterminate);
  f.from_variational = true;
  CHECK(nonnegativity_detector(f).call == SignCall::nonnegative);
  f.kappa_hat = -0.2;
  CHECK(nonnegativity_detector(f).call == SignCall::indeterminate);
  f.kappa_hat = -0.5;
  CHECK(nonnegativity_detector(f).call == SignCall::negative);
  f.kappa_hat = 1e-12;
  const SignDecision z = nonnegativity_detector(f);
  CHECK(z.call == SignCall::nonnegative);
  CHECK(z.zero_flag);
  CHECK(z.dead_zone == doctest::Approx(kDeadZoneFactor * 0.1));
}

TEST_CASE("conjecture scan") {
  const std::vector<double> lambdas{1.5, 2.0};
  const std::vector<double> radii = dyadic(0.2, 5);
  CHECK_THROWS_AS(conjecture_scan(MetricModel::space_form(3, 1.0), lambdas, radii), PreconditionError);

  const auto flat = conjecture_scan(MetricModel::space_form(3, 0.0), lambdas, radii);
  REQUIRE(flat.size() == 2);
  for (const auto& row : flat) {
    CHECK(std::abs(row.r4_coefficient) <= 1e-8);
    CHECK(row.r2_status.zero_flag);
  }

  // scalar-flat but curved warp: phi = r + r^5 has S(p) = 0 and a nonzero
  // quartic deficit term
  const MetricModel w = MetricModel::warped_product(3, Warp::polynomial(0.0, 1.0), 0.5);
  const auto rows = conjecture_scan(w, std::vector<double>{2.0}, dyadic(0.2, 5));
  REQUIRE(rows.size() == 1);
  CHECK(std::abs(rows[0].fit.kappa_hat) <= 0.01 * std::abs(rows[0].r4_coefficient));
  CHECK(std::abs(rows[0].r4_coefficient) > 0.1);

  // the zero-trace tensor through the variational path at a coarse level
  const std::vector<Gen> g{{0, 1, 0, 1, 1.0}, {0, 2, 0, 2, -1.0}};
  const MetricModel z = MetricModel::curvature_polynomial(CurvatureTensor::from_generators(3, g));
  CollectOptions opts;
  opts.resolution = Resolution::level(1);
  const auto zrows = conjecture_scan(z, std::vector<double>{2.0}, std::vector<double>{0.3, 0.2, 0.15, 0.1}, opts);
  REQUIRE(zrows.size() == 1);
  CHECK(zrows[0].fit.from_variational);
  CHECK(std::abs(zrows[0].fit.kappa_hat) <= 0.25 * deficit_coefficient(3, 2.0, 2.0));
  CHECK(std::isfinite(zrows[0].r4_coefficient));
}

TEST_CASE("default radii") {
  const auto r = default_radii(MetricModel::space_form(3, 1.0), 2.0);
  REQUIRE(r.size() == 6);
  CHECK(r[0] == 0.2);
  CHECK(r[5] == doctest::Approx(0.2 / 32.0));
  const MetricModel tight = MetricModel::warped_product(3, Warp::polynomial(0.0, 1.0), 0.5);
  CHECK(default_radii(tight, 2.0)[0] == doctest::Approx(0.125));
}
