#include "capcurv/capacity.hpp"
#include "capcurv/errors.hpp"
#include "capcurv/expansion.hpp"

#include "doctest.h"

#include <algorithm>
#include <cmath>

using namespace capcurv;

TEST_CASE("deficit coefficient: worked values") {
  CHECK(deficit_coefficient(3, 2.0, 6.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(deficit_coefficient(5, 2.0, 20.0) == doctest::Approx(1.1428571428571429).epsilon(1e-15));
  for (int n = 3; n <= 9; ++n) {
    for (double lam : {1.1, 2.0, 50.0}) CHECK(deficit_coefficient(n, lam, 0.0) == 0.0);
  }
  // n = 4: (S/12) log(lambda) / (1 - lambda^-2)
  CHECK(deficit_coefficient(4, 2.0, 12.0) == doctest::Approx(std::log(2.0) / 0.75).epsilon(1e-15));
  CHECK_THROWS_AS(deficit_coefficient(3, 1.0, 6.0), DomainError);
  CHECK_THROWS_AS(deficit_coefficient(2, 2.0, 6.0), DomainError);
}

TEST_CASE("unified deficit: worked values") {
  // n = 3: c_3 / c_1 = lambda r^2
  CHECK(unified_deficit(3, 2.0, 0.1, 6.0) == doctest::Approx(6.0 * 2.0 * 0.01 / 18.0).epsilon(1e-14));
  CHECK(unified_deficit(4, 2.0, 0.1, 12.0) == doctest::Approx(0.0092419624074659375).epsilon(1e-14));
  CHECK(unified_deficit(6, 3.0, 0.1, 0.0) == 0.0);
}

TEST_CASE("predicted capacity: worked values") {
  const ExpansionPrediction p = predicted_capacity(3, 2.0, 0.1, 6.0);
  CHECK(p.predicted_capacity == doctest::Approx(0.2 * (1.0 - 0.02 / 3.0)).epsilon(1e-14));
  CHECK(p.branch == ExpansionBranch::n3);
  CHECK(std::abs(p.predicted_capacity - 0.19866933079506122) < 1e-5);
  CHECK(p.in_asymptotic_regime);

  const ExpansionPrediction m = predicted_capacity(3, 2.0, 0.1, -6.0);
  CHECK(m.predicted_capacity == doctest::Approx(0.2 * (1.0 + 0.02 / 3.0)).epsilon(1e-14));
  CHECK(std::abs(m.predicted_capacity - 0.20133600254109399) < 1e-5);

  const ExpansionPrediction f = predicted_capacity(4, 2.0, 0.1, 12.0);
  CHECK(f.predicted_capacity == doctest::Approx(0.013210107167900454).epsilon(1e-14));
  CHECK(f.branch == ExpansionBranch::n4);
  CHECK(predicted_capacity(7, 2.0, 0.1, 1.0).branch == ExpansionBranch::n5plus);

  // far from the asymptotic regime the flag drops
  CHECK_FALSE(predicted_capacity(3, 2.0, 1.0, 6.0).in_asymptotic_regime);
}

TEST_CASE("branch and unified forms agree") {
  for (int n = 3; n <= 8; ++n) {
    for (double lam : {1.1, 2.0, 10.0}) {
      for (double r : {1e-3, 1e-1}) {
        for (double S : {-6.0, 0.0, 7.3}) {
          const double branch = deficit_coefficient(n, lam, S) * r * r;
          const double unified = unified_deficit(n, lam, r, S);
          CAPTURE(n);
          CAPTURE(lam);
          CHECK(std::abs(branch - unified) / std::max(std::abs(branch), 1e-3) <= 1e-12);
        }
      }
    }
  }
}

TEST_CASE("large-lambda limit for n >= 5") {
  for (int n = 5; n <= 9; ++n) {
    const double S = 3.0;
    const double limit = (n - 2.0) * S / (6.0 * n * (n - 4.0));
    CHECK(std::abs(deficit_coefficient(n, 1e6, S) - limit) <= 1e-6);
  }
}

TEST_CASE("linearity and sign") {
  for (int n = 3; n <= 8; ++n) {
    for (double lam : {1.1, 2.0, 10.0}) {
      const double k = deficit_coefficient(n, lam, 1.7);
      for (double a : {-3.0, 0.5, 2.0, 8.0}) {
        CHECK(deficit_coefficient(n, lam, a * 1.7) == doctest::Approx(a * k).epsilon(1e-15));
      }
      for (double r : {1e-3, 1e-2, 1e-1}) {
        const ExpansionPrediction pos = predicted_capacity(n, lam, r, 2.0);
        const ExpansionPrediction neg = predicted_capacity(n, lam, r, -2.0);
        CHECK(pos.predicted_capacity < pos.euclidean_capacity);
        CHECK(neg.predicted_capacity > neg.euclidean_capacity);
      }
    }
  }
}

TEST_CASE("bound predictions") {
  const BoundPredictions flat = bound_predictions(3, 2.0, 0.1, 0.0);
  CHECK(flat.upper_central == doctest::Approx(0.2));
  CHECK(flat.lower_central == doctest::Approx(0.2));
  CHECK(flat.window == 0.0);

  const BoundPredictions s3 = bound_predictions(3, 2.0, 0.1, 6.0);
  CHECK(s3.upper_central == doctest::Approx(0.2 * (1.0 - 0.02 / 3.0)));
  const BoundPredictions h3 = bound_predictions(3, 2.0, 0.1, -6.0);
  CHECK(h3.upper_central == doctest::Approx(0.2 * (1.0 + 0.02 / 3.0)));
  // absolute window O(r^5) for n = 3
  CHECK(bound_predictions(3, 2.0, 0.05, 6.0).window / s3.window == doctest::Approx(1.0 / 32.0));

  // exact space-form capacities fall inside the window
  for (int n = 3; n <= 8; ++n) {
    for (double K : {1.0, -1.0}) {
      for (double lam : {1.25, 2.0, 4.0, 8.0, 16.0}) {
        for (double r : {0.1, 0.05, 0.025}) {
          if (lam * r > 1.6) continue;
          const MetricModel m = MetricModel::space_form(n, K);
          const double c = symmetric_capacity({m, r, lam}).value;
          const BoundPredictions b = bound_predictions(n, lam, r, m.scalar_curvature());
          CAPTURE(n);
          CAPTURE(lam);
          CAPTURE(r);
          CHECK(std::abs(c - b.upper_central) <= b.window);
        }
      }
    }
  }
}
