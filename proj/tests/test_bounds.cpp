#include <cmath>

#include "aoicode/bounds.hpp"
#include "doctest.h"

using namespace aoicode;

namespace {

SystemConfig sym(int m, double theta, double eps, double q, double lambda = 0) {
  SystemConfig c;
  c.m = m;
  c.theta = {theta};
  c.epsilon = {eps};
  c.q = {q};
  c.lambda = lambda;
  return validate(c);
}

}  // namespace

TEST_CASE("upper bound") {
  CHECK(upper_bound(sym(3, 0.14, 0.6, 0.1368, 10)) == doctest::Approx(1 / 0.14 + 1 / (0.1368 * 0.4) + 10));
  CHECK(upper_bound(sym(3, 0.14, 0.6, 0.1368, 10)) == doctest::Approx(35.418).epsilon(1e-4));
  CHECK(upper_bound(sym(4, 1, 0, 1)) == doctest::Approx(2.0));
  CHECK(upper_bound(sym(3, 0.1, 0.6, 0.1, 1)) == doctest::Approx(36.0));
  CHECK(std::isinf(upper_bound(sym(3, 0.1, 0.6, 0.0))));
  CHECK(std::isinf(upper_bound(sym(3, 0.0, 0.6, 0.1))));
}

TEST_CASE("rate lower bound") {
  const SystemConfig c = sym(3, 0.5, 0.6, 0);
  const std::vector<double> r{0.1, 0.1, 0.1};
  CHECK(lower_bound_rate(c, r) == doctest::Approx(5.5));
  CHECK(lower_bound_rate(c, std::vector<double>{1, 1, 1}) == doctest::Approx(1.0));
  CHECK(std::isinf(lower_bound_rate(c, std::vector<double>{0.1, 0, 0.1})));
}

TEST_CASE("arrival lower bound") {
  CHECK(lower_bound_arrival(sym(3, 0.5, 0.6, 0)) == doctest::Approx(2.0));
  CHECK(lower_bound_arrival(sym(3, 1, 0.6, 0)) == doctest::Approx(1.0));
  CHECK(lower_bound_arrival(sym(3, 0.14, 0.6, 0)) == doctest::Approx(7.142857));
  CHECK(std::isinf(lower_bound_arrival(sym(3, 0, 0.6, 0))));
}

TEST_CASE("bounds are monotone on grids") {
  double prev_ub = INFINITY, prev_lb = INFINITY;
  for (int s = 1; s <= 20; ++s) {
    const double v = 0.05 * s;
    const SystemConfig c = sym(3, v, 0.4, v, 1);
    CHECK(upper_bound(c) < prev_ub);
    CHECK(lower_bound_arrival(c) < prev_lb);
    CHECK(lower_bound_arrival(c) <= upper_bound(c));
    prev_ub = upper_bound(c);
    prev_lb = lower_bound_arrival(c);
  }
}

TEST_CASE("symmetric capacity") {
  const auto c3 = symmetric_capacity(3, 0.6);
  CHECK(c3.per_user_rate == doctest::Approx(1 / (2.5 + 1.5625 + 1 / (1 - 0.216))).epsilon(1e-12));
  CHECK(std::abs(c3.per_user_rate - 0.18734) < 1e-5);
  CHECK(c3.lower_bound == doctest::Approx(3 / (2 * c3.per_user_rate * 3) + 0.5));
  CHECK(symmetric_capacity(1, 0.3).per_user_rate == doctest::Approx(0.7));
  CHECK(symmetric_capacity(5, 0.0).per_user_rate == doctest::Approx(0.2));
  CHECK_THROWS_AS(symmetric_capacity(3, 1.0), ConfigError);
}

TEST_CASE("outer bound check") {
  for (int m = 1; m <= 6; ++m) {
    for (double eps : {0.1, 0.6, 0.9}) {
      const SystemConfig c = sym(m, 0.5, eps, 0);
      const double r = symmetric_capacity(m, eps).per_user_rate;
      const auto at = capacity_outer_check(c, std::vector<double>(m, r));
      CHECK(at.inside);
      CHECK(std::abs(at.min_slack) < 1e-12);
      CHECK_FALSE(capacity_outer_check(c, std::vector<double>(m, r * 1.000001)).inside);
    }
  }
  const SystemConfig c = sym(3, 0.5, 0.6, 0);
  CHECK(capacity_outer_check(c, std::vector<double>{0, 0, 0}).inside);
  CHECK_FALSE(capacity_outer_check(c, std::vector<double>{1, 1, 1}).inside);
  CHECK_THROWS_AS(capacity_outer_check(sym(9, 0.5, 0.6, 0), std::vector<double>(9, 0.0)), ConfigError);
}

TEST_CASE("bound report") {
  const BoundReport r = bound_report(sym(3, 0.1, 0.6, 0.1, 1));
  CHECK(r.ub == doctest::Approx(36));
  CHECK(r.lb_arrival == doctest::Approx(10));
  CHECK(r.capacity_ok);
  CHECK(r.symmetric_capacity == doctest::Approx(0.187336).epsilon(1e-5));
  REQUIRE(r.ub_beta.size() == 3);
  CHECK(r.ub_beta[0] == doctest::Approx(25));
  CHECK(bound_report(sym(3, 0.1, 0.6, 0.0)).ub_beta.empty());
}
