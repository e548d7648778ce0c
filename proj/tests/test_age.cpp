#include <random>

#include "aoicode/age.hpp"
#include "aoicode/engine.hpp"
#include "doctest.h"

using namespace aoicode;

TEST_CASE("queue age") {
  CHECK(queue_age(Slot{12}, 5, 12) == 0);
  CHECK(queue_age(Slot{3}, 4, 12) == 4);
  CHECK(queue_age(std::nullopt, 7, 12) == 7);
  CHECK(age_gain(7, queue_age(std::nullopt, 7, 12)) == 0);
}

TEST_CASE("age gain") {
  CHECK(age_gain(10, 3) == 7);
  CHECK(age_gain(6, 6) == 0);
  CHECK(age_gain(9, 0) == 9);
}

TEST_CASE("user age step") {
  CHECK(step_user_age(10, true, 2) == 3);
  CHECK(step_user_age(10, false, 0) == 11);
  CHECK(step_user_age(10, true, 10) == 11);
}

TEST_CASE("debt step") {
  CHECK(step_debt(0.0, 0.5, 0) == 0.5);
  CHECK(step_debt(0.5, 0.5, 1) == 0.0);
  double x = 0.0;
  for (int k = 0; k < 100; ++k) {
    x = step_debt(x, 0.0, k % 3 == 0);
    CHECK(positive_part(x) == 0.0);
  }
}

TEST_CASE("rate gain") {
  CHECK(rate_gain(0.0, 0.5) == doctest::Approx(0.25));
  CHECK(rate_gain(-2.0, 0.5) == 0.0);
  CHECK(rate_gain(2.0, 0.5) == doctest::Approx(4.0));
}

TEST_CASE("lyapunov function") {
  SystemConfig c;
  c.m = 2;
  c.theta = {0.5};
  c.epsilon = {0.5};
  c.beta = {1, 1};
  c = validate(c);
  AgeState s = AgeState::initial(2);
  CHECK(lyapunov(s, c) == 2.0);
  c.beta = {1, 2};
  c.lambda = 1;
  s.h = {2, 3};
  s.x = {1.0, -0.5};
  CHECK(lyapunov(s, c) == 9.0);
  c.beta = {0, 0};
  c.lambda = 0;
  CHECK(lyapunov(s, c) == 0.0);
}

TEST_CASE("incremental debt matches k q - sum d over 1e5 slots") {
  SystemConfig c;
  c.m = 3;
  c.theta = {0.3};
  c.epsilon = {0.4};
  c.q = {0.1, 0.05, 0.12};
  c.lambda = 1;
  c.horizon = 100000;
  c = validate(c);
  std::vector<long long> d(3, 0);
  std::vector<double> inc(3, 0.0);
  double worst_inc = 0.0;
  Slot last_k = 0;
  double worst = 0.0;
  RunOptions opts;
  opts.observer = [&](const SlotRecord& r) {
    for (int i = 0; i < 3; ++i) {
      const bool di = r.outcome->delivered.contains(i);
      d[i] += di;
      inc[i] = step_debt(inc[i], c.q[i], di ? 1 : 0);
      const double closed = static_cast<double>(r.k + 1) * c.q[i] - static_cast<double>(d[i]);
      // Debts of over-served users drift to about -1e4, where double
      // addition alone accumulates ~1e-8 of rounding; compare relatively.
      worst_inc = std::max(worst_inc, std::abs(closed - inc[i]) / std::max(1.0, std::abs(closed)));
      worst = std::max(worst, std::abs(closed - r.state_after->x[i]));
    }
    last_k = r.k;
  };
  run(c, opts);
  CHECK(last_k == 99999);
  CHECK(worst < 1e-9);
  CHECK(worst_inc < 1e-9);
}
