#include <cmath>

#include "aoicode/config_io.hpp"
#include "aoicode/model.hpp"
#include "doctest.h"

using namespace aoicode;

namespace {

SystemConfig base(int m) {
  SystemConfig c;
  c.m = m;
  c.theta = {0.5};
  c.epsilon = {0.5};
  return c;
}

std::string error_of(const SystemConfig& c) {
  try {
    validate(c);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("validate accepts a plain two-user config") {
  SystemConfig c;
  c.m = 2;
  c.epsilon = {0.5, 0.5};
  c.theta = {1, 1};
  c.q = {0, 0};
  c.alpha = {1, 1};
  const SystemConfig v = validate(c);
  CHECK(v.m == 2);
  CHECK(v.beta.size() == 2);
}

TEST_CASE("validate rejects epsilon = 1 naming the field") {
  SystemConfig c = base(2);
  c.epsilon = {1.0, 0.5};
  const std::string msg = error_of(c);
  CHECK(msg.find("epsilon out of [0,1)") != std::string::npos);
  CHECK(msg.find("epsilon[1] = 1") != std::string::npos);
}

TEST_CASE("validate reports other invariants") {
  SystemConfig c = base(3);
  c.theta = {0.5, 1.5, 0.5};
  CHECK(error_of(c).find("theta") != std::string::npos);
  c = base(3);
  c.alpha = {0.0};
  CHECK(error_of(c).find("alpha") != std::string::npos);
  c = base(3);
  c.q = {-0.1};
  CHECK(error_of(c).find("q out of") != std::string::npos);
  c = base(3);
  c.theta = {0.5, 0.5};
  CHECK(error_of(c).find("theta") != std::string::npos);
  c = base(3);
  c.clique_cap = 4;
  CHECK(error_of(c).find("clique_cap") != std::string::npos);
  c = base(3);
  c.horizon = 0;
  CHECK(error_of(c).find("horizon") != std::string::npos);
  c = base(3);
  c.lambda = -1;
  CHECK(error_of(c).find("lambda") != std::string::npos);
}

TEST_CASE("symmetric shorthand expands to M entries") {
  SystemConfig c = base(3);
  c.epsilon = {0.6};
  const SystemConfig v = validate(c);
  CHECK(v.epsilon == std::vector<double>{0.6, 0.6, 0.6});
  CHECK(v.theta.size() == 3);
  CHECK(v.q.size() == 3);
}

TEST_CASE("mu must match the template list and sum to one") {
  SystemConfig c = base(3);
  c.policy = PolicyKind::randomized;
  CHECK(error_of(c).find("mu: expected 16") != std::string::npos);
  c.mu.assign(16, 1.0 / 16);
  CHECK(error_of(c).empty());
  c.mu[0] += 1e-6;
  CHECK(error_of(c).find("sum") != std::string::npos);
}

TEST_CASE("buffer mode follows the rate targets unless set") {
  SystemConfig c = base(2);
  CHECK(validate(c).buffer == BufferMode::one);
  c.q = {0.1};
  CHECK(validate(c).buffer == BufferMode::unbounded);
  c.buffer = BufferMode::one;
  CHECK(validate(c).buffer == BufferMode::one);
}

TEST_CASE("beta presets") {
  CHECK(shifted_beta(6) == std::vector<double>{0, 0, 0, 1, 2, 3});
  SystemConfig c = base(3);
  c.epsilon = {0.6};
  c.q = {0.1};
  c.beta_preset = BetaPreset::inverse_rate;
  const SystemConfig v = validate(c);
  for (double b : v.beta) CHECK(b == doctest::Approx(25.0));
  c.q = {0.0};
  CHECK(error_of(c).find("inverse_rate") != std::string::npos);
}

TEST_CASE("erasure pattern probabilities") {
  SystemConfig c = validate([] {
    SystemConfig s = base(3);
    s.epsilon = {0.6};
    return s;
  }());
  CHECK(erasure_success_prob(c, UserSet::of({0})) == doctest::Approx(0.096));
  for (int k = 0; k <= 3; ++k) {
    std::uint32_t bits = (1u << k) - 1u;
    CHECK(erasure_success_prob(c, UserSet(bits)) == doctest::Approx(std::pow(0.4, 3 - k) * std::pow(0.6, k)));
  }
  SystemConfig z = validate([] {
    SystemConfig s = base(2);
    s.epsilon = {0.0};
    return s;
  }());
  CHECK(erasure_success_prob(z, UserSet()) == 1.0);
  CHECK_THROWS_AS(erasure_success_prob(z, UserSet::of({2})), std::out_of_range);
}

TEST_CASE("erasure patterns sum to one and depend only on size when symmetric") {
  for (int m = 1; m <= 10; ++m) {
    SystemConfig c = base(m);
    c.epsilon.clear();
    for (int i = 0; i < m; ++i) c.epsilon.push_back(0.05 + 0.09 * i);
    c = validate(c);
    double total = 0.0;
    for (std::uint32_t s = 0; s < (1u << m); ++s) total += erasure_success_prob(c, UserSet(s));
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
  }
  SystemConfig c = base(4);
  c.epsilon = {0.3};
  c = validate(c);
  CHECK(erasure_success_prob(c, UserSet::of({0, 2})) == doctest::Approx(erasure_success_prob(c, UserSet::of({1, 3}))));
}

TEST_CASE("user sets print 1-based and sort canonically") {
  CHECK(UserSet::of({0, 2}).to_string() == "{1,3}");
  CHECK(UserSet().to_string() == "{}");
  CHECK(canonical_less(UserSet(), UserSet::of({0})));
  CHECK(canonical_less(UserSet::of({0}), UserSet::of({0, 1})));
  CHECK(canonical_less(UserSet::of({0, 1}), UserSet::of({0, 2})));
  CHECK(canonical_less(UserSet::of({0, 2}), UserSet::of({1})));
}

TEST_CASE("config files round-trip") {
  const std::string text =
      "# fig 8 style\n"
      "m = 3\n"
      "theta = 0.14\n"
      "epsilon = 0.6   # symmetric\n"
      "q = 0.1368\n"
      "beta = 3\n"
      "lambda = 10\n"
      "clique_cap = 2\n"
      "horizon = 1000\n"
      "seed = 9\n"
      "policy = timesharing\n";
  const SystemConfig v = validate(parse_config_text(text));
  CHECK(v.m == 3);
  CHECK(v.q[2] == 0.1368);
  CHECK(v.clique_cap == 2);
  CHECK(v.policy == PolicyKind::timesharing);
  const SystemConfig again = validate(parse_config_text(format_config(v)));
  CHECK(format_config(again) == format_config(v));
  CHECK(again.theta == v.theta);
  CHECK(again.buffer == v.buffer);
}

TEST_CASE("config parse errors carry the line number") {
  try {
    parse_config_text("m = 3\nfoo = 1\n");
    FAIL("expected error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    CHECK(std::string(e.what()).find("foo") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_config_text("m = three\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("m 3\n"), ConfigError);
  CHECK(parse_config_text("clique_cap = uncoded\n").clique_cap == 1);
}
