#include "presets.hpp"

#include <charconv>
#include <cmath>

#include "aoicode/config_io.hpp"

namespace aoisim {

using aoicode::SystemConfig;

namespace {

std::string shortest(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

SystemConfig make(const std::vector<std::pair<std::string, std::string>>& settings) {
  SystemConfig c;
  c.horizon = 200000;
  for (const auto& [k, v] : settings) aoicode::apply_setting(c, k, v);
  return c;
}

std::vector<Preset> build() {
  std::vector<Preset> out;
  const auto eps9 = linspace(0.1, 0.9, 9);
  const auto theta10 = linspace(0.1, 1.0, 10);
  const std::vector<std::string> both{"timesharing", "arm"};

  // Coding benefit runs: buffer of one (q = 0), lambda = 0.
  out.push_back({"fig4", "EAoI vs epsilon for theta in {0.2, 0.5, 1}, M=6, time-sharing and ARM", {}});
  for (const char* th : {"0.2", "0.5", "1"}) {
    out.back().families.push_back(
        {std::string("theta=") + th,
         make({{"m", "6"}, {"theta", th}, {"epsilon", "0.6"}, {"beta", "shifted"}, {"lambda", "0"}}),
         {{"epsilon", eps9}, {"policy", both}}});
  }

  out.push_back({"fig5", "AoI gap vs theta at epsilon=0.6 for M in {9, 6, 3}", {}});
  for (const char* m : {"9", "6", "3"}) {
    out.back().families.push_back(
        {std::string("M=") + m, make({{"m", m}, {"theta", "0.5"}, {"epsilon", "0.6"}, {"beta", "shifted"}}),
         {{"theta", theta10}, {"policy", both}}});
  }

  out.push_back({"fig6", "AoI gap vs epsilon at theta=0.2 for M in {9, 6, 3}", {}});
  for (const char* m : {"9", "6", "3"}) {
    out.back().families.push_back(
        {std::string("M=") + m, make({{"m", m}, {"theta", "0.2"}, {"epsilon", "0.6"}, {"beta", "shifted"}}),
         {{"epsilon", eps9}, {"policy", both}}});
  }

  out.push_back({"fig7",
                 "ARM with clique caps 2, 3, 4 vs theta, M=6, epsilon=0.6, lambda=0",
                 {{"cap",
                   make({{"m", "6"}, {"theta", "0.5"}, {"epsilon", "0.6"}, {"beta", "shifted"}, {"lambda", "0"}}),
                   {{"theta", theta10}, {"clique_cap", {"2", "3", "4"}}}}}});

  const SystemConfig f8 = make({{"m", "3"}, {"theta", "0.14"}, {"epsilon", "0.6"}, {"beta", "3"}});
  SystemConfig f8q = f8;
  aoicode::apply_setting(f8q, "lambda", "10");
  SystemConfig f8l = f8;
  aoicode::apply_setting(f8l, "q", "0.1368");
  out.push_back({"fig8",
                 "EAoI vs q at lambda=10, and vs lambda at q=0.1368; M=3, theta=0.14, beta=3",
                 {{"q-sweep", f8q, {{"q", linspace(0.0, 0.1368, 10)}}},
                  {"lambda-sweep", f8l, {{"lambda", linspace(0.0, 10.0, 11)}}}}});

  // theta = q per user, the axis is the sum rate / 3.
  std::vector<std::string> per_user;
  for (double s : {0.10, 0.14, 0.18, 0.22, 0.26, 0.30, 0.34, 0.38, 0.42, 0.44}) per_user.push_back(shortest(s / 3));
  const SystemConfig f9 = make({{"m", "3"}, {"theta", "0.1"}, {"epsilon", "0.6"}, {"beta", "shifted"}, {"lambda", "1"}});
  SystemConfig ts = f9, uncoded = f9, coded = f9;
  aoicode::apply_setting(ts, "policy", "timesharing");
  aoicode::apply_setting(uncoded, "clique_cap", "uncoded");
  out.push_back({"fig9",
                 "EAoI vs sum rate with theta=q, M=3, epsilon=0.6, lambda=1",
                 {{"timesharing", ts, {{"theta+q", per_user}}},
                  {"arm-uncoded", uncoded, {{"theta+q", per_user}}},
                  {"arm-coded", coded, {{"theta+q", per_user}}}}});

  out.push_back({"sandwich",
                 "ARM with the upper-bound beta at theta=q in {0.08, 0.10, 0.12}, M=3, epsilon=0.6, lambda=1",
                 {{"sandwich",
                   make({{"m", "3"}, {"theta", "0.1"}, {"epsilon", "0.6"}, {"beta", "inverse_rate"}, {"lambda", "1"}}),
                   {{"theta+q", {"0.08", "0.1", "0.12"}}}}}});
  return out;
}

}  // namespace

std::vector<std::string> linspace(double lo, double hi, int n) {
  std::vector<std::string> v;
  for (int i = 0; i < n; ++i) {
    const double x = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
    // Trim representation noise such as 0.30000000000000004.
    v.push_back(shortest(std::round(x * 1e12) / 1e12));
  }
  return v;
}

const std::vector<Preset>& presets() {
  static const std::vector<Preset> all = build();
  return all;
}

const Preset& find_preset(const std::string& name) {
  for (const auto& p : presets())
    if (p.name == name) return p;
  throw aoicode::ConfigError("unknown preset '" + name + "'");
}

}  // namespace aoisim
