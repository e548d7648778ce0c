#include "aoicode/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace aoicode {

std::vector<int> UserSet::members() const {
  std::vector<int> out;
  for_each([&](int u) { out.push_back(u); });
  return out;
}

std::string UserSet::to_string() const {
  std::string s = "{";
  bool first = true;
  for_each([&](int u) {
    if (!first) s += ',';
    s += std::to_string(u + 1);
    first = false;
  });
  return s + "}";
}

bool canonical_less(UserSet a, UserSet b) {
  const std::uint32_t diff = a.bits() ^ b.bits();
  if (diff == 0) return false;
  const std::uint32_t low = diff & (~diff + 1u);
  // Members above the first difference decide whether the set lacking `low`
  // ran out (and is therefore a prefix) or continues with a larger element.
  const std::uint32_t above = ~((low << 1) - 1u);
  if (a.bits() & low) return (b.bits() & above) != 0;
  return (a.bits() & above) == 0;
}

std::string to_string(PolicyKind p) {
  switch (p) {
    case PolicyKind::arm: return "arm";
    case PolicyKind::timesharing: return "timesharing";
    case PolicyKind::randomized: return "randomized";
    case PolicyKind::roundrobin: return "roundrobin";
  }
  return "?";
}

PolicyKind parse_policy(const std::string& name) {
  if (name == "arm") return PolicyKind::arm;
  if (name == "timesharing") return PolicyKind::timesharing;
  if (name == "randomized") return PolicyKind::randomized;
  if (name == "roundrobin") return PolicyKind::roundrobin;
  throw ConfigError("policy: unknown policy '" + name + "'");
}

std::string to_string(BufferMode b) {
  switch (b) {
    case BufferMode::automatic: return "auto";
    case BufferMode::one: return "one";
    case BufferMode::unbounded: return "unbounded";
  }
  return "?";
}

BufferMode parse_buffer_mode(const std::string& name) {
  if (name == "auto") return BufferMode::automatic;
  if (name == "one" || name == "1") return BufferMode::one;
  if (name == "unbounded") return BufferMode::unbounded;
  throw ConfigError("buffer: unknown buffer mode '" + name + "'");
}

std::string to_string(BetaPreset b) {
  switch (b) {
    case BetaPreset::none: return "";
    case BetaPreset::shifted: return "shifted";
    case BetaPreset::inverse_rate: return "inverse_rate";
  }
  return "?";
}

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

void expand(std::vector<double>& v, int m, const char* field) {
  if (v.size() == 1 && m > 1) v.assign(static_cast<std::size_t>(m), v.front());
  if (static_cast<int>(v.size()) != m) {
    throw ConfigError(std::string(field) + ": expected " + std::to_string(m) + " values, got " +
                      std::to_string(v.size()));
  }
}

void check_each(const std::vector<double>& v, const char* field, const char* range,
                bool (*ok)(double)) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i]) || !ok(v[i])) {
      throw ConfigError(std::string(field) + " out of " + range + ": " + field + "[" +
                        std::to_string(i + 1) + "] = " + fmt(v[i]));
    }
  }
}

long long binomial(int n, int k) {
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

// Number of randomized-policy action templates: M uncoded ones plus, for
// every user set C with 2 <= |C| <= cap, 2^{|C|(M-|C|)} queue assignments.
long long randomized_template_count(int m, int cap) {
  long long n = m;
  for (int l = 2; l <= std::min(cap, m); ++l) n += binomial(m, l) * (1LL << (l * (m - l)));
  return n;
}

SystemConfig validate(SystemConfig c) {
  if (c.m < 1 || c.m > kMaxUsers) {
    throw ConfigError("m out of [1," + std::to_string(kMaxUsers) + "]: m = " + std::to_string(c.m));
  }
  if (c.theta.empty()) throw ConfigError("theta: missing");
  if (c.epsilon.empty()) throw ConfigError("epsilon: missing");
  expand(c.theta, c.m, "theta");
  expand(c.epsilon, c.m, "epsilon");
  expand(c.q, c.m, "q");
  expand(c.alpha, c.m, "alpha");

  check_each(c.epsilon, "epsilon", "[0,1)", [](double v) { return v >= 0.0 && v < 1.0; });
  check_each(c.theta, "theta", "[0,1]", [](double v) { return v >= 0.0 && v <= 1.0; });
  check_each(c.q, "q", "[0,inf)", [](double v) { return v >= 0.0; });
  check_each(c.alpha, "alpha", "(0,inf)", [](double v) { return v > 0.0; });

  switch (c.beta_preset) {
    case BetaPreset::none: expand(c.beta, c.m, "beta"); break;
    case BetaPreset::shifted: c.beta = shifted_beta(c.m); break;
    case BetaPreset::inverse_rate:
      for (int i = 0; i < c.m; ++i) {
        if (c.q[i] <= 0.0) {
          throw ConfigError("beta: inverse_rate needs q > 0, q[" + std::to_string(i + 1) +
                            "] = " + fmt(c.q[i]));
        }
      }
      c.beta = inverse_rate_beta(c.alpha, c.epsilon, c.q);
      break;
  }
  check_each(c.beta, "beta", "[0,inf)", [](double v) { return v >= 0.0; });

  if (!std::isfinite(c.lambda) || c.lambda < 0.0) {
    throw ConfigError("lambda out of [0,inf): lambda = " + fmt(c.lambda));
  }
  if (c.clique_cap) {
    const int cap = *c.clique_cap;
    if (cap != 1 && (cap < 2 || cap > c.m)) {
      throw ConfigError("clique_cap out of [2.." + std::to_string(c.m) +
                        "] (or uncoded): clique_cap = " + std::to_string(cap));
    }
  }
  if (c.buffer == BufferMode::automatic) {
    const bool rates = std::any_of(c.q.begin(), c.q.end(), [](double v) { return v > 0.0; });
    c.buffer = rates ? BufferMode::unbounded : BufferMode::one;
  }
  if (c.horizon < 1) throw ConfigError("horizon out of [1,inf): horizon = " + std::to_string(c.horizon));

  if (c.policy == PolicyKind::randomized) {
    const long long expected = randomized_template_count(c.m, c.effective_clique_cap());
    if (static_cast<long long>(c.mu.size()) != expected) {
      throw ConfigError("mu: expected " + std::to_string(expected) + " template probabilities, got " +
                        std::to_string(c.mu.size()));
    }
    double total = 0.0;
    for (std::size_t i = 0; i < c.mu.size(); ++i) {
      if (!std::isfinite(c.mu[i]) || c.mu[i] < 0.0) {
        throw ConfigError("mu out of [0,1]: mu[" + std::to_string(i + 1) + "] = " + fmt(c.mu[i]));
      }
      total += c.mu[i];
    }
    if (std::abs(total - 1.0) > 1e-9) throw ConfigError("mu: probabilities sum to " + fmt(total) + ", not 1");
  }
  return c;
}

double erasure_success_prob(const SystemConfig& config, UserSet erased) {
  const int m = static_cast<int>(config.epsilon.size());
  if ((erased.bits() >> m) != 0) throw std::out_of_range("erasure_success_prob: user index out of range");
  double p = 1.0;
  for (int i = 0; i < m; ++i) p *= erased.contains(i) ? config.epsilon[i] : 1.0 - config.epsilon[i];
  return p;
}

double joint_erasure_prob(const SystemConfig& config, UserSet set) {
  const int m = static_cast<int>(config.epsilon.size());
  if ((set.bits() >> m) != 0) throw std::out_of_range("joint_erasure_prob: user index out of range");
  double p = 1.0;
  set.for_each([&](int i) { p *= config.epsilon[i]; });
  return p;
}

std::vector<double> shifted_beta(int m) {
  std::vector<double> b(static_cast<std::size_t>(m));
  for (int i = 1; i <= m; ++i) b[i - 1] = std::min(i, std::max(0, i - 3));
  return b;
}

std::vector<double> inverse_rate_beta(const std::vector<double>& alpha,
                                      const std::vector<double>& epsilon,
                                      const std::vector<double>& q) {
  std::vector<double> b(alpha.size());
  for (std::size_t i = 0; i < alpha.size(); ++i) b[i] = alpha[i] / ((1.0 - epsilon[i]) * q[i]);
  return b;
}

}  // namespace aoicode
