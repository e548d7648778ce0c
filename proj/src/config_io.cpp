#include "aoicode/config_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace aoicode {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  try {
    std::size_t used = 0;
    const double v = std::stod(t, &used);
    if (used == t.size()) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError(key + ": malformed number '" + t + "'");
}

template <typename Int>
Int parse_int(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  Int v{};
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (res.ec != std::errc() || res.ptr != t.data() + t.size()) {
    throw ConfigError(key + ": malformed integer '" + t + "'");
  }
  return v;
}

std::vector<double> parse_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(key, item));
  if (out.empty()) throw ConfigError(key + ": empty list");
  return out;
}

bool parse_bool(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  if (t == "true" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "no") return false;
  throw ConfigError(key + ": expected true or false, got '" + t + "'");
}

// Shortest text that parses back to the same double.
std::string fmt(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

void apply_setting(SystemConfig& c, const std::string& raw_key, const std::string& raw_value) {
  const std::string key = trim(raw_key);
  const std::string value = trim(raw_value);
  if (key == "m") {
    c.m = parse_int<int>(key, value);
  } else if (key == "theta") {
    c.theta = parse_list(key, value);
  } else if (key == "epsilon") {
    c.epsilon = parse_list(key, value);
  } else if (key == "q") {
    c.q = parse_list(key, value);
  } else if (key == "alpha") {
    c.alpha = parse_list(key, value);
  } else if (key == "beta") {
    if (value == "shifted") {
      c.beta_preset = BetaPreset::shifted;
    } else if (value == "inverse_rate") {
      c.beta_preset = BetaPreset::inverse_rate;
    } else {
      c.beta_preset = BetaPreset::none;
      c.beta = parse_list(key, value);
    }
  } else if (key == "lambda") {
    c.lambda = parse_double(key, value);
  } else if (key == "clique_cap") {
    if (value == "uncoded") {
      c.clique_cap = 1;
    } else if (value == "none" || value == "max") {
      c.clique_cap.reset();
    } else {
      c.clique_cap = parse_int<int>(key, value);
    }
  } else if (key == "horizon") {
    c.horizon = parse_int<std::int64_t>(key, value);
  } else if (key == "seed") {
    c.seed = parse_int<std::uint64_t>(key, value);
  } else if (key == "policy") {
    c.policy = parse_policy(value);
  } else if (key == "mu") {
    c.mu = parse_list(key, value);
  } else if (key == "singleton_retransmissions") {
    c.singleton_retransmissions = parse_bool(key, value);
  } else if (key == "buffer") {
    c.buffer = parse_buffer_mode(value);
  } else {
    throw ConfigError("unknown configuration key '" + key + "'");
  }
}

SystemConfig parse_config(std::istream& in) {
  SystemConfig c;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    try {
      apply_setting(c, line.substr(0, eq), line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return c;
}

SystemConfig parse_config_text(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

SystemConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in);
}

std::string format_values(const std::vector<double>& values, char sep) {
  if (!values.empty() && std::all_of(values.begin(), values.end(), [&](double v) { return v == values.front(); })) {
    return fmt(values.front());
  }
  std::string s;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) s += sep;
    s += fmt(values[i]);
  }
  return s;
}

std::string format_config(const SystemConfig& c) {
  std::ostringstream os;
  os << "m = " << c.m << '\n';
  os << "theta = " << format_values(c.theta) << '\n';
  os << "epsilon = " << format_values(c.epsilon) << '\n';
  os << "q = " << format_values(c.q) << '\n';
  os << "alpha = " << format_values(c.alpha) << '\n';
  os << "beta = " << format_values(c.beta) << '\n';
  os << "lambda = " << fmt(c.lambda) << '\n';
  if (c.clique_cap) {
    os << "clique_cap = " << (*c.clique_cap < 2 ? std::string("uncoded") : std::to_string(*c.clique_cap)) << '\n';
  }
  os << "horizon = " << c.horizon << '\n';
  os << "seed = " << c.seed << '\n';
  os << "policy = " << to_string(c.policy) << '\n';
  if (!c.mu.empty()) {
    std::string s;
    for (std::size_t i = 0; i < c.mu.size(); ++i) s += (i ? "," : "") + fmt(c.mu[i]);
    os << "mu = " << s << '\n';
  }
  if (c.singleton_retransmissions) os << "singleton_retransmissions = true\n";
  if (c.buffer != BufferMode::automatic) os << "buffer = " << to_string(c.buffer) << '\n';
  return os.str();
}

}  // namespace aoicode
