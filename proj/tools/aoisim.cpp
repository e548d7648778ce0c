#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "aoicode/bounds.hpp"
#include "aoicode/config_io.hpp"
#include "aoicode/engine.hpp"
#include "aoicode/model.hpp"
#include "aoicode/policies.hpp"
#include "presets.hpp"

using namespace aoicode;

namespace {

struct Common {
  std::string config_path;
  std::string out_path;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int seeds = 0;
  int jobs = 1;
  std::string clique_cap;
  std::string policy;
  std::int64_t horizon = 0;
  std::vector<std::string> sets;
};

void add_common(CLI::App* cmd, Common& o, bool with_config = true) {
  if (with_config) cmd->add_option("--config", o.config_path, "configuration file (key = value lines)");
  cmd->add_option("--out", o.out_path, "write CSV here instead of stdout");
  cmd->add_option_function<std::uint64_t>(
      "--seed", [&o](std::uint64_t s) { o.seed = s, o.seed_set = true; }, "seed (first seed for multi-seed runs)");
  cmd->add_option("--clique-cap", o.clique_cap, "max coded clique size, or 'uncoded'");
  cmd->add_option("--policy", o.policy, "arm | timesharing | randomized | roundrobin");
  cmd->add_option("--horizon", o.horizon, "slots per run")->check(CLI::PositiveNumber);
  cmd->add_option("--set", o.sets, "extra key=value setting (repeatable)");
}

void add_multi(CLI::App* cmd, Common& o) {
  cmd->add_option("--seeds", o.seeds, "number of seeds (consecutive from --seed)")->check(CLI::PositiveNumber);
  cmd->add_option("--jobs", o.jobs, "worker threads")->check(CLI::PositiveNumber);
}

void apply_overrides(SystemConfig& c, const Common& o) {
  for (const auto& s : o.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + s + "'");
    apply_setting(c, s.substr(0, eq), s.substr(eq + 1));
  }
  if (!o.clique_cap.empty()) apply_setting(c, "clique_cap", o.clique_cap);
  if (!o.policy.empty()) apply_setting(c, "policy", o.policy);
  if (o.horizon > 0) c.horizon = o.horizon;
  if (o.seed_set) c.seed = o.seed;
}

SystemConfig load(const Common& o) {
  if (o.config_path.empty()) throw ConfigError("--config is required");
  SystemConfig c = load_config(o.config_path);
  apply_overrides(c, o);
  return c;
}

std::vector<std::uint64_t> seed_list(std::uint64_t first, int n) {
  std::vector<std::uint64_t> s;
  for (int i = 0; i < n; ++i) s.push_back(first + static_cast<std::uint64_t>(i));
  return s;
}

// Output goes to --out when given, stdout otherwise.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw ConfigError("cannot open output file '" + path + "'");
    }
  }
  std::ostream& out() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

// "epsilon=0.1,0.2" or "epsilon=0.1:0.9:9" (lo:hi:count).
SweepAxis parse_axis(const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("--axis expects field=values, got '" + spec + "'");
  SweepAxis axis{spec.substr(0, eq), {}};
  const std::string rest = spec.substr(eq + 1);
  if (std::count(rest.begin(), rest.end(), ':') == 2) {
    std::istringstream in(rest);
    double lo = 0, hi = 0;
    int n = 0;
    char c1 = 0, c2 = 0;
    if (!(in >> lo >> c1 >> hi >> c2 >> n) || n < 1 || !in.eof()) throw ConfigError("bad range in --axis '" + spec + "'");
    axis.values = aoisim::linspace(lo, hi, n);
    return axis;
  }
  std::string item;
  std::istringstream in(rest);
  while (std::getline(in, item, ',')) axis.values.push_back(item);
  if (axis.values.empty()) throw ConfigError("--axis '" + spec + "' has no values");
  return axis;
}

int max_users(const std::vector<SweepCell>& cells) {
  int m = 1;
  for (const auto& c : cells) m = std::max(m, c.config.m);
  return m;
}

std::string num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

std::string joined(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + num(v[i]);
  return s;
}

const char* kBoundsHeader =
    "family,M,epsilon,theta,q,alpha,lambda,ub,lb_rate,lb_arrival,capacity_ok,symmetric_capacity,ub_beta";

std::string bounds_row(const SystemConfig& c, const std::string& family) {
  const BoundReport b = bound_report(c);
  return family + ',' + std::to_string(c.m) + ',' + format_values(c.epsilon, ';') + ',' +
         format_values(c.theta, ';') + ',' + format_values(c.q, ';') + ',' + format_values(c.alpha, ';') + ',' +
         num(c.lambda) + ',' + num(b.ub) + ',' + num(b.lb_rate) + ',' + num(b.lb_arrival) + ',' +
         (b.capacity_ok ? "true" : "false") + ',' + num(b.symmetric_capacity) + ',' + joined(b.ub_beta);
}

int cmd_run(const Common& o, bool trace) {
  const SystemConfig c = validate(load(o));
  Sink sink(o.out_path);
  if (trace) {
    RunOptions opt;
    opt.trace = &sink.out();
    run(c, opt);
    return 0;
  }
  const RunMetrics r = run(c);
  sink.out() << summary_header(c.m) << '\n' << summary_row(r, c.m) << '\n';
  return 0;
}

int cmd_sweep(const Common& o, const std::vector<std::string>& axis_specs) {
  SystemConfig c = load(o);
  std::vector<SweepAxis> axes;
  for (const auto& s : axis_specs) axes.push_back(parse_axis(s));
  const auto cells = sweep(c, axes, seed_list(c.seed, o.seeds > 0 ? o.seeds : 1), o.jobs);
  const int m = max_users(cells);
  Sink sink(o.out_path);
  sink.out() << summary_header(m) << '\n';
  for (const auto& cell : cells)
    for (const auto& r : cell.runs) sink.out() << summary_row(r, m) << '\n';
  return 0;
}

int cmd_bounds(const Common& o, const std::string& preset) {
  Sink sink(o.out_path);
  sink.out() << kBoundsHeader << '\n';
  if (preset.empty()) {
    sink.out() << bounds_row(validate(load(o)), "") << '\n';
    return 0;
  }
  // One row per preset cell; seeds do not matter for the bounds.
  for (const auto& fam : aoisim::find_preset(preset).families) {
    SystemConfig base = fam.base;
    apply_overrides(base, o);
    for (const auto& cell : sweep_grid(base, fam.axes))
      sink.out() << bounds_row(cell.config, fam.name) << '\n';
  }
  return 0;
}

int cmd_preset(const Common& o, const std::string& name, bool list) {
  Sink sink(o.out_path);
  if (list) {
    for (const auto& p : aoisim::presets()) {
      sink.out() << p.name << ": " << p.description << '\n';
    }
    return 0;
  }
  if (name.empty()) throw ConfigError("preset: name required (see --list)");
  const auto& p = aoisim::find_preset(name);
  std::vector<std::pair<std::string, std::vector<SweepCell>>> results;
  int m = 1;
  for (const auto& fam : p.families) {
    SystemConfig base = fam.base;
    apply_overrides(base, o);
    auto cells = sweep(base, fam.axes, seed_list(base.seed, o.seeds > 0 ? o.seeds : 20), o.jobs);
    m = std::max(m, max_users(cells));
    results.emplace_back(fam.name, std::move(cells));
  }
  sink.out() << summary_header(m) << '\n';
  for (const auto& [fam, cells] : results)
    for (const auto& cell : cells)
      for (const auto& r : cell.runs) sink.out() << summary_row(r, m, p.name + ":" + fam) << '\n';
  return 0;
}

int cmd_validate(const Common& o) {
  const SystemConfig c = validate(load(o));
  Sink sink(o.out_path);
  std::ostream& out = sink.out();
  out << "ok\n" << format_config(c);
  if (c.policy != PolicyKind::randomized) return 0;
  const auto templates = enumerate_templates(c.m, c.effective_clique_cap());
  out << "# templates (mu order)\n";
  for (std::size_t i = 0; i < templates.size(); ++i)
    out << "# " << i << ' ' << templates[i].to_string() << ' ' << (i < c.mu.size() ? num(c.mu[i]) : "") << '\n';
  if (c.m != 3) return 0;
  const CutReport rep = cut_feasibility_m3(c.mu, c);
  out << "# cuts (user,cut,lhs,rhs,slack)\n";
  for (const auto& cut : rep.cuts)
    out << "# " << cut.user + 1 << ',' << cut.cut << ',' << num(cut.lhs) << ',' << num(cut.rhs) << ','
        << num(cut.slack()) << '\n';
  out << "# normalization error " << num(rep.normalization_error) << '\n';
  if (!rep.feasible) {
    const CutCheck* v = rep.first_violation();
    std::string where = v ? "user " + std::to_string(v->user + 1) + " cut " + std::to_string(v->cut)
                          : "normalization";
    throw ConfigError("mu does not meet the rate targets (first violation: " + where + ")");
  }
  out << "# mu feasible\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Age-of-information scheduling simulator with XOR coding over erasure broadcast"};
  app.require_subcommand(1);

  Common run_o, sweep_o, bounds_o, preset_o, validate_o;
  bool trace = false;
  std::vector<std::string> axes;
  std::string bounds_preset, preset_name;
  bool list = false;

  auto* run_cmd = app.add_subcommand("run", "simulate one configuration, one summary row");
  add_common(run_cmd, run_o);
  run_cmd->add_flag("--trace", trace, "emit the per-slot trace CSV instead of the summary");

  auto* sweep_cmd = app.add_subcommand("sweep", "grid of configurations times seeds");
  add_common(sweep_cmd, sweep_o);
  add_multi(sweep_cmd, sweep_o);
  sweep_cmd->add_option("--axis", axes, "field=v1,v2,... or field=lo:hi:count; 'a+b' moves keys together");

  auto* bounds_cmd = app.add_subcommand("bounds", "analytic bounds for a configuration or preset");
  add_common(bounds_cmd, bounds_o);
  bounds_cmd->add_option("--preset", bounds_preset, "emit one row per preset cell");

  auto* preset_cmd = app.add_subcommand("preset", "run a figure preset");
  add_common(preset_cmd, preset_o, false);
  add_multi(preset_cmd, preset_o);
  preset_cmd->add_option("name", preset_name, "fig4 | fig5 | fig6 | fig7 | fig8 | fig9 | sandwich");
  preset_cmd->add_flag("--list", list, "list presets");

  auto* validate_cmd = app.add_subcommand("validate", "check a configuration (and mu when M=3)");
  add_common(validate_cmd, validate_o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*run_cmd) return cmd_run(run_o, trace);
    if (*sweep_cmd) return cmd_sweep(sweep_o, axes);
    if (*bounds_cmd) return cmd_bounds(bounds_o, bounds_preset);
    if (*preset_cmd) return cmd_preset(preset_o, preset_name, list);
    if (*validate_cmd) return cmd_validate(validate_o);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const ContractViolation& e) {
    std::cerr << "contract violation: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
