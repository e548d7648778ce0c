#include "aoicode/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include "aoicode/config_io.hpp"
#include "aoicode/policies.hpp"
#include "aoicode/random.hpp"

namespace aoicode {

double RunMetrics::mean_pos_debt_max() const {
  return mean_pos_debt.empty() ? 0.0 : *std::max_element(mean_pos_debt.begin(), mean_pos_debt.end());
}

namespace {

std::string vector_field(const std::vector<std::int64_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + std::to_string(v[i]);
  return s;
}

void write_trace_row(std::ostream& os, Slot k, const SlotOutcome& out, const AgeState& after, int m) {
  std::string d;
  for (int i = 0; i < m; ++i) d += (i ? " " : "") + std::string(out.delivered.contains(i) ? "1" : "0");
  os << k << ",\"" << out.action.to_string() << "\",\"" << out.received.to_string() << "\"," << d << ','
     << vector_field(after.h) << '\n';
}

}  // namespace

RunMetrics run(const SystemConfig& config, const RunOptions& options) {
  const int m = config.m;
  const std::int64_t horizon = config.horizon;
  VirtualQueueNetwork net(m, config.buffer);
  AgeState state = AgeState::initial(m);

  auto arrivals_rng = make_stream(config.seed, Stream::arrivals);
  auto erasures_rng = make_stream(config.seed, Stream::erasures);
  auto policy_rng = make_stream(config.seed, Stream::policy);

  std::vector<ActionTemplate> templates;
  if (config.policy == PolicyKind::randomized) templates = enumerate_templates(m, config.effective_clique_cap());
  PolicyScratch scratch;

  RunMetrics metrics;
  metrics.config = config;
  metrics.rate.assign(m, 0.0);
  metrics.mean_pos_debt.assign(m, 0.0);
  metrics.deliveries.assign(m, 0);

  const int blocks = options.debt_blocks > 0 ? static_cast<int>(std::min<std::int64_t>(options.debt_blocks, horizon)) : 0;
  std::vector<double> block_sum(m, 0.0);
  std::int64_t block_len = 0;
  int block_idx = 0;

  if (options.trace) *options.trace << "slot,action,received_set,d_vector,h_vector\n";

  double weighted_age_sum = 0.0;
  std::optional<VirtualQueueNetwork> snapshot;
  AgeState state_before;

  for (Slot k = 0; k < horizon; ++k) {
    UserSet arrived;
    for (int i = 0; i < m; ++i) {
      if (bernoulli(arrivals_rng, config.theta[i])) {
        net.enqueue_arrival(i, k);
        arrived.insert(i);
      }
    }

    Action action;
    switch (config.policy) {
      case PolicyKind::arm: action = arm_select(net, state, config, k, scratch).action; break;
      case PolicyKind::timesharing: action = timesharing_select(net, state, config, k).action; break;
      case PolicyKind::randomized: action = randomized_select(config.mu, templates, net, policy_rng); break;
      case PolicyKind::roundrobin: action = roundrobin_select(net, k); break;
    }

    UserSet received;
    for (int i = 0; i < m; ++i) {
      if (bernoulli(erasures_rng, 1.0 - config.epsilon[i])) received.insert(i);
    }

    if (options.observer) {
      snapshot.emplace(net);
      state_before = state;
    }

    const SlotOutcome out = net.apply_outcome(action, received);
    if (action.is_idle()) ++metrics.idle_slots;

    for (int i = 0; i < m; ++i) {
      const bool d = out.delivered.contains(i);
      const std::int64_t w = d ? queue_age(out.delivered_gen[i], state.h[i], k) : 0;
      state.h[i] = step_user_age(state.h[i], d, w);
      if (d) ++metrics.deliveries[i];
      // Closed form of the debt recursion; repeated addition of q drifts.
      state.x[i] = static_cast<double>(k + 1) * config.q[i] - static_cast<double>(metrics.deliveries[i]);
      weighted_age_sum += config.alpha[i] * static_cast<double>(state.h[i]);
      const double xp = positive_part(state.x[i]);
      metrics.mean_pos_debt[i] += xp;
      block_sum[i] += xp;
    }

    if (blocks > 0) {
      ++block_len;
      // Block b covers slots [b*K/B, (b+1)*K/B).
      const std::int64_t end = (static_cast<std::int64_t>(block_idx) + 1) * horizon / blocks;
      if (k + 1 == end) {
        std::vector<double> means(m);
        for (int i = 0; i < m; ++i) means[i] = block_sum[i] / static_cast<double>(block_len);
        metrics.debt_blocks.push_back(std::move(means));
        std::fill(block_sum.begin(), block_sum.end(), 0.0);
        block_len = 0;
        ++block_idx;
      }
    }

    if (options.observer) {
      SlotRecord rec;
      rec.k = k;
      rec.arrivals = arrived;
      rec.before = &*snapshot;
      rec.after = &net;
      rec.outcome = &out;
      rec.state_before = &state_before;
      rec.state_after = &state;
      options.observer(rec);
    }
    if (options.trace) write_trace_row(*options.trace, k, out, state, m);
  }

  const double kk = static_cast<double>(horizon);
  metrics.eaoi = weighted_age_sum / (static_cast<double>(m) * kk);
  for (int i = 0; i < m; ++i) {
    metrics.rate[i] = static_cast<double>(metrics.deliveries[i]) / kk;
    metrics.mean_pos_debt[i] /= kk;
  }
  return metrics;
}

double SweepCell::eaoi_mean() const {
  double s = 0.0;
  for (const auto& r : runs) s += r.eaoi;
  return runs.empty() ? 0.0 : s / static_cast<double>(runs.size());
}

double SweepCell::eaoi_std() const {
  if (runs.size() < 2) return 0.0;
  const double mean = eaoi_mean();
  double ss = 0.0;
  for (const auto& r : runs) ss += (r.eaoi - mean) * (r.eaoi - mean);
  return std::sqrt(ss / static_cast<double>(runs.size() - 1));
}

double SweepCell::eaoi_stderr() const {
  return runs.empty() ? 0.0 : eaoi_std() / std::sqrt(static_cast<double>(runs.size()));
}

std::vector<double> SweepCell::rate_mean() const {
  std::vector<double> out(static_cast<std::size_t>(config.m), 0.0);
  for (const auto& r : runs) {
    for (int i = 0; i < config.m; ++i) out[i] += r.rate[i];
  }
  for (auto& v : out) v /= static_cast<double>(std::max<std::size_t>(runs.size(), 1));
  return out;
}

std::vector<SweepCell> sweep_grid(const SystemConfig& base, const std::vector<SweepAxis>& axes) {
  std::size_t grid = 1;
  for (const auto& a : axes) {
    if (a.values.empty()) throw ConfigError("sweep: axis '" + a.field + "' has no values");
    grid *= a.values.size();
  }
  std::vector<SweepCell> cells(grid);
  for (std::size_t g = 0; g < grid; ++g) {
    SweepCell& cell = cells[g];
    SystemConfig c = base;
    cell.labels.resize(axes.size());
    // Mixed radix with the last axis varying fastest.
    std::size_t rest = g;
    for (std::size_t a = axes.size(); a-- > 0;) {
      cell.labels[a] = axes[a].values[rest % axes[a].values.size()];
      rest /= axes[a].values.size();
    }
    // "theta+q" moves several keys together.
    for (std::size_t a = 0; a < axes.size(); ++a) {
      std::size_t from = 0;
      const std::string& f = axes[a].field;
      while (true) {
        const std::size_t plus = f.find('+', from);
        apply_setting(c, f.substr(from, plus - from), cell.labels[a]);
        if (plus == std::string::npos) break;
        from = plus + 1;
      }
    }
    cell.config = validate(c);
  }
  return cells;
}

std::vector<SweepCell> sweep(const SystemConfig& base, const std::vector<SweepAxis>& axes,
                             const std::vector<std::uint64_t>& seeds, int jobs, int debt_blocks) {
  if (seeds.empty()) throw ConfigError("sweep: no seeds");
  SystemConfig first = base;
  first.seed = seeds.front();
  std::vector<SweepCell> cells = sweep_grid(first, axes);
  for (auto& cell : cells) cell.runs.resize(seeds.size());

  const std::size_t tasks = cells.size() * seeds.size();
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  RunOptions opts;
  opts.debt_blocks = debt_blocks;
  auto worker = [&] {
    for (std::size_t t = next++; t < tasks; t = next++) {
      auto& cell = cells[t / seeds.size()];
      SystemConfig c = cell.config;
      c.seed = seeds[t % seeds.size()];
      try {
        cell.runs[t % seeds.size()] = run(c, opts);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const int n = std::max(1, jobs);
  if (n == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < n; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
  return cells;
}

double aoi_gap(const RunMetrics& ts, const RunMetrics& arm) {
  const SystemConfig& a = ts.config;
  const SystemConfig& b = arm.config;
  const bool same = a.m == b.m && a.theta == b.theta && a.epsilon == b.epsilon && a.q == b.q && a.alpha == b.alpha &&
                    a.beta == b.beta && a.lambda == b.lambda && a.clique_cap == b.clique_cap &&
                    a.horizon == b.horizon && a.seed == b.seed && a.buffer == b.buffer;
  if (!same) throw ConfigError("aoi_gap: runs differ in more than the policy");
  return ts.eaoi - arm.eaoi;
}

std::string summary_header(int max_users) {
  std::string s = "policy,M,epsilon,theta,q,lambda,clique_cap,seed,K,eaoi";
  for (int i = 1; i <= max_users; ++i) s += ",rate_" + std::to_string(i);
  s += ",mean_pos_debt_max,idle_slots,alpha,beta,buffer,family";
  return s;
}

std::string summary_row(const RunMetrics& r, int max_users, const std::string& family) {
  const SystemConfig& c = r.config;
  std::ostringstream os;
  os.precision(10);
  os << to_string(c.policy) << ',' << c.m << ',' << format_values(c.epsilon, ';') << ','
     << format_values(c.theta, ';') << ',' << format_values(c.q, ';') << ',' << format_values({c.lambda}) << ',';
  if (c.clique_cap) {
    os << (*c.clique_cap < 2 ? std::string("uncoded") : std::to_string(*c.clique_cap));
  } else {
    os << c.m;
  }
  os << ',' << c.seed << ',' << c.horizon << ',' << r.eaoi;
  for (int i = 0; i < max_users; ++i) {
    os << ',';
    if (i < c.m) os << r.rate[i];
  }
  os << ',' << r.mean_pos_debt_max() << ',' << r.idle_slots << ',' << format_values(c.alpha, ';') << ','
     << format_values(c.beta, ';') << ',' << to_string(c.buffer) << ',' << family;
  return os.str();
}

}  // namespace aoicode
