#pragma once

#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "aoicode/age.hpp"
#include "aoicode/model.hpp"
#include "aoicode/vqueues.hpp"

namespace aoicode {

/// Finite-horizon estimates from one run.
struct RunMetrics {
  SystemConfig config;                 // validated configuration that produced the run
  double eaoi = 0.0;                   // (1/MK) sum_k sum_i alpha_i h_i(k), k = 1..K
  std::vector<double> rate;            // deliveries_i / K
  std::vector<double> mean_pos_debt;   // (1/K) sum_k x_i^+(k)
  std::vector<std::int64_t> deliveries;
  std::int64_t idle_slots = 0;
  // Optional: per-block means of x_i^+ (blocks x users), see RunOptions.
  std::vector<std::vector<double>> debt_blocks;

  std::uint64_t seed() const { return config.seed; }
  std::int64_t horizon() const { return config.horizon; }
  double mean_pos_debt_max() const;
};

/// Everything about one slot transition, for observers and traces.
struct SlotRecord {
  Slot k = 0;
  UserSet arrivals;
  // Queue state after the slot's arrivals, before the transmission.
  const VirtualQueueNetwork* before = nullptr;
  // Queue state after feedback has moved packets.
  const VirtualQueueNetwork* after = nullptr;
  const SlotOutcome* outcome = nullptr;
  const AgeState* state_before = nullptr;  // h(k), x(k)
  const AgeState* state_after = nullptr;   // h(k+1), x(k+1)
};

struct RunOptions {
  // Called once per slot; requires a snapshot copy of the network each slot.
  std::function<void(const SlotRecord&)> observer;
  // Trace CSV sink (slot, action, received set, d vector, h vector).
  std::ostream* trace = nullptr;
  // When > 0, the horizon is split into this many blocks and the mean of
  // x_i^+ per block is recorded.
  int debt_blocks = 0;
};

/// Runs one validated configuration for config.horizon slots.
RunMetrics run(const SystemConfig& config, const RunOptions& options = {});

struct SweepAxis {
  std::string field;                // any configuration key, or keys joined by '+'
  std::vector<std::string> values;  // raw values as they would appear in a config file
};

struct SweepCell {
  SystemConfig config;               // validated, seed of the first run
  std::vector<std::string> labels;   // axis values of this cell
  std::vector<RunMetrics> runs;      // one per seed, in seed order

  double eaoi_mean() const;
  double eaoi_std() const;           // sample standard deviation across seeds
  double eaoi_stderr() const;
  std::vector<double> rate_mean() const;
};

// The validated cells of the grid without running them.
std::vector<SweepCell> sweep_grid(const SystemConfig& base, const std::vector<SweepAxis>& axes);

/// Cartesian grid over the axes (first axis slowest) times seeds. Every
/// (cell, seed) run is independent; `jobs` > 1 runs them on worker threads
/// without changing the output order.
std::vector<SweepCell> sweep(const SystemConfig& base, const std::vector<SweepAxis>& axes,
                             const std::vector<std::uint64_t>& seeds, int jobs = 1, int debt_blocks = 0);

// EAoI(time-sharing) - EAoI(ARM). Throws ConfigError unless the two runs
// differ only in policy.
double aoi_gap(const RunMetrics& timesharing, const RunMetrics& arm);

// Summary CSV.
std::string summary_header(int max_users);
std::string summary_row(const RunMetrics& metrics, int max_users, const std::string& family = "");

}  // namespace aoicode
