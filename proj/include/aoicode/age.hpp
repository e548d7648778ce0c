#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

#include "aoicode/model.hpp"

namespace aoicode {

/// Per-user ages h_i and throughput debts x_i at the start of a slot.
struct AgeState {
  std::vector<std::int64_t> h;
  std::vector<double> x;

  static AgeState initial(int m) {
    return AgeState{std::vector<std::int64_t>(static_cast<std::size_t>(m), 1),
                    std::vector<double>(static_cast<std::size_t>(m), 0.0)};
  }
};

inline double positive_part(double v) { return v > 0.0 ? v : 0.0; }

// Age of a virtual queue's freshest packet, capped at the user's age.
// Empty queues report the user's age (no gain).
inline std::int64_t queue_age(std::optional<Slot> latest_gen, std::int64_t h, Slot k) {
  if (!latest_gen) return h;
  return std::min<std::int64_t>(k - *latest_gen, h);
}

inline std::int64_t age_gain(std::int64_t h, std::int64_t w) { return h - w; }

// Age after one slot: a delivery from a queue of age w resets it to w + 1.
inline std::int64_t step_user_age(std::int64_t h, bool delivered, std::int64_t w_source) {
  return delivered ? w_source + 1 : h + 1;
}

inline double step_debt(double x, double q, int d) { return x + q - d; }

inline double rate_gain(double x, double q) {
  const double a = positive_part(x + q);
  const double b = positive_part(x + q - 1.0);
  return a * a - b * b;
}

/// sum_i beta_i h_i + lambda sum_i (x_i^+)^2
double lyapunov(const AgeState& state, const SystemConfig& config);

}  // namespace aoicode
