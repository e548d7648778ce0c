#pragma once

#include <span>
#include <vector>

#include "aoicode/model.hpp"

namespace aoicode {

// Upper bound on the long-run EAoI of the age-rate max-weight policy, valid
// when beta_i = alpha_i / ((1 - eps_i) q_i). Infinity if any q_i or theta_i is 0.
double upper_bound(const SystemConfig& config);

// Lower bound for any policy delivering rates r_i. Infinity if any r_i <= 0.
double lower_bound_rate(const SystemConfig& config, std::span<const double> rates);

// Lower bound from the arrival process alone. Infinity if any theta_i is 0.
double lower_bound_arrival(const SystemConfig& config);

struct SymmetricCapacity {
  double per_user_rate = 0.0;
  // lower_bound_rate evaluated at the symmetric capacity point.
  double lower_bound = 0.0;
};

// Per-user symmetric point of the permutation outer bound for M users with
// identical independent erasure probability eps. `alpha` (size M or 1) feeds
// the companion lower bound.
SymmetricCapacity symmetric_capacity(int m, double epsilon, std::span<const double> alpha = {});

struct OuterBoundCheck {
  bool inside = false;
  double min_slack = 0.0;           // min over permutations of 1 - sum_i r/(1 - eps_hat)
  std::vector<int> worst_permutation;  // 0-based user order
};

// Checks the rate vector against every permutation cut of the capacity
// outer bound. Throws ConfigError for M > 8.
OuterBoundCheck capacity_outer_check(const SystemConfig& config, std::span<const double> rates);

struct BoundReport {
  double ub = 0.0;
  double lb_rate = 0.0;     // at the supplied rates (or the capacity point when symmetric)
  double lb_arrival = 0.0;
  bool capacity_ok = false;  // targets q inside the outer bound
  double symmetric_capacity = 0.0;  // 0 when erasures are asymmetric
  std::vector<double> ub_beta;      // beta prescription the upper bound assumes (empty if undefined)
};

BoundReport bound_report(const SystemConfig& config);

}  // namespace aoicode
