#pragma once

#include <array>
#include <random>
#include <string>
#include <vector>

#include "aoicode/age.hpp"
#include "aoicode/model.hpp"
#include "aoicode/vqueues.hpp"

namespace aoicode {

struct WeightedAction {
  Action action;
  double weight = 0.0;
};

/// Expected one-slot reduction in the Lyapunov function attributable to
/// `action`: sum over components of (1 - eps)(beta * gain + lambda * f).
double action_weight(const Action& action, const VirtualQueueNetwork& network, const AgeState& state,
                     const SystemConfig& config, Slot k);

/// Reusable buffers for policies that enumerate actions every slot.
struct PolicyScratch {
  std::vector<Action> actions;
};

// Max-weight over every coding action: uncoded packets and XORs over any
// codable user set within the clique cap.
WeightedAction arm_select(const VirtualQueueNetwork& network, const AgeState& state, const SystemConfig& config,
                          Slot k, PolicyScratch& scratch);
WeightedAction arm_select(const VirtualQueueNetwork& network, const AgeState& state, const SystemConfig& config,
                          Slot k);

// Max-weight restricted to fresh uncoded transmissions.
WeightedAction timesharing_select(const VirtualQueueNetwork& network, const AgeState& state,
                                  const SystemConfig& config, Slot k);

Action roundrobin_select(const VirtualQueueNetwork& network, Slot k);

/// A stationary-policy template: the queues an action would draw from.
/// Uncoded templates have one component with an empty cached-by set.
using ActionTemplate = Action;

// All templates for M users with coded templates up to `cap` users,
// in the order `mu` is indexed: uncoded 1..M, then coded templates in
// canonical order.
std::vector<ActionTemplate> enumerate_templates(int m, int cap);

// Draws a template from mu; returns it if all its queues are nonempty,
// otherwise idle.
Action randomized_select(std::span<const double> mu, std::span<const ActionTemplate> templates,
                         const VirtualQueueNetwork& network, std::mt19937_64& rng);

// mu_{i,{}} = q_i with the remaining mass spread evenly over two-user
// coded templates.
std::vector<double> pairwise_mu(const SystemConfig& config, std::span<const ActionTemplate> templates);

struct CutCheck {
  int user = 0;  // 0-based
  int cut = 0;   // 1..5
  double lhs = 0.0;
  double rhs = 0.0;
  double slack() const { return lhs - rhs; }
  bool satisfied() const { return slack() >= -1e-12; }
};

struct CutReport {
  bool feasible = false;
  double normalization_error = 0.0;  // sum(mu) - 1
  std::vector<CutCheck> cuts;        // 15 entries: users 1..3, cuts 1..5
  // First violated cut, if any.
  const CutCheck* first_violation() const;
};

/// Evaluates the five flow cuts per user for M = 3 plus normalization.
/// Throws ConfigError when M != 3.
CutReport cut_feasibility_m3(std::span<const double> mu, const SystemConfig& config);

}  // namespace aoicode
