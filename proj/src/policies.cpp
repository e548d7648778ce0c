#include "aoicode/policies.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "aoicode/random.hpp"

namespace aoicode {

double action_weight(const Action& action, const VirtualQueueNetwork& network, const AgeState& state,
                     const SystemConfig& config, Slot k) {
  double w = 0.0;
  for (const auto& c : action.components()) {
    const int i = c.owner;
    const std::int64_t h = state.h[i];
    const double gain = static_cast<double>(age_gain(h, queue_age(network.latest_gen(c), h, k)));
    w += (1.0 - config.epsilon[i]) * (config.beta[i] * gain + config.lambda * rate_gain(state.x[i], config.q[i]));
  }
  return w;
}

WeightedAction arm_select(const VirtualQueueNetwork& network, const AgeState& state, const SystemConfig& config,
                          Slot k, PolicyScratch& scratch) {
  const AgeView ages{state.h, k};
  network.enumerate_candidates(config.effective_clique_cap(), ages, scratch.actions, config.singleton_retransmissions);
  WeightedAction best;
  bool found = false;
  // Candidates arrive in canonical order, so strict improvement keeps the
  // canonically first action among ties.
  for (const auto& a : scratch.actions) {
    const double w = action_weight(a, network, state, config, k);
    if (!found || w > best.weight) {
      best = WeightedAction{a, w};
      found = true;
    }
  }
  return best;
}

WeightedAction arm_select(const VirtualQueueNetwork& network, const AgeState& state, const SystemConfig& config,
                          Slot k) {
  PolicyScratch scratch;
  return arm_select(network, state, config, k, scratch);
}

WeightedAction timesharing_select(const VirtualQueueNetwork& network, const AgeState& state,
                                  const SystemConfig& config, Slot k) {
  WeightedAction best;
  bool found = false;
  for (int i = 0; i < network.users(); ++i) {
    const Action a = Action::uncoded(i);
    if (!network.nonempty(a.components()[0])) continue;
    const double w = action_weight(a, network, state, config, k);
    if (!found || w > best.weight) {
      best = WeightedAction{a, w};
      found = true;
    }
  }
  return best;
}

Action roundrobin_select(const VirtualQueueNetwork& network, Slot k) {
  const int m = network.users();
  for (int step = 0; step < m; ++step) {
    const int i = static_cast<int>((k + step) % m);
    if (network.nonempty(QueueKey{i, UserSet()})) return Action::uncoded(i);
  }
  return Action::idle();
}

std::vector<ActionTemplate> enumerate_templates(int m, int cap) {
  std::vector<ActionTemplate> out;
  for (int i = 0; i < m; ++i) out.push_back(Action::uncoded(i));
  std::vector<ActionTemplate> coded;
  const std::uint32_t all = (1u << m) - 1u;
  for (std::uint32_t c = 1; c <= all; ++c) {
    const UserSet clique(c);
    if (clique.size() < 2 || clique.size() > cap) continue;
    const std::vector<int> members = clique.members();
    const std::uint32_t outside = all & ~c;
    // Each member caches the rest of the clique plus any subset of outsiders.
    std::vector<std::uint32_t> extra(members.size(), 0);
    while (true) {
      std::array<QueueKey, kMaxUsers> comps{};
      for (std::size_t u = 0; u < members.size(); ++u) {
        comps[u] = QueueKey{members[u], UserSet((c & ~(1u << members[u])) | extra[u])};
      }
      coded.push_back(Action::coded(std::span<const QueueKey>(comps.data(), members.size())));
      // Advance the mixed-radix counter over subsets of `outside`.
      std::size_t u = 0;
      for (; u < members.size(); ++u) {
        extra[u] = (extra[u] - outside) & outside;
        if (extra[u] != 0) break;
      }
      if (u == members.size()) break;
    }
  }
  std::sort(coded.begin(), coded.end(), [](const Action& a, const Action& b) { return canonical_less(a, b); });
  out.insert(out.end(), coded.begin(), coded.end());
  return out;
}

Action randomized_select(std::span<const double> mu, std::span<const ActionTemplate> templates,
                         const VirtualQueueNetwork& network, std::mt19937_64& rng) {
  if (mu.size() != templates.size()) throw ConfigError("mu: size does not match the template list");
  const double u = uniform01(rng);
  double acc = 0.0;
  std::size_t pick = templates.size();
  for (std::size_t i = 0; i < mu.size(); ++i) {
    acc += mu[i];
    if (u < acc) {
      pick = i;
      break;
    }
  }
  // Rounding can leave u just above the final partial sum.
  if (pick == templates.size()) {
    for (std::size_t i = mu.size(); i-- > 0;) {
      if (mu[i] > 0.0) {
        pick = i;
        break;
      }
    }
  }
  if (pick == templates.size()) return Action::idle();
  const Action& a = templates[pick];
  for (const auto& c : a.components()) {
    if (!network.nonempty(c)) return Action::idle();
  }
  return a;
}

std::vector<double> pairwise_mu(const SystemConfig& config, std::span<const ActionTemplate> templates) {
  std::vector<double> mu(templates.size(), 0.0);
  double used = 0.0;
  std::size_t pairs = 0;
  for (std::size_t t = 0; t < templates.size(); ++t) {
    if (templates[t].size() == 1) {
      mu[t] = config.q[templates[t].components()[0].owner];
      used += mu[t];
    } else if (templates[t].size() == 2) {
      ++pairs;
    }
  }
  if (used > 1.0) throw ConfigError("q: target rates sum above 1, no room for coded templates");
  for (std::size_t t = 0; t < templates.size(); ++t) {
    if (templates[t].size() == 2) mu[t] = (1.0 - used) / static_cast<double>(pairs);
  }
  return mu;
}

const CutCheck* CutReport::first_violation() const {
  for (const auto& c : cuts) {
    if (!c.satisfied()) return &c;
  }
  return nullptr;
}

CutReport cut_feasibility_m3(std::span<const double> mu, const SystemConfig& config) {
  if (config.m != 3) throw ConfigError("cut feasibility is defined for m = 3 only, got m = " + std::to_string(config.m));
  // mu is indexed by the templates of the configured cap; templates beyond
  // the cap carry probability 0.
  const auto templates = enumerate_templates(3, std::max(1, config.effective_clique_cap()));
  if (mu.size() != templates.size()) {
    throw ConfigError("mu: expected " + std::to_string(templates.size()) + " template probabilities, got " +
                      std::to_string(mu.size()));
  }
  auto prob = [&](std::initializer_list<QueueKey> comps) {
    const Action a = Action::coded(comps);
    for (std::size_t t = 0; t < templates.size(); ++t) {
      if (templates[t] == a) return mu[t];
    }
    return 0.0;
  };
  auto sigma = [&](std::initializer_list<int> erased) { return erasure_success_prob(config, UserSet::of(erased)); };

  CutReport report;
  double total = 0.0;
  for (double p : mu) total += p;
  report.normalization_error = total - 1.0;

  for (int i = 0; i < 3; ++i) {
    const int lo = (i + 1) % 3 < (i + 2) % 3 ? (i + 1) % 3 : (i + 2) % 3;
    const int hi = 3 - i - lo;
    const double mu0 = mu[static_cast<std::size_t>(i)];
    const double keep = 1.0 - config.epsilon[i];
    const double only_i = sigma({i});
    auto all_but = [&](int j) {  // sigma([3] \ j)
      return sigma({(j + 1) % 3, (j + 2) % 3});
    };
    // mu_{i,{j},j,{i}} + mu_{i,{j},j,[3]\j}
    auto pair_direct = [&](int j) {
      const int o = 3 - i - j;
      return prob({QueueKey{i, UserSet::of({j})}, QueueKey{j, UserSet::of({i})}}) +
             prob({QueueKey{i, UserSet::of({j})}, QueueKey{j, UserSet::of({i, o})}});
    };
    // mu_{i,[3]\i,j,{i}} + mu_{i,[3]\i,j,[3]\j}
    auto pair_full = [&](int j) {
      const int o = 3 - i - j;
      return prob({QueueKey{i, UserSet::of({j, o})}, QueueKey{j, UserSet::of({i})}}) +
             prob({QueueKey{i, UserSet::of({j, o})}, QueueKey{j, UserSet::of({i, o})}});
    };

    const double cut1 = mu0 * (keep + all_but(lo) + all_but(hi) + only_i);
    const double cut2 = mu0 * (keep + all_but(lo) + only_i) + pair_direct(hi) * (keep + only_i);
    const double cut3 = mu0 * (keep + all_but(hi) + only_i) + pair_direct(lo) * (keep + only_i);
    const double cut4 = mu0 * (keep + only_i) + (pair_direct(lo) + pair_direct(hi)) * (keep + only_i);
    const double cut5 = keep * (mu0 + pair_full(lo) + pair_full(hi) + pair_direct(lo) + pair_direct(hi));
    const double lhs[5] = {cut1, cut2, cut3, cut4, cut5};
    for (int c = 0; c < 5; ++c) report.cuts.push_back(CutCheck{i, c + 1, lhs[c], config.q[i]});
  }
  report.feasible = std::abs(report.normalization_error) <= 1e-9 && report.first_violation() == nullptr;
  return report;
}

}  // namespace aoicode
