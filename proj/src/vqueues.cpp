#include "aoicode/vqueues.hpp"

#include <algorithm>

#include "aoicode/age.hpp"

namespace aoicode {

std::string QueueKey::to_string() const {
  return "Q" + std::to_string(owner + 1) + cached_by.to_string();
}

bool canonical_less(const QueueKey& a, const QueueKey& b) {
  if (a.owner != b.owner) return a.owner < b.owner;
  return canonical_less(a.cached_by, b.cached_by);
}

Action Action::uncoded(QueueKey source) {
  Action a;
  a.comps_[0] = source;
  a.size_ = 1;
  return a;
}

Action Action::coded(std::initializer_list<QueueKey> components) {
  return coded(std::span<const QueueKey>(components.begin(), components.size()));
}

Action Action::coded(std::span<const QueueKey> components) {
  Action a;
  if (components.size() > static_cast<std::size_t>(kMaxUsers)) {
    throw ContractViolation("coded action with more components than users");
  }
  std::copy(components.begin(), components.end(), a.comps_.begin());
  a.size_ = static_cast<int>(components.size());
  std::sort(a.comps_.begin(), a.comps_.begin() + a.size_,
            [](const QueueKey& x, const QueueKey& y) { return x.owner < y.owner; });
  return a;
}

UserSet Action::destinations() const {
  UserSet d;
  for (const auto& c : components()) d.insert(c.owner);
  return d;
}

std::string Action::to_string() const {
  if (is_idle()) return "idle";
  std::string s;
  for (int i = 0; i < size_; ++i) {
    if (i) s += '+';
    s += comps_[i].to_string();
  }
  return s;
}

bool Action::operator==(const Action& o) const {
  if (size_ != o.size_) return false;
  for (int i = 0; i < size_; ++i) {
    if (!(comps_[i] == o.comps_[i])) return false;
  }
  return true;
}

bool canonical_less(const Action& a, const Action& b) {
  const auto ca = a.components();
  const auto cb = b.components();
  return std::lexicographical_compare(ca.begin(), ca.end(), cb.begin(), cb.end(),
                                      [](const QueueKey& x, const QueueKey& y) { return canonical_less(x, y); });
}

UserSet SideInfoGraph::mutual_neighbors(int i) const {
  UserSet r;
  out[i].for_each([&](int j) {
    if (out[j].contains(i)) r.insert(j);
  });
  return r;
}

int SideInfoGraph::arc_count() const {
  int n = 0;
  for (int i = 0; i < m; ++i) n += out[i].size();
  return n;
}

VirtualQueueNetwork::VirtualQueueNetwork(int m, BufferMode buffer)
    : m_(m),
      buffer_(buffer),
      sets_per_user_(1u << m),
      queues_(static_cast<std::size_t>(m) << m),
      nonempty_(static_cast<std::size_t>(m)),
      nonempty_pos_(static_cast<std::size_t>(m) << m, -1),
      memo_(std::size_t{1} << m, 0) {
  if (m < 1 || m > kMaxUsers) throw ConfigError("m out of range for queue network");
}

const std::vector<Slot>& VirtualQueueNetwork::queue(const QueueKey& key) const {
  return queues_[key.owner * sets_per_user_ + key.cached_by.bits()];
}

std::vector<Slot>& VirtualQueueNetwork::queue(const QueueKey& key) {
  return queues_[key.owner * sets_per_user_ + key.cached_by.bits()];
}

std::optional<Slot> VirtualQueueNetwork::latest_gen(const QueueKey& key) const {
  const auto& q = queue(key);
  if (q.empty()) return std::nullopt;
  return q.back();
}

std::size_t VirtualQueueNetwork::packet_count() const {
  std::size_t n = 0;
  for (const auto& q : queues_) n += q.size();
  return n;
}

void VirtualQueueNetwork::mark_nonempty(int owner, std::uint32_t set) {
  auto& pos = nonempty_pos_[owner * sets_per_user_ + set];
  if (pos >= 0) return;
  pos = static_cast<std::int32_t>(nonempty_[owner].size());
  nonempty_[owner].push_back(set);
}

void VirtualQueueNetwork::mark_empty(int owner, std::uint32_t set) {
  auto& pos = nonempty_pos_[owner * sets_per_user_ + set];
  if (pos < 0) return;
  auto& list = nonempty_[owner];
  const std::uint32_t moved = list.back();
  list[pos] = moved;
  nonempty_pos_[owner * sets_per_user_ + moved] = pos;
  list.pop_back();
  pos = -1;
}

void VirtualQueueNetwork::place(const QueueKey& key, Slot gen) {
  if (key.cached_by.contains(key.owner) || key.owner < 0 || key.owner >= m_ ||
      (key.cached_by.bits() >> m_) != 0) {
    throw ContractViolation("invalid queue key " + key.to_string());
  }
  auto& q = queue(key);
  if (buffer_ == BufferMode::one) {
    if (q.empty()) {
      q.push_back(gen);
    } else {
      q.front() = std::max(q.front(), gen);
    }
  } else {
    q.insert(std::upper_bound(q.begin(), q.end(), gen), gen);
  }
  mark_nonempty(key.owner, key.cached_by.bits());
}

Slot VirtualQueueNetwork::take_latest(const QueueKey& key) {
  auto& q = queue(key);
  if (q.empty()) throw ContractViolation("action references empty queue " + key.to_string());
  const Slot g = q.back();
  q.pop_back();
  if (q.empty()) mark_empty(key.owner, key.cached_by.bits());
  return g;
}

SideInfoGraph VirtualQueueNetwork::build_graph() const {
  SideInfoGraph g;
  g.m = m_;
  for (int i = 0; i < m_; ++i) {
    std::uint32_t arcs = 0;
    for (std::uint32_t s : nonempty_[i]) arcs |= s;
    g.out[i] = UserSet(arcs);
  }
  return g;
}

bool VirtualQueueNetwork::codable(UserSet users) const {
  if (users.empty()) return false;
  bool ok = true;
  users.for_each([&](int tau) {
    if (!ok) return;
    const std::uint32_t need = users.without(tau).bits();
    bool found = false;
    for (std::uint32_t s : nonempty_[tau]) {
      if ((s & need) == need) {
        found = true;
        break;
      }
    }
    ok = found;
  });
  return ok;
}

bool VirtualQueueNetwork::codable_memo(UserSet users) const {
  std::uint32_t& slot = memo_[users.bits()];
  if ((slot & 0x7fffffffu) == memo_epoch_) return slot >> 31;
  const bool ok = codable(users);
  slot = memo_epoch_ | (ok ? 0x80000000u : 0u);
  return ok;
}

bool VirtualQueueNetwork::satisfies_coding_condition(const Action& action) const {
  const UserSet members = action.destinations();
  if (members.size() != action.size()) return false;
  for (const auto& c : action.components()) {
    if (c.cached_by.contains(c.owner) || !nonempty(c)) return false;
    if (!c.cached_by.includes(members.without(c.owner))) return false;
  }
  return true;
}

QueueKey VirtualQueueNetwork::select_component_queue(int member, UserSet clique, const AgeView& ages) const {
  const std::uint32_t need = clique.without(member).bits();
  const std::int64_t h = ages.h[member];
  bool found = false;
  std::int64_t best_gain = 0;
  UserSet best;
  for (std::uint32_t s : nonempty_[member]) {
    if ((s & need) != need) continue;
    const std::int64_t gain = age_gain(h, queue_age(queue(QueueKey{member, UserSet(s)}).back(), h, ages.k));
    const UserSet cand(s);
    if (!found || gain > best_gain || (gain == best_gain && canonical_less(cand, best))) {
      found = true;
      best_gain = gain;
      best = cand;
    }
  }
  if (!found) {
    throw ContractViolation("no queue of user " + std::to_string(member + 1) + " covers clique " +
                            clique.to_string());
  }
  return QueueKey{member, best};
}

void VirtualQueueNetwork::extend_cliques(UserSet clique, UserSet candidates, int cap, const SideInfoGraph& g,
                                         std::vector<UserSet>& out, bool all) const {
  // `clique` is codable here. Report it when no codable one-user extension
  // exists within the cap (codability is closed under taking subsets, so
  // this is maximality), then grow it in increasing user order.
  if (clique.size() >= 2) {
    bool maximal = true;
    if (!all && clique.size() < cap) {
      std::uint32_t common = (1u << m_) - 1u;
      clique.for_each([&](int u) { common &= g.mutual_neighbors(u).bits(); });
      UserSet(common).for_each([&](int v) {
        if (maximal && codable_memo(UserSet(clique.bits() | (1u << v)))) maximal = false;
      });
    }
    if (maximal) out.push_back(clique);
  }
  if (clique.size() >= cap) return;
  candidates.for_each([&](int v) {
    UserSet grown = clique;
    grown.insert(v);
    if (!codable_memo(grown)) return;
    const std::uint32_t higher = ~((2u << v) - 1u);
    extend_cliques(grown, UserSet(candidates.bits() & g.mutual_neighbors(v).bits() & higher), cap, g, out, all);
  });
}

void VirtualQueueNetwork::coding_cliques(int cap, std::vector<UserSet>& out, bool all) const {
  out.clear();
  if (cap < 2) return;
  const SideInfoGraph g = build_graph();
  if (++memo_epoch_ > 0x7fffffffu) {
    std::fill(memo_.begin(), memo_.end(), 0u);
    memo_epoch_ = 1;
  }
  for (int v = 0; v < m_; ++v) {
    const UserSet nbrs = g.mutual_neighbors(v);
    const std::uint32_t higher = ~((2u << v) - 1u);
    if ((nbrs.bits() & higher) == 0) continue;
    extend_cliques(UserSet::of({v}), UserSet(nbrs.bits() & higher), cap, g, out, all);
  }
}

void VirtualQueueNetwork::enumerate_actions(int cap, const AgeView& ages, std::vector<Action>& out,
                                            bool singletons) const {
  list_actions(cap, ages, out, singletons, false);
}

void VirtualQueueNetwork::enumerate_candidates(int cap, const AgeView& ages, std::vector<Action>& out,
                                               bool singletons) const {
  list_actions(cap, ages, out, singletons, true);
}

void VirtualQueueNetwork::list_actions(int cap, const AgeView& ages, std::vector<Action>& out, bool singletons,
                                       bool all) const {
  out.clear();
  for (int i = 0; i < m_; ++i) {
    if (nonempty(QueueKey{i, UserSet()})) out.push_back(Action::uncoded(i));
    if (singletons) {
      for (std::uint32_t s : nonempty_[i]) {
        if (s != 0) out.push_back(Action::uncoded(QueueKey{i, UserSet(s)}));
      }
    }
  }
  std::vector<UserSet> cliques;
  coding_cliques(cap, cliques, all);
  for (UserSet c : cliques) {
    std::array<QueueKey, kMaxUsers> comps{};
    int n = 0;
    c.for_each([&](int tau) { comps[n++] = select_component_queue(tau, c, ages); });
    out.push_back(Action::coded(std::span<const QueueKey>(comps.data(), static_cast<std::size_t>(n))));
  }
  std::sort(out.begin(), out.end(), [](const Action& a, const Action& b) { return canonical_less(a, b); });
}

std::vector<Action> VirtualQueueNetwork::enumerate_actions(int cap, const AgeView& ages, bool singletons) const {
  std::vector<Action> out;
  enumerate_actions(cap, ages, out, singletons);
  return out;
}

SlotOutcome VirtualQueueNetwork::apply_outcome(const Action& action, UserSet received) {
  SlotOutcome r;
  r.action = action;
  r.received = received;
  if (action.is_idle()) return r;

  const auto comps = action.components();
  // Validate before mutating so a violation leaves the network untouched.
  for (const auto& c : comps) {
    if (!nonempty(c)) throw ContractViolation("action references empty queue " + c.to_string());
  }
  for (std::size_t u = 0; u < comps.size(); ++u) {
    const QueueKey& src = comps[u];
    const Slot gen = take_latest(src);
    if (received.contains(src.owner)) {
      r.delivered.insert(src.owner);
      r.delivered_gen[src.owner] = gen;
      continue;
    }
    // Receivers outside S_u that cache every other component recover this
    // one as well.
    std::uint32_t full = received.without(src.cached_by).without(src.owner).bits();
    for (std::size_t v = 0; v < comps.size(); ++v) {
      if (v != u) full &= comps[v].cached_by.bits();
    }
    place(QueueKey{src.owner, UserSet(src.cached_by.bits() | full)}, gen);
  }
  return r;
}

}  // namespace aoicode
