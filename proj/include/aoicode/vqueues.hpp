#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "aoicode/model.hpp"

namespace aoicode {

/// Identifies Q_{owner, cached_by}: packets for `owner` held in the caches
/// of exactly the users in `cached_by`.
struct QueueKey {
  int owner = 0;
  UserSet cached_by;

  bool operator==(const QueueKey&) const = default;
  std::string to_string() const;  // "Q1{2,3}"
};

bool canonical_less(const QueueKey& a, const QueueKey& b);

/// A scheduled transmission: one component means an uncoded packet, two or
/// more an XOR with one packet per component. No components means idle.
class Action {
 public:
  Action() = default;

  static Action idle() { return Action(); }
  static Action uncoded(int user) { return uncoded(QueueKey{user, UserSet()}); }
  static Action uncoded(QueueKey source);
  // Components may be given in any order; they are stored sorted by owner.
  static Action coded(std::initializer_list<QueueKey> components);
  static Action coded(std::span<const QueueKey> components);

  bool is_idle() const { return size_ == 0; }
  bool is_coded() const { return size_ >= 2; }
  int size() const { return size_; }
  std::span<const QueueKey> components() const { return {comps_.data(), static_cast<std::size_t>(size_)}; }
  UserSet destinations() const;

  // "idle", "Q1{}", "Q1{2}+Q2{1}"
  std::string to_string() const;

  bool operator==(const Action& o) const;

 private:
  std::array<QueueKey, kMaxUsers> comps_{};
  int size_ = 0;
};

// Lexicographic over the component sequences; idle sorts first.
bool canonical_less(const Action& a, const Action& b);

/// Directed arcs i -> j whenever some nonempty Q_{i,S} has j in S.
struct SideInfoGraph {
  int m = 0;
  std::array<UserSet, kMaxUsers> out{};

  bool has_arc(int from, int to) const { return out[from].contains(to); }
  // Users j with both i -> j and j -> i.
  UserSet mutual_neighbors(int i) const;
  int arc_count() const;
};

/// Ages the encoder uses to rank candidate source queues.
struct AgeView {
  std::span<const std::int64_t> h;
  Slot k = 0;
};

/// Result of applying a transmission and its feedback.
struct SlotOutcome {
  Action action;
  UserSet received;
  UserSet delivered;                       // d_i = 1
  std::array<Slot, kMaxUsers> delivered_gen{};  // generation time of the packet delivered to i
};

/// The encoder's virtual queue network {Q_{i,S}}.
class VirtualQueueNetwork {
 public:
  explicit VirtualQueueNetwork(int m, BufferMode buffer = BufferMode::one);

  int users() const { return m_; }
  BufferMode buffer() const { return buffer_; }

  std::optional<Slot> latest_gen(const QueueKey& key) const;
  std::size_t size(const QueueKey& key) const { return queue(key).size(); }
  bool nonempty(const QueueKey& key) const { return !queue(key).empty(); }
  // Cached-by sets of user i's nonempty queues, in no particular order.
  std::span<const std::uint32_t> nonempty_sets(int owner) const { return nonempty_[owner]; }
  std::size_t packet_count() const;

  // A fresh arrival for user i generated at slot k; with a one-packet
  // buffer it supersedes whatever Q_{i,{}} held.
  void enqueue_arrival(int owner, Slot k) { place(QueueKey{owner, UserSet()}, k); }

  // Inserts a packet; in one-packet mode the fresher of incumbent and
  // newcomer is kept.
  void place(const QueueKey& key, Slot gen);

  SideInfoGraph build_graph() const;

  // True when every member of `users` has a nonempty queue cached by all
  // the other members.
  bool codable(UserSet users) const;
  bool satisfies_coding_condition(const Action& action) const;

  // Nonempty Q_{member,S} with S covering clique \ {member} and maximal
  // age-gain; ties go to the canonically smallest S.
  QueueKey select_component_queue(int member, UserSet clique, const AgeView& ages) const;

  // Uncoded actions for nonempty Q_{i,{}} (and nonempty Q_{i,S} when
  // `singletons` is set), plus one coded action per clique that is maximal
  // among codable user sets of size <= cap. cap < 2 disables coding.
  // Output is sorted canonically.
  void enumerate_actions(int cap, const AgeView& ages, std::vector<Action>& out,
                         bool singletons = false) const;
  std::vector<Action> enumerate_actions(int cap, const AgeView& ages, bool singletons = false) const;
  // Like enumerate_actions but with one coded action for every codable set
  // of 2..cap users, maximal or not. A smaller set can outweigh every
  // maximal set containing it because it may draw on fresher queues.
  void enumerate_candidates(int cap, const AgeView& ages, std::vector<Action>& out, bool singletons = false) const;

  // Codable user sets (size >= 2) reported by enumerate_actions, unsorted.
  // With `all`, every codable set up to the cap instead.
  void coding_cliques(int cap, std::vector<UserSet>& out, bool all = false) const;

  // Moves packets according to who received the transmission. Throws
  // ContractViolation if a component's queue is empty.
  SlotOutcome apply_outcome(const Action& action, UserSet received);

 private:
  const std::vector<Slot>& queue(const QueueKey& key) const;
  std::vector<Slot>& queue(const QueueKey& key);
  Slot take_latest(const QueueKey& key);
  void mark_nonempty(int owner, std::uint32_t set);
  void mark_empty(int owner, std::uint32_t set);
  void extend_cliques(UserSet clique, UserSet candidates, int cap, const SideInfoGraph& g,
                      std::vector<UserSet>& out, bool all) const;
  void list_actions(int cap, const AgeView& ages, std::vector<Action>& out, bool singletons, bool all) const;
  bool codable_memo(UserSet users) const;

  int m_;
  BufferMode buffer_;
  std::uint32_t sets_per_user_;
  // queues_[owner * sets_per_user_ + S] holds generation times, ascending.
  std::vector<std::vector<Slot>> queues_;
  std::vector<std::vector<std::uint32_t>> nonempty_;
  std::vector<std::int32_t> nonempty_pos_;
  // Codability answers for the current clique search, valid while the
  // stamp matches `memo_epoch_` (bit 31 holds the answer).
  mutable std::vector<std::uint32_t> memo_;
  mutable std::uint32_t memo_epoch_ = 0;
};

}  // namespace aoicode
