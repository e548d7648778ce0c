#pragma once

#include <bit>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace aoicode {

// Users are indexed 0..M-1 internally and printed 1-based.
inline constexpr int kMaxUsers = 12;

using Slot = std::int64_t;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when a run reaches a state the scheduling contract forbids
// (e.g. an action that references an empty queue).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A subset of users, stored as a bitmask.
class UserSet {
 public:
  constexpr UserSet() = default;
  constexpr explicit UserSet(std::uint32_t bits) : bits_(bits) {}

  static UserSet of(std::initializer_list<int> users) {
    UserSet s;
    for (int u : users) s.insert(u);
    return s;
  }
  static constexpr UserSet all(int m) { return UserSet((1u << m) - 1u); }

  constexpr std::uint32_t bits() const { return bits_; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr int size() const { return std::popcount(bits_); }
  constexpr bool contains(int u) const { return (bits_ >> u) & 1u; }
  constexpr bool includes(UserSet other) const { return (bits_ & other.bits_) == other.bits_; }

  constexpr void insert(int u) { bits_ |= (1u << u); }
  constexpr void erase(int u) { bits_ &= ~(1u << u); }

  constexpr UserSet operator|(UserSet o) const { return UserSet(bits_ | o.bits_); }
  constexpr UserSet operator&(UserSet o) const { return UserSet(bits_ & o.bits_); }
  constexpr UserSet without(UserSet o) const { return UserSet(bits_ & ~o.bits_); }
  constexpr UserSet without(int u) const { return UserSet(bits_ & ~(1u << u)); }
  constexpr bool operator==(const UserSet&) const = default;

  std::vector<int> members() const;

  // "{1,3}" using 1-based user labels; "{}" for the empty set.
  std::string to_string() const;

  template <typename F>
  constexpr void for_each(F&& f) const {
    for (std::uint32_t b = bits_; b != 0; b &= b - 1) f(std::countr_zero(b));
  }

 private:
  std::uint32_t bits_ = 0;
};

// Canonical order: lexicographic comparison of the ascending member lists,
// so {} < {1} < {1,2} < {1,3} < {2}.
bool canonical_less(UserSet a, UserSet b);

enum class PolicyKind { arm, timesharing, randomized, roundrobin };

std::string to_string(PolicyKind p);
PolicyKind parse_policy(const std::string& name);

// How many packets a virtual queue retains. `one` keeps only the freshest;
// `automatic` resolves to `one` when every q_i is 0 and to `unbounded`
// otherwise, since dropping superseded packets caps the delivery rate below
// the arrival rate.
enum class BufferMode { automatic, one, unbounded };

std::string to_string(BufferMode b);
BufferMode parse_buffer_mode(const std::string& name);

// Named beta prescriptions resolved during validation.
enum class BetaPreset { none, shifted, inverse_rate };

std::string to_string(BetaPreset b);

/// Scalar parameters of one scenario. Per-user vectors may hold a single
/// value before validation (symmetric shorthand).
struct SystemConfig {
  int m = 0;
  std::vector<double> theta;
  std::vector<double> epsilon;
  std::vector<double> q{0.0};
  std::vector<double> alpha{1.0};
  std::vector<double> beta{1.0};
  BetaPreset beta_preset = BetaPreset::none;
  double lambda = 0.0;
  // nullopt: coded actions may use cliques of any size up to M.
  // 1 encodes "uncoded-only".
  std::optional<int> clique_cap;
  std::int64_t horizon = 200000;
  std::uint64_t seed = 1;
  PolicyKind policy = PolicyKind::arm;
  std::vector<double> mu;
  bool singleton_retransmissions = false;
  BufferMode buffer = BufferMode::automatic;

  int effective_clique_cap() const { return clique_cap.value_or(m); }
  bool uncoded_only() const { return effective_clique_cap() < 2; }
};

/// Checks every invariant and expands symmetric shorthand. Throws
/// ConfigError naming the first violated field.
SystemConfig validate(SystemConfig config);

/// Probability that exactly the users in `erased` lose a transmission and
/// every other user receives it, under independent erasures.
double erasure_success_prob(const SystemConfig& config, UserSet erased);

/// Probability that every user in `set` loses a transmission (others
/// unconstrained).
double joint_erasure_prob(const SystemConfig& config, UserSet set);

// Size of the randomized policy's template list for M users and a clique cap.
long long randomized_template_count(int m, int cap);

// beta_i = min{i, max{0, i-3}} with 1-based i.
std::vector<double> shifted_beta(int m);

// beta_i = alpha_i / ((1 - epsilon_i) q_i); requires q_i > 0.
std::vector<double> inverse_rate_beta(const std::vector<double>& alpha,
                                      const std::vector<double>& epsilon,
                                      const std::vector<double>& q);

}  // namespace aoicode
