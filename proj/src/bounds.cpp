#include "aoicode/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace aoicode {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double alpha_at(std::span<const double> alpha, int i) {
  if (alpha.empty()) return 1.0;
  return alpha.size() == 1 ? alpha[0] : alpha[static_cast<std::size_t>(i)];
}

bool symmetric(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); });
}

}  // namespace

double upper_bound(const SystemConfig& c) {
  double sum = 0.0;
  for (int i = 0; i < c.m; ++i) {
    if (c.q[i] <= 0.0 || c.theta[i] <= 0.0) return kInf;
    sum += c.alpha[i] / c.theta[i] + c.alpha[i] / (c.q[i] * (1.0 - c.epsilon[i]));
  }
  return sum / c.m + c.lambda;
}

double lower_bound_rate(const SystemConfig& c, std::span<const double> rates) {
  double weighted = 0.0;
  double alpha_sum = 0.0;
  for (int i = 0; i < c.m; ++i) {
    if (rates[i] <= 0.0) return kInf;
    weighted += rates[i] / c.alpha[i];
    alpha_sum += c.alpha[i];
  }
  return c.m / (2.0 * weighted) + alpha_sum / (2.0 * c.m);
}

double lower_bound_arrival(const SystemConfig& c) {
  double sum = 0.0;
  for (int i = 0; i < c.m; ++i) {
    if (c.theta[i] <= 0.0) return kInf;
    sum += c.alpha[i] / c.theta[i];
  }
  return sum / c.m;
}

SymmetricCapacity symmetric_capacity(int m, double epsilon, std::span<const double> alpha) {
  if (!(epsilon >= 0.0 && epsilon < 1.0)) throw ConfigError("epsilon out of [0,1) for symmetric capacity");
  if (m < 1) throw ConfigError("m must be positive for symmetric capacity");
  double denom = 0.0;
  double power = 1.0;
  for (int j = 1; j <= m; ++j) {
    power *= epsilon;
    denom += 1.0 / (1.0 - power);
  }
  SymmetricCapacity out;
  out.per_user_rate = 1.0 / denom;
  double inv_alpha = 0.0;
  double alpha_sum = 0.0;
  for (int i = 0; i < m; ++i) {
    inv_alpha += 1.0 / alpha_at(alpha, i);
    alpha_sum += alpha_at(alpha, i);
  }
  out.lower_bound = m / (2.0 * out.per_user_rate * inv_alpha) + alpha_sum / (2.0 * m);
  return out;
}

OuterBoundCheck capacity_outer_check(const SystemConfig& c, std::span<const double> rates) {
  if (c.m > 8) throw ConfigError("capacity_outer_check enumerates M! permutations; m = " + std::to_string(c.m) + " > 8");
  std::vector<int> perm(static_cast<std::size_t>(c.m));
  std::iota(perm.begin(), perm.end(), 0);
  OuterBoundCheck out;
  out.min_slack = kInf;
  do {
    double load = 0.0;
    UserSet prefix;
    for (int idx = 0; idx < c.m; ++idx) {
      prefix.insert(perm[idx]);
      load += rates[perm[idx]] / (1.0 - joint_erasure_prob(c, prefix));
    }
    const double slack = 1.0 - load;
    if (slack < out.min_slack) {
      out.min_slack = slack;
      out.worst_permutation = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  out.inside = out.min_slack >= -1e-12;
  return out;
}

BoundReport bound_report(const SystemConfig& c) {
  BoundReport r;
  r.ub = upper_bound(c);
  r.lb_arrival = lower_bound_arrival(c);
  if (symmetric(c.epsilon)) {
    const auto cap = symmetric_capacity(c.m, c.epsilon.front(), c.alpha);
    r.symmetric_capacity = cap.per_user_rate;
    r.lb_rate = cap.lower_bound;
  } else {
    r.lb_rate = lower_bound_rate(c, c.q);
  }
  if (c.m <= 8) r.capacity_ok = capacity_outer_check(c, c.q).inside;
  if (std::all_of(c.q.begin(), c.q.end(), [](double v) { return v > 0.0; })) {
    r.ub_beta = inverse_rate_beta(c.alpha, c.epsilon, c.q);
  }
  return r;
}

}  // namespace aoicode
