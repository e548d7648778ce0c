#include "aoicode/age.hpp"

namespace aoicode {

double lyapunov(const AgeState& state, const SystemConfig& config) {
  double age = 0.0;
  double debt = 0.0;
  for (std::size_t i = 0; i < state.h.size(); ++i) {
    age += config.beta[i] * static_cast<double>(state.h[i]);
    const double xp = positive_part(state.x[i]);
    debt += xp * xp;
  }
  return age + config.lambda * debt;
}

}  // namespace aoicode
