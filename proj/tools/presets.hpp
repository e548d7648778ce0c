#pragma once

#include <string>
#include <vector>

#include "aoicode/engine.hpp"
#include "aoicode/model.hpp"

namespace aoisim {

// One sweep over a fixed base configuration. The family name lands in the
// `family` column of every summary row.
struct Family {
  std::string name;
  aoicode::SystemConfig base;
  std::vector<aoicode::SweepAxis> axes;
};

struct Preset {
  std::string name;
  std::string description;
  std::vector<Family> families;
};

const std::vector<Preset>& presets();
// Throws ConfigError for an unknown name.
const Preset& find_preset(const std::string& name);

// Evenly spaced values lo..hi (n points), printed with the shortest
// round-tripping representation.
std::vector<std::string> linspace(double lo, double hi, int n);

}  // namespace aoisim
