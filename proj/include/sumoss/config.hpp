#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "sumoss/experiments.hpp"
#include "sumoss/simulator.hpp"

namespace sumoss {

struct CompareSettings {
  std::size_t runs = 10;
  std::vector<Method> methods{Method::sumoss, Method::baseline, Method::random};
};

/// Everything one configuration document describes. `sweep.base` mirrors
/// `mission` (w1, w2 and seed are overridden per sweep run).
struct RunConfig {
  MissionConfig mission;
  CompareSettings compare;
  SweepSpec sweep;
};

/// Parses a YAML document with the sections area, kernel, deviation, planner,
/// mission, compare and sweep. Every section and key is optional; absent keys
/// keep their defaults. Unknown keys, wrong types and invalid values raise
/// ConfigError naming the source, line and key.
RunConfig parse_config(std::string_view text, std::string_view source = "<config>");
RunConfig load_config(const std::filesystem::path& path);

/// The built-in defaults as a YAML document (accepted by parse_config).
std::string default_config_yaml();

}  // namespace sumoss
