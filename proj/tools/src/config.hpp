#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "loopy/experiments.hpp"

namespace loopy::io {

using nlohmann::json;

/// Everything a run can be configured with; sections beyond the basics are
/// optional and only required by the subcommands that use them.
struct RunConfig {
  RingSpec spec;
  ReactionParams params;
  double noise_sigma = 0.001;
  SteadyStateCriterion criterion;
  std::uint64_t seed = 0;
  long sample_stride = 100;
  std::optional<SweepConfig> sweep;          // "sweep" section
  std::optional<TrajectorySchedule> trajectory;  // "trajectory" section
  json echo;  // normalized config, reproduces the run byte-identically
};

/// Parses and validates a config file. Throws ConfigError with the offending
/// field's dotted path in the message.
RunConfig load_config(const std::string& path);

RunConfig parse_config(const json& doc);

/// Config with every default filled in (the documented template).
json default_config_json();

}  // namespace loopy::io
