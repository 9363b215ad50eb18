#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "splittree/lifespan.hpp"

namespace splittree {

// Run-level parameters shared by the CLI subcommands.  Flag values
// override config-file keys, which override these defaults.
struct RunConfig {
  std::optional<LifespanMeasure> measure;
  std::optional<double> mutation_prob;
  double horizon = 10.0;
  double step = 1e-3;
  std::uint64_t seed = 42;
  std::uint64_t replicates = 10'000;
  std::uint64_t cap = 10'000'000;
  double tolerance = 1e-8;
  std::string output = "-";

  MutationContext context() const;
  const LifespanMeasure& require_measure() const;
};

// Parse {"family":"exponential","d":1.0,"b":2.0,...}; errors name the
// offending key.
LifespanMeasure parse_measure_json(const std::string& json_text);

// Merge keys from a config-file JSON object into `cfg` (measure, p,
// horizon, step, seed, replicates, cap, tolerance, out).
void apply_config_file(RunConfig& cfg, const std::string& path);

}  // namespace splittree
