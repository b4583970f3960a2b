#pragma once

#include "qcs/experiment.hpp"

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

namespace qcs {

/// Invalid configuration; key() names the offending key (dotted for tables).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& what)
      : std::runtime_error(key.empty() ? what : key + ": " + what), key_(std::move(key)) {}
  [[nodiscard]] const std::string& key() const { return key_; }

 private:
  std::string key_;
};

/// A validated sweep configuration.
///
/// TOML layout (every key optional unless marked required):
///
///     master_seed = 7
///     n = 1000                              # required
///     algorithms = ["qiht", "qsp"]          # required
///     sparsity = [2, 4, 6]                  # required
///     total_bits = [500, 1000]              # required
///     bit_depths = [1, 2]                   # default [1], or [quantizer.bits]
///     isnr = [35.0, inf]                    # default [inf]
///     corruption = [0.0]                    # fractions in [0, 1]
///     trials = 20
///     out_dir = "out"
///     record_runtime = true
///
///     [quantizer]
///     kind = "auto"                         # auto | sign | uniform
///     bits = 2                              # optional, fixes bit_depths
///     saturation = 3.0
///
///     [solver]
///     step_size = "auto"                    # or a positive number
///     max_iterations = "default"            # or a positive integer
///     outlier_budget = "auto"               # true corruption count, or an integer
///     projection = "joint"                  # joint | literal
///     projection_max_iterations = 50
///     projection_tolerance = 1e-6
///     prune = true
///     consistency_stop = true
struct RunConfig {
  std::uint64_t master_seed = 0;
  SweepGrid grid;
  TrialSettings settings;
  std::string out_dir = "out";
  bool record_runtime = true;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

RunConfig parse_config_text(std::string_view text, std::string_view source = "<config>");
RunConfig parse_config(const std::filesystem::path& path);
/// TOML text that parse_config_text maps back to an equal RunConfig.
std::string serialize_config(const RunConfig& cfg);

}  // namespace qcs
