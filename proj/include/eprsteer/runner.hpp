#pragma once

// Run configuration and the end-to-end drivers behind the CLI.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "eprsteer/coarse_grain.hpp"
#include "eprsteer/spdc.hpp"
#include "eprsteer/witness.hpp"

namespace eprsteer {

struct InputFiles {
  std::vector<std::filesystem::path> position;  // one CSV per block
  std::vector<std::filesystem::path> momentum;
};

struct SyntheticConfig {
  SyntheticSetup setup = default_synthetic_setup();
  double total_per_tensor = 2e6;  // expected coincidences per count tensor
};

enum class MapFormat { Matrix, Long };

struct RunConfig {
  LogBase base = LogBase::bits();
  std::size_t n_boot = 1000;
  std::uint64_t seed = 20121101;
  std::vector<Direction> witnesses = {Direction::BGivenA, Direction::Symmetric};
  std::optional<InputFiles> input;
  std::optional<SyntheticConfig> synthetic;
  std::uint64_t pseudocount = 0;  // added to every cell when > 0
  std::vector<std::size_t> targets_a = {2, 3, 4, 6, 8, 12, 24};
  std::vector<std::size_t> targets_b = {2, 3, 4, 6, 8, 12, 24};
  std::vector<std::size_t> curve_targets = {2, 3, 4, 6, 8, 12, 24};
  Direction map_direction = Direction::BGivenA;
  MapFormat map_format = MapFormat::Matrix;
  unsigned threads = 0;

  /// Throws InvalidConfig: exactly one of input / synthetic must be set.
  void validate() const;

  /// Drop map and curve targets that do not divide the synthetic
  /// resolutions; an emptied list falls back to the resolution itself.
  void fit_targets_to_synthetic();

  nlohmann::json to_json() const;
  static RunConfig from_json(const nlohmann::json& j);
  /// FNV-1a 64 of the canonical JSON dump, as 16 hex digits.
  std::string hash() const;
};

/// Parse a config file. Relative input paths resolve against the file's
/// directory.
RunConfig load_config(const std::filesystem::path& path);

/// Load (or synthesize) the counts a config describes, with pseudocounts
/// applied.
CountSet load_counts(const RunConfig& config);

nlohmann::json run_witness(const RunConfig& config);
std::string run_map(const RunConfig& config);
std::string run_curve(const RunConfig& config);

/// Writes one CSV + sidecar per block into `directory` and a run.json that
/// points at them. Returns the written paths.
std::vector<std::filesystem::path> run_synth(const RunConfig& config,
                                             const std::filesystem::path& directory);

struct SelftestCase {
  std::string name;
  bool passed = false;
  std::string detail;
};

std::vector<SelftestCase> run_selftest();

}  // namespace eprsteer
