#pragma once

// Integer-factor downsampling and resolution sweeps.

#include <cstdint>
#include <optional>
#include <vector>

#include "eprsteer/bootstrap.hpp"
#include "eprsteer/grid.hpp"
#include "eprsteer/witness.hpp"

namespace eprsteer {

/// Sum blocks of factor_a adjacent windows on every A axis and factor_b on
/// every B axis. Blocks start at window 0.
CountTensor downsample(const CountTensor& counts, std::size_t factor_a, std::size_t factor_b);
JointDistribution downsample(const JointDistribution& dist, std::size_t factor_a,
                             std::size_t factor_b);
CountBlock downsample(const CountBlock& block, std::size_t factor_a, std::size_t factor_b);
CountSet downsample(const CountSet& set, std::size_t factor_a, std::size_t factor_b);
DistributionSet downsample(const DistributionSet& set, std::size_t factor_a,
                           std::size_t factor_b);

/// Window count shared by every axis of `party` across all blocks. Throws
/// InvalidGrid if the axes disagree.
std::size_t base_resolution(const CountSet& set, Party party);

struct SweepCell {
  std::size_t resolution_a = 0;
  std::size_t resolution_b = 0;
  WitnessResult result;
  std::optional<BootstrapReport> bootstrap;
};

struct ResolutionSweep {
  std::size_t base_resolution_a = 0;
  std::size_t base_resolution_b = 0;
  std::vector<std::size_t> targets_a;
  std::vector<std::size_t> targets_b;
  Direction direction = Direction::BGivenA;
  std::vector<SweepCell> cells;  // row-major: targets_a x targets_b

  const SweepCell& at(std::size_t ia, std::size_t ib) const {
    return cells[ia * targets_b.size() + ib];
  }
};

struct MapOptions {
  Direction direction = Direction::BGivenA;
  std::size_t n_boot = 1000;  // 0 disables the bootstrap
  std::uint64_t seed = 0;
  unsigned threads = 0;
};

/// Downsample each party independently to every (r_A, r_B) target pair and
/// evaluate the witness. Bootstrap seeds are derived from (seed, r_A, r_B).
ResolutionSweep asymmetry_map(const CountSet& counts, const std::vector<std::size_t>& targets_a,
                              const std::vector<std::size_t>& targets_b,
                              const MapOptions& options, LogBase base = LogBase::bits());

struct CurvePoint {
  std::size_t resolution = 0;
  /// Geometric mean over dimensions of 1/(dx_B dk_B); equals 1/(dx dk) when
  /// all axes share their widths.
  double inverse_window_product = 0.0;
  double lhs = 0.0;
  double bound = 0.0;
  double margin = 0.0;
};

/// Conditional witness (B given A) with both parties downsampled to the
/// same resolution r.
std::vector<CurvePoint> resolution_curve(const CountSet& counts,
                                         const std::vector<std::size_t>& targets,
                                         LogBase base = LogBase::bits());

}  // namespace eprsteer
