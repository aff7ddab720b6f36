#pragma once

// Discrete entropic EPR-steering witnesses.
//
// Conditional witness (steered party B, steering party A):
//   lhs   = sum over blocks of H(X_B|X_A) + H(K_B|K_A)
//   bound = sum over dimensions i of log(pi e / (dx_Bi dk_Bi))
//   margin = bound - lhs
// Symmetric witness:
//   lhs   = sum over blocks of I(X_A;X_B) + I(K_A;K_B)
//   bound = max over parties of log(prod_i Lx_i Lk_i / (pi e)^n)
//   margin = lhs - bound
// For both, a positive margin means EPR steering is witnessed.

#include <optional>
#include <string_view>
#include <vector>

#include "eprsteer/entropy.hpp"
#include "eprsteer/grid.hpp"

namespace eprsteer {

enum class Direction { BGivenA, AGivenB, Symmetric };

std::string_view to_string(Direction d);
/// Accepts "ba", "ab", "sym" and the long names used in reports.
Direction parse_direction(std::string_view text);

/// pi * e at full double precision.
double pi_e();

struct WitnessResult {
  Direction direction = Direction::BGivenA;
  AnalysisMode mode = AnalysisMode::FullJoint;
  EntropyValue lhs;
  double bound = 0.0;
  double margin = 0.0;
  /// Conditional witness: log(pi e / (dx_i dk_i)) per dimension of the
  /// steered party. Symmetric witness: the per-party bounds (A then B).
  std::vector<double> component_bounds;
  std::optional<double> significance_sigma;

  bool witnessed() const noexcept { return margin > 0.0; }
};

/// log_base(pi e / (dx * dk)). Throws NonpositiveWindow.
double per_dim_bound(double dx, double dk, LogBase base = LogBase::bits());

WitnessResult conditional_witness(const DistributionSet& data, Direction direction,
                                  LogBase base = LogBase::bits());

WitnessResult symmetric_witness(const DistributionSet& data, LogBase base = LogBase::bits());

/// Dispatch on direction.
WitnessResult evaluate_witness(const DistributionSet& data, Direction direction,
                               LogBase base = LogBase::bits());

/// Smallest per-axis window count N with (Lx/N)(Lk/N) < pi e. Below it the
/// conditional inequality cannot be violated for that axis.
std::size_t min_resolution(double extent_position, double extent_momentum);

}  // namespace eprsteer
