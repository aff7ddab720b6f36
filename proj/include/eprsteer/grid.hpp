#pragma once

// Discretized measurement grids, raw coincidence counts and normalized joint
// distributions.
//
// Cell ordering is row-major with all party-A axes first, then all party-B
// axes. For a grid with A axes (a1, a2) and B axes (b1, b2) the flat index of
// cell (i1, i2, j1, j2) is ((i1 * a2 + i2) * b1 + j1) * b2 + j2. Flattening the
// A axes and B axes separately gives a (cells_A x cells_B) matrix view, which
// is what the entropy routines operate on.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace eprsteer {

enum class Observable { Position, Momentum };
enum class Party { A, B };

std::string_view to_string(Observable obs);
std::string_view to_string(Party party);
// "m" for position axes, "1/m" for momentum axes.
std::string_view unit_of(Observable obs);
Party other(Party party);

/// One spatial axis of a detector: N equal windows of width Δ starting at
/// `origin` (the lower edge of window 0).
class AxisGrid {
 public:
  AxisGrid(std::size_t n_windows, double window_width, double origin = 0.0);

  /// Grid of `n_windows` windows spanning [-extent/2, extent/2].
  static AxisGrid centered(std::size_t n_windows, double extent);

  std::size_t n_windows() const noexcept { return n_windows_; }
  double window_width() const noexcept { return window_width_; }
  double origin() const noexcept { return origin_; }
  double extent() const noexcept { return static_cast<double>(n_windows_) * window_width_; }
  double lower_edge(std::size_t window) const noexcept {
    return origin_ + static_cast<double>(window) * window_width_;
  }
  double center(std::size_t window) const noexcept {
    return origin_ + (static_cast<double>(window) + 0.5) * window_width_;
  }

  /// Merge blocks of `factor` adjacent windows; `factor` must divide N.
  AxisGrid coarsened(std::size_t factor) const;

  friend bool operator==(const AxisGrid&, const AxisGrid&) = default;

 private:
  std::size_t n_windows_;
  double window_width_;
  double origin_;
};

/// Per-party window structure for one observable. Supports n = 1 or 2
/// spatial dimensions.
class GridSpec {
 public:
  GridSpec(Observable observable, std::vector<AxisGrid> axes_a, std::vector<AxisGrid> axes_b);

  Observable observable() const noexcept { return observable_; }
  std::size_t dimensions() const noexcept { return axes_a_.size(); }
  const std::vector<AxisGrid>& axes(Party party) const noexcept {
    return party == Party::A ? axes_a_ : axes_b_;
  }
  const std::vector<AxisGrid>& axes_a() const noexcept { return axes_a_; }
  const std::vector<AxisGrid>& axes_b() const noexcept { return axes_b_; }

  /// Window counts, A axes then B axes.
  std::vector<std::size_t> shape() const;
  std::size_t cells(Party party) const;
  std::size_t total_cells() const { return cells(Party::A) * cells(Party::B); }

  /// Coarsen every A axis by factor_a and every B axis by factor_b.
  GridSpec coarsened(std::size_t factor_a, std::size_t factor_b) const;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;

 private:
  Observable observable_;
  std::vector<AxisGrid> axes_a_;
  std::vector<AxisGrid> axes_b_;
};

/// Raw coincidence counts, laid out like a JointDistribution.
class CountTensor {
 public:
  CountTensor(std::vector<std::size_t> shape, std::vector<std::uint64_t> counts);

  static CountTensor zeros(std::vector<std::size_t> shape);

  const std::vector<std::size_t>& shape() const noexcept { return shape_; }
  std::span<const std::uint64_t> counts() const noexcept { return counts_; }
  std::uint64_t total() const noexcept { return total_; }
  std::size_t size() const noexcept { return counts_.size(); }
  std::uint64_t operator[](std::size_t i) const { return counts_[i]; }

  /// Shape split: first half are party-A axes.
  std::size_t cells(Party party) const;

  friend bool operator==(const CountTensor&, const CountTensor&) = default;

 private:
  std::vector<std::size_t> shape_;
  std::vector<std::uint64_t> counts_;
  std::uint64_t total_ = 0;
};

/// Probability tensor over (party-A windows) x (party-B windows) for one
/// observable. Construction only checks the shape; use validate() for the
/// probabilistic invariants.
class JointDistribution {
 public:
  JointDistribution(GridSpec grid, std::vector<double> probs);

  const GridSpec& grid() const noexcept { return grid_; }
  std::span<const double> probs() const noexcept { return probs_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double at(std::size_t row, std::size_t col) const { return probs_[row * cols_ + col]; }

  /// Same probabilities with the party roles exchanged (A axes become B axes).
  JointDistribution swapped() const;

 private:
  GridSpec grid_;
  std::vector<double> probs_;
  std::size_t rows_;
  std::size_t cols_;
};

inline constexpr double kNormalizationTolerance = 1e-12;

struct Violation {
  enum class Kind { Normalization, Negativity, NonFinite };
  Kind kind;
  std::optional<std::size_t> index;  // offending cell, when applicable
  double value;                      // deficit (1 - sum) or the offending cell value
  std::string message;
};

std::vector<Violation> validate(const JointDistribution& dist,
                                double tolerance = kNormalizationTolerance);

/// Throws NegativeProbability / NotNormalized on the first violation.
void require_valid(const JointDistribution& dist, double tolerance = kNormalizationTolerance);

JointDistribution normalize_counts(const CountTensor& counts, const GridSpec& grid);

/// Marginal over one party's windows (flattened row-major over its axes).
std::vector<double> marginalize(const JointDistribution& dist, Party party);
std::vector<std::uint64_t> marginalize(const CountTensor& counts, Party party);

/// Counts plus the grid they were recorded on.
struct CountBlock {
  GridSpec grid;
  CountTensor counts;
};

enum class AnalysisMode { FullJoint, IndependentAxes };
std::string_view to_string(AnalysisMode mode);

/// Position and momentum data for one experiment. Each list holds either a
/// single full-joint block covering all n dimensions, or one block per
/// statistically independent axis.
struct CountSet {
  std::vector<CountBlock> position;
  std::vector<CountBlock> momentum;
};

struct DistributionSet {
  std::vector<JointDistribution> position;
  std::vector<JointDistribution> momentum;

  AnalysisMode mode() const noexcept {
    return position.size() > 1 ? AnalysisMode::IndependentAxes : AnalysisMode::FullJoint;
  }
};

DistributionSet normalize(const CountSet& counts);

/// Throws DimensionMismatch unless position and momentum blocks pair up with
/// equal dimensions and the expected observables.
void check_compatible(const DistributionSet& set);
void check_compatible(const CountSet& set);

/// Total number of spatial dimensions n covered by a set of blocks.
std::size_t dimensions(const DistributionSet& set);

}  // namespace eprsteer
