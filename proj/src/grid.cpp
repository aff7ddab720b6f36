#include "eprsteer/grid.hpp"

#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

#include "eprsteer/detail/sum.hpp"
#include "eprsteer/error.hpp"

namespace eprsteer {

std::string_view to_string(Observable obs) {
  return obs == Observable::Position ? "position" : "momentum";
}

std::string_view to_string(Party party) { return party == Party::A ? "A" : "B"; }

std::string_view unit_of(Observable obs) { return obs == Observable::Position ? "m" : "1/m"; }

Party other(Party party) { return party == Party::A ? Party::B : Party::A; }

std::string_view to_string(AnalysisMode mode) {
  return mode == AnalysisMode::FullJoint ? "full-joint" : "independent-axes";
}

// ---------------------------------------------------------------------------
// AxisGrid

AxisGrid::AxisGrid(std::size_t n_windows, double window_width, double origin)
    : n_windows_(n_windows), window_width_(window_width), origin_(origin) {
  if (n_windows == 0) throw Error(ErrorCode::InvalidGrid, "axis needs at least one window");
  if (!(window_width > 0.0) || !std::isfinite(window_width)) {
    throw Error(ErrorCode::NonpositiveWindow,
                "window width must be positive, got " + std::to_string(window_width));
  }
  if (!std::isfinite(origin)) throw Error(ErrorCode::InvalidGrid, "axis origin is not finite");
}

AxisGrid AxisGrid::centered(std::size_t n_windows, double extent) {
  if (!(extent > 0.0) || !std::isfinite(extent)) {
    throw Error(ErrorCode::NonpositiveExtent,
                "axis extent must be positive, got " + std::to_string(extent));
  }
  if (n_windows == 0) throw Error(ErrorCode::InvalidGrid, "axis needs at least one window");
  return AxisGrid(n_windows, extent / static_cast<double>(n_windows), -0.5 * extent);
}

AxisGrid AxisGrid::coarsened(std::size_t factor) const {
  if (factor == 0 || n_windows_ % factor != 0) {
    throw Error(ErrorCode::NonDivisibleFactor, "factor " + std::to_string(factor) +
                                                   " does not divide " +
                                                   std::to_string(n_windows_) + " windows");
  }
  return AxisGrid(n_windows_ / factor, window_width_ * static_cast<double>(factor), origin_);
}

// ---------------------------------------------------------------------------
// GridSpec

GridSpec::GridSpec(Observable observable, std::vector<AxisGrid> axes_a,
                   std::vector<AxisGrid> axes_b)
    : observable_(observable), axes_a_(std::move(axes_a)), axes_b_(std::move(axes_b)) {
  if (axes_a_.size() != axes_b_.size()) {
    throw Error(ErrorCode::DimensionMismatch, "party A has " + std::to_string(axes_a_.size()) +
                                                  " axes, party B has " +
                                                  std::to_string(axes_b_.size()));
  }
  if (axes_a_.empty() || axes_a_.size() > 2) {
    throw Error(ErrorCode::InvalidGrid, "supported dimensions are 1 and 2, got " +
                                            std::to_string(axes_a_.size()));
  }
}

std::vector<std::size_t> GridSpec::shape() const {
  std::vector<std::size_t> s;
  for (const auto& ax : axes_a_) s.push_back(ax.n_windows());
  for (const auto& ax : axes_b_) s.push_back(ax.n_windows());
  return s;
}

std::size_t GridSpec::cells(Party party) const {
  std::size_t n = 1;
  for (const auto& ax : axes(party)) n *= ax.n_windows();
  return n;
}

GridSpec GridSpec::coarsened(std::size_t factor_a, std::size_t factor_b) const {
  std::vector<AxisGrid> a, b;
  for (const auto& ax : axes_a_) a.push_back(ax.coarsened(factor_a));
  for (const auto& ax : axes_b_) b.push_back(ax.coarsened(factor_b));
  return GridSpec(observable_, std::move(a), std::move(b));
}

// ---------------------------------------------------------------------------
// CountTensor

namespace {

std::size_t shape_product(const std::vector<std::size_t>& shape) {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
}

std::string shape_string(const std::vector<std::size_t>& shape) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < shape.size(); ++i) os << (i ? "," : "") << shape[i];
  os << ']';
  return os.str();
}

}  // namespace

CountTensor::CountTensor(std::vector<std::size_t> shape, std::vector<std::uint64_t> counts)
    : shape_(std::move(shape)), counts_(std::move(counts)) {
  if (shape_.empty() || shape_.size() % 2 != 0) {
    throw Error(ErrorCode::ShapeMismatch,
                "count tensor shape must have 2n entries, got " + shape_string(shape_));
  }
  for (auto s : shape_) {
    if (s == 0) throw Error(ErrorCode::ShapeMismatch, "zero-length axis in " + shape_string(shape_));
  }
  if (shape_product(shape_) != counts_.size()) {
    throw Error(ErrorCode::ShapeMismatch, "shape " + shape_string(shape_) + " needs " +
                                              std::to_string(shape_product(shape_)) +
                                              " cells, got " + std::to_string(counts_.size()));
  }
  for (auto c : counts_) total_ += c;
}

CountTensor CountTensor::zeros(std::vector<std::size_t> shape) {
  const auto n = shape.empty() ? 0 : shape_product(shape);
  return CountTensor(std::move(shape), std::vector<std::uint64_t>(n, 0));
}

std::size_t CountTensor::cells(Party party) const {
  const std::size_t half = shape_.size() / 2;
  std::size_t n = 1;
  for (std::size_t i = 0; i < half; ++i) n *= shape_[party == Party::A ? i : half + i];
  return n;
}

// ---------------------------------------------------------------------------
// JointDistribution

JointDistribution::JointDistribution(GridSpec grid, std::vector<double> probs)
    : grid_(std::move(grid)), probs_(std::move(probs)) {
  rows_ = grid_.cells(Party::A);
  cols_ = grid_.cells(Party::B);
  if (probs_.size() != rows_ * cols_) {
    throw Error(ErrorCode::ShapeMismatch, "grid " + shape_string(grid_.shape()) + " needs " +
                                              std::to_string(rows_ * cols_) + " cells, got " +
                                              std::to_string(probs_.size()));
  }
}

JointDistribution JointDistribution::swapped() const {
  std::vector<double> t(probs_.size());
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) t[c * rows_ + r] = probs_[r * cols_ + c];
  }
  return JointDistribution(GridSpec(grid_.observable(), grid_.axes_b(), grid_.axes_a()),
                           std::move(t));
}

std::vector<Violation> validate(const JointDistribution& dist, double tolerance) {
  std::vector<Violation> report;
  const auto p = dist.probs();
  bool finite = true;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!std::isfinite(p[i])) {
      finite = false;
      report.push_back({Violation::Kind::NonFinite, i, p[i],
                        "cell " + std::to_string(i) + " is not finite"});
    } else if (p[i] < 0.0) {
      report.push_back({Violation::Kind::Negativity, i, p[i],
                        "cell " + std::to_string(i) + " is negative: " + std::to_string(p[i])});
    }
  }
  if (finite) {
    const double sum = detail::accurate_sum(p);
    if (std::abs(sum - 1.0) > tolerance) {
      report.push_back({Violation::Kind::Normalization, std::nullopt, 1.0 - sum,
                        "probabilities sum to " + std::to_string(sum) + " (deficit " +
                            std::to_string(1.0 - sum) + ")"});
    }
  }
  return report;
}

void require_valid(const JointDistribution& dist, double tolerance) {
  const auto report = validate(dist, tolerance);
  if (report.empty()) return;
  const auto& v = report.front();
  throw Error(v.kind == Violation::Kind::Normalization ? ErrorCode::NotNormalized
                                                       : ErrorCode::NegativeProbability,
              v.message);
}

JointDistribution normalize_counts(const CountTensor& counts, const GridSpec& grid) {
  if (counts.shape() != grid.shape()) {
    throw Error(ErrorCode::ShapeMismatch, "counts " + shape_string(counts.shape()) +
                                              " vs grid " + shape_string(grid.shape()));
  }
  if (counts.total() == 0) throw Error(ErrorCode::ZeroTotal, "count tensor has zero total");
  const double total = static_cast<double>(counts.total());
  std::vector<double> probs(counts.size());
  for (std::size_t i = 0; i < probs.size(); ++i) {
    probs[i] = static_cast<double>(counts[i]) / total;
  }
  return JointDistribution(grid, std::move(probs));
}

std::vector<double> marginalize(const JointDistribution& dist, Party party) {
  const std::size_t rows = dist.rows(), cols = dist.cols();
  if (party == Party::A) {
    std::vector<double> m(rows);
    for (std::size_t r = 0; r < rows; ++r) {
      detail::CompensatedSum acc;
      for (std::size_t c = 0; c < cols; ++c) acc.add(dist.at(r, c));
      m[r] = acc.value();
    }
    return m;
  }
  std::vector<detail::CompensatedSum> acc(cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) acc[c].add(dist.at(r, c));
  }
  std::vector<double> m(cols);
  for (std::size_t c = 0; c < cols; ++c) m[c] = acc[c].value();
  return m;
}

std::vector<std::uint64_t> marginalize(const CountTensor& counts, Party party) {
  const std::size_t rows = counts.cells(Party::A), cols = counts.cells(Party::B);
  std::vector<std::uint64_t> m(party == Party::A ? rows : cols, 0);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      m[party == Party::A ? r : c] += counts[r * cols + c];
    }
  }
  return m;
}

DistributionSet normalize(const CountSet& counts) {
  check_compatible(counts);
  DistributionSet out;
  for (const auto& b : counts.position) out.position.push_back(normalize_counts(b.counts, b.grid));
  for (const auto& b : counts.momentum) out.momentum.push_back(normalize_counts(b.counts, b.grid));
  return out;
}

namespace {

template <typename Get>
void check_blocks(std::size_t n_pos, std::size_t n_mom, Get grid_of) {
  if (n_pos == 0 || n_pos != n_mom) {
    throw Error(ErrorCode::DimensionMismatch, "position has " + std::to_string(n_pos) +
                                                  " blocks, momentum has " +
                                                  std::to_string(n_mom));
  }
  std::size_t total_dims = 0;
  for (std::size_t i = 0; i < n_pos; ++i) {
    const GridSpec& gp = grid_of(true, i);
    const GridSpec& gm = grid_of(false, i);
    if (gp.observable() != Observable::Position || gm.observable() != Observable::Momentum) {
      throw Error(ErrorCode::DimensionMismatch,
                  "block " + std::to_string(i) + " has the wrong observable");
    }
    if (gp.dimensions() != gm.dimensions()) {
      throw Error(ErrorCode::DimensionMismatch,
                  "block " + std::to_string(i) + ": position has " +
                      std::to_string(gp.dimensions()) + " dimensions, momentum has " +
                      std::to_string(gm.dimensions()));
    }
    total_dims += gp.dimensions();
  }
  if (total_dims > 2) {
    throw Error(ErrorCode::DimensionMismatch,
                "at most 2 spatial dimensions supported, got " + std::to_string(total_dims));
  }
}

}  // namespace

void check_compatible(const DistributionSet& set) {
  check_blocks(set.position.size(), set.momentum.size(), [&](bool pos, std::size_t i) -> const GridSpec& {
    return pos ? set.position[i].grid() : set.momentum[i].grid();
  });
}

void check_compatible(const CountSet& set) {
  check_blocks(set.position.size(), set.momentum.size(), [&](bool pos, std::size_t i) -> const GridSpec& {
    return pos ? set.position[i].grid : set.momentum[i].grid;
  });
  for (const auto* blocks : {&set.position, &set.momentum}) {
    for (const auto& b : *blocks) {
      if (b.counts.shape() != b.grid.shape()) {
        throw Error(ErrorCode::ShapeMismatch, "count tensor shape does not match its grid");
      }
    }
  }
}

std::size_t dimensions(const DistributionSet& set) {
  std::size_t n = 0;
  for (const auto& d : set.position) n += d.grid().dimensions();
  return n;
}

}  // namespace eprsteer
