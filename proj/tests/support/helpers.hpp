#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "eprsteer/grid.hpp"
#include "eprsteer/spdc.hpp"

namespace eprsteer::testing {

inline GridSpec grid_1d(std::size_t rows, std::size_t cols, double width_a = 1.0,
                        double width_b = 1.0, Observable obs = Observable::Position) {
  return GridSpec(obs, {AxisGrid(rows, width_a)}, {AxisGrid(cols, width_b)});
}

inline JointDistribution make_dist(std::size_t rows, std::size_t cols, std::vector<double> probs,
                                   Observable obs = Observable::Position) {
  return JointDistribution(grid_1d(rows, cols, 1.0, 1.0, obs), std::move(probs));
}

inline JointDistribution diagonal(std::size_t n, const GridSpec& grid) {
  std::vector<double> p(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) p[i * n + i] = 1.0 / static_cast<double>(n);
  return JointDistribution(grid, std::move(p));
}

inline JointDistribution uniform(const GridSpec& grid) {
  const auto cells = grid.total_cells();
  return JointDistribution(grid, std::vector<double>(cells, 1.0 / static_cast<double>(cells)));
}

inline JointDistribution product(const std::vector<double>& p, const std::vector<double>& q,
                                 const GridSpec& grid) {
  std::vector<double> out;
  out.reserve(p.size() * q.size());
  for (double a : p)
    for (double b : q) out.push_back(a * b);
  return JointDistribution(grid, std::move(out));
}

/// Random probability vector with some exact zeros and a wide dynamic range.
inline std::vector<double> random_probs(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> w(n);
  double total = 0.0;
  for (auto& x : w) {
    const double r = u(rng);
    x = r < 0.1 ? 0.0 : std::pow(u(rng), 3.0);
    total += x;
  }
  if (total == 0.0) {
    w[0] = 1.0;
    total = 1.0;
  }
  for (auto& x : w) x /= total;
  return w;
}

inline JointDistribution random_dist(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  return make_dist(rows, cols, random_probs(rows * cols, rng));
}

/// Random shape with both sides in [lo, hi].
inline JointDistribution random_dist(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  std::uniform_int_distribution<std::size_t> s(lo, hi);
  const auto r = s(rng);
  const auto c = s(rng);
  return random_dist(r, c, rng);
}

/// Random distribution whose sides are even, for downsampling by 2.
inline JointDistribution random_even_dist(std::mt19937_64& rng, std::size_t lo_half,
                                          std::size_t hi_half) {
  std::uniform_int_distribution<std::size_t> s(lo_half, hi_half);
  const auto r = 2 * s(rng);
  const auto c = 2 * s(rng);
  return random_dist(r, c, rng);
}

inline CountBlock block_1d(Observable obs, std::size_t n, double extent,
                           std::vector<std::uint64_t> counts) {
  GridSpec g(obs, {AxisGrid::centered(n, extent)}, {AxisGrid::centered(n, extent)});
  return CountBlock{g, CountTensor({n, n}, std::move(counts))};
}

/// One-axis synthetic state on the reference viewing area.
inline SyntheticSetup one_axis_setup(ModeWidths w, std::size_t resolution,
                                     double max_tail = kDefaultMaxTail) {
  SyntheticSetup s;
  s.params.axes = {w};
  s.resolution_a = s.resolution_b = resolution;
  s.extent_position = {kReferenceExtentPosition};
  s.extent_momentum = {kReferenceExtentMomentum};
  s.mode = AnalysisMode::IndependentAxes;
  s.max_tail = max_tail;
  return s;
}

}  // namespace eprsteer::testing
