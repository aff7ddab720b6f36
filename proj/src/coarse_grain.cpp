#include "eprsteer/coarse_grain.hpp"

#include <cmath>

#include "eprsteer/detail/sum.hpp"
#include "eprsteer/error.hpp"

namespace eprsteer {

namespace {

std::vector<std::size_t> factors_for(const std::vector<std::size_t>& shape, std::size_t fa,
                                     std::size_t fb) {
  const std::size_t half = shape.size() / 2;
  std::vector<std::size_t> f(shape.size());
  for (std::size_t i = 0; i < shape.size(); ++i) {
    f[i] = i < half ? fa : fb;
    if (f[i] == 0 || shape[i] % f[i] != 0) {
      throw Error(ErrorCode::NonDivisibleFactor,
                  "factor " + std::to_string(f[i]) + " does not divide axis " + std::to_string(i) +
                      " with " + std::to_string(shape[i]) + " windows");
    }
  }
  return f;
}

// Maps each source cell (row-major) to its target cell.
std::vector<std::size_t> target_index(const std::vector<std::size_t>& shape,
                                      const std::vector<std::size_t>& factors,
                                      std::vector<std::size_t>& out_shape) {
  out_shape.resize(shape.size());
  std::size_t n = 1;
  for (std::size_t i = 0; i < shape.size(); ++i) {
    out_shape[i] = shape[i] / factors[i];
    n *= shape[i];
  }
  std::vector<std::size_t> idx(shape.size(), 0);
  std::vector<std::size_t> map(n);
  for (std::size_t flat = 0; flat < n; ++flat) {
    std::size_t t = 0;
    for (std::size_t i = 0; i < shape.size(); ++i) t = t * out_shape[i] + idx[i] / factors[i];
    map[flat] = t;
    for (std::size_t i = shape.size(); i-- > 0;) {
      if (++idx[i] < shape[i]) break;
      idx[i] = 0;
    }
  }
  return map;
}

}  // namespace

CountTensor downsample(const CountTensor& counts, std::size_t factor_a, std::size_t factor_b) {
  const auto factors = factors_for(counts.shape(), factor_a, factor_b);
  std::vector<std::size_t> out_shape;
  const auto map = target_index(counts.shape(), factors, out_shape);
  std::size_t n_out = 1;
  for (auto s : out_shape) n_out *= s;
  std::vector<std::uint64_t> acc(n_out, 0);
  for (std::size_t i = 0; i < map.size(); ++i) acc[map[i]] += counts[i];
  return CountTensor(std::move(out_shape), std::move(acc));
}

JointDistribution downsample(const JointDistribution& dist, std::size_t factor_a,
                             std::size_t factor_b) {
  const auto shape = dist.grid().shape();
  const auto factors = factors_for(shape, factor_a, factor_b);
  std::vector<std::size_t> out_shape;
  const auto map = target_index(shape, factors, out_shape);
  std::size_t n_out = 1;
  for (auto s : out_shape) n_out *= s;
  std::vector<detail::CompensatedSum> acc(n_out);
  const auto p = dist.probs();
  for (std::size_t i = 0; i < map.size(); ++i) acc[map[i]].add(p[i]);
  std::vector<double> probs(n_out);
  for (std::size_t i = 0; i < n_out; ++i) probs[i] = acc[i].value();
  return JointDistribution(dist.grid().coarsened(factor_a, factor_b), std::move(probs));
}

CountBlock downsample(const CountBlock& block, std::size_t factor_a, std::size_t factor_b) {
  if (block.counts.shape() != block.grid.shape()) {
    throw Error(ErrorCode::ShapeMismatch, "count tensor shape does not match its grid");
  }
  return {block.grid.coarsened(factor_a, factor_b),
          downsample(block.counts, factor_a, factor_b)};
}

CountSet downsample(const CountSet& set, std::size_t factor_a, std::size_t factor_b) {
  CountSet out;
  for (const auto& b : set.position) out.position.push_back(downsample(b, factor_a, factor_b));
  for (const auto& b : set.momentum) out.momentum.push_back(downsample(b, factor_a, factor_b));
  return out;
}

DistributionSet downsample(const DistributionSet& set, std::size_t factor_a,
                           std::size_t factor_b) {
  DistributionSet out;
  for (const auto& d : set.position) out.position.push_back(downsample(d, factor_a, factor_b));
  for (const auto& d : set.momentum) out.momentum.push_back(downsample(d, factor_a, factor_b));
  return out;
}

std::size_t base_resolution(const CountSet& set, Party party) {
  std::size_t n = 0;
  for (const auto* blocks : {&set.position, &set.momentum}) {
    for (const auto& b : *blocks) {
      for (const auto& ax : b.grid.axes(party)) {
        if (n == 0) n = ax.n_windows();
        if (ax.n_windows() != n) {
          throw Error(ErrorCode::InvalidGrid,
                      "party " + std::string(to_string(party)) +
                          " axes have different window counts; sweeps need a common resolution");
        }
      }
    }
  }
  if (n == 0) throw Error(ErrorCode::DimensionMismatch, "empty count set");
  return n;
}

namespace {

std::size_t factor_for(std::size_t base, std::size_t target) {
  if (target == 0 || base % target != 0) {
    throw Error(ErrorCode::NonDivisibleFactor, "target resolution " + std::to_string(target) +
                                                   " does not divide " + std::to_string(base));
  }
  return base / target;
}

}  // namespace

ResolutionSweep asymmetry_map(const CountSet& counts, const std::vector<std::size_t>& targets_a,
                              const std::vector<std::size_t>& targets_b,
                              const MapOptions& options, LogBase base) {
  check_compatible(counts);
  ResolutionSweep sweep;
  sweep.base_resolution_a = base_resolution(counts, Party::A);
  sweep.base_resolution_b = base_resolution(counts, Party::B);
  sweep.targets_a = targets_a;
  sweep.targets_b = targets_b;
  sweep.direction = options.direction;
  // Validate every target before doing any work.
  for (auto r : targets_a) factor_for(sweep.base_resolution_a, r);
  for (auto r : targets_b) factor_for(sweep.base_resolution_b, r);

  for (auto ra : targets_a) {
    for (auto rb : targets_b) {
      const auto coarse = downsample(counts, factor_for(sweep.base_resolution_a, ra),
                                     factor_for(sweep.base_resolution_b, rb));
      SweepCell cell;
      cell.resolution_a = ra;
      cell.resolution_b = rb;
      cell.result = evaluate_witness(normalize(coarse), options.direction, base);
      if (options.n_boot > 0) {
        BootstrapOptions bo;
        bo.n_boot = options.n_boot;
        bo.seed = derive_seed(options.seed, ra, rb);
        bo.threads = options.threads;
        cell.bootstrap = bootstrap_witness(coarse, options.direction, bo, base);
        cell.result.significance_sigma = cell.bootstrap->significance;
      }
      sweep.cells.push_back(std::move(cell));
    }
  }
  return sweep;
}

std::vector<CurvePoint> resolution_curve(const CountSet& counts,
                                         const std::vector<std::size_t>& targets, LogBase base) {
  check_compatible(counts);
  const std::size_t na = base_resolution(counts, Party::A);
  const std::size_t nb = base_resolution(counts, Party::B);
  std::vector<CurvePoint> out;
  for (auto r : targets) {
    const auto coarse = normalize(downsample(counts, factor_for(na, r), factor_for(nb, r)));
    const auto w = conditional_witness(coarse, Direction::BGivenA, base);
    double log_inv = 0.0;
    std::size_t n = 0;
    for (std::size_t blk = 0; blk < coarse.position.size(); ++blk) {
      const auto& xs = coarse.position[blk].grid().axes_b();
      const auto& ks = coarse.momentum[blk].grid().axes_b();
      for (std::size_t i = 0; i < xs.size(); ++i, ++n) {
        log_inv -= std::log(xs[i].window_width() * ks[i].window_width());
      }
    }
    out.push_back({r, std::exp(log_inv / static_cast<double>(n)), w.lhs.value, w.bound,
                   w.margin});
  }
  return out;
}

}  // namespace eprsteer
