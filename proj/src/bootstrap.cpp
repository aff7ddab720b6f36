#include "eprsteer/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <thread>

#include "eprsteer/detail/sum.hpp"
#include "eprsteer/error.hpp"

namespace eprsteer {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;
constexpr std::size_t kMaxRedraws = 10000;
}  // namespace

std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

CounterRng::result_type CounterRng::operator()() noexcept {
  ++counter_;
  return mix64(key_ + counter_ * kGolden);
}

CounterRng CounterRng::split(std::uint64_t index) const noexcept {
  return CounterRng(mix64(key_ ^ mix64(index + kGolden)));
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b) noexcept {
  return mix64(mix64(master ^ mix64(a + kGolden)) ^ mix64(b + 2 * kGolden));
}

namespace {

std::uint64_t draw_poisson(double mean, CounterRng& rng) {
  if (mean <= 0.0) return 0;
  std::poisson_distribution<std::uint64_t> dist(mean);
  return dist(rng);
}

}  // namespace

CountTensor poisson_resample(const CountTensor& counts, CounterRng& rng) {
  std::vector<std::uint64_t> out(counts.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = draw_poisson(static_cast<double>(counts[i]), rng);
  }
  return CountTensor(counts.shape(), std::move(out));
}

CountTensor poisson_sample(const std::vector<std::size_t>& shape, const std::vector<double>& means,
                           CounterRng& rng) {
  std::vector<std::uint64_t> out(means.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = draw_poisson(means[i], rng);
  return CountTensor(shape, std::move(out));
}

namespace {

struct Replicate {
  double margin = 0.0;
  std::size_t rejected = 0;
};

Replicate run_replicate(const CountSet& counts, Direction direction, LogBase base,
                        CounterRng rng) {
  Replicate rep;
  for (std::size_t attempt = 0; attempt < kMaxRedraws; ++attempt) {
    CountSet draw;
    bool empty = false;
    for (const auto* src : {&counts.position, &counts.momentum}) {
      auto& dst = src == &counts.position ? draw.position : draw.momentum;
      for (const auto& block : *src) {
        dst.push_back({block.grid, poisson_resample(block.counts, rng)});
        empty = empty || dst.back().counts.total() == 0;
      }
    }
    if (empty) {
      ++rep.rejected;
      continue;
    }
    rep.margin = evaluate_witness(normalize(draw), direction, base).margin;
    return rep;
  }
  throw Error(ErrorCode::ZeroTotal, "bootstrap replicate kept drawing zero-total tensors");
}

}  // namespace

BootstrapReport bootstrap_witness(const CountSet& counts, Direction direction,
                                  const BootstrapOptions& options, LogBase base) {
  if (options.n_boot < kMinBootstrapReplicates) {
    throw Error(ErrorCode::InvalidConfig, "bootstrap needs at least " +
                                              std::to_string(kMinBootstrapReplicates) +
                                              " replicates, got " + std::to_string(options.n_boot));
  }
  check_compatible(counts);

  BootstrapReport report;
  report.n_boot = options.n_boot;
  report.seed = options.seed;
  report.margin_point = evaluate_witness(normalize(counts), direction, base).margin;

  const CounterRng root(options.seed);
  std::vector<Replicate> reps(options.n_boot);
  unsigned threads = options.threads ? options.threads : std::thread::hardware_concurrency();
  threads = std::clamp<unsigned>(threads, 1, static_cast<unsigned>(options.n_boot));

  auto work = [&](unsigned worker) {
    for (std::size_t i = worker; i < reps.size(); i += threads) {
      reps[i] = run_replicate(counts, direction, base, root.split(i));
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::exception_ptr> errors(threads);
    {
      std::vector<std::jthread> pool;
      for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
          try {
            work(t);
          } catch (...) {
            errors[t] = std::current_exception();
          }
        });
      }
    }
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  detail::CompensatedSum sum;
  for (const auto& r : reps) {
    sum.add(r.margin);
    report.rejected_replicates += r.rejected;
  }
  const double n = static_cast<double>(reps.size());
  report.margin_mean = sum.value() / n;
  detail::CompensatedSum sq;
  for (const auto& r : reps) {
    const double d = r.margin - report.margin_mean;
    sq.add(d * d);
  }
  const auto [lo, hi] = std::minmax_element(reps.begin(), reps.end(),
                                            [](const Replicate& a, const Replicate& b) {
                                              return a.margin < b.margin;
                                            });
  report.margin_std = lo->margin == hi->margin ? 0.0 : std::sqrt(sq.value() / (n - 1.0));
  if (report.margin_std > 0.0) report.significance = report.margin_mean / report.margin_std;
  if (options.keep_replicates) {
    report.replicate_margins.reserve(reps.size());
    for (const auto& r : reps) report.replicate_margins.push_back(r.margin);
  }
  return report;
}

BootstrapReport witness_significance(const CountSet& counts, Direction direction,
                                     const BootstrapOptions& options, LogBase base) {
  auto report = bootstrap_witness(counts, direction, options, base);
  if (!report.significance) {
    throw Error(ErrorCode::DegenerateBootstrap,
                "all " + std::to_string(report.n_boot) + " replicates gave the same margin");
  }
  return report;
}

}  // namespace eprsteer
