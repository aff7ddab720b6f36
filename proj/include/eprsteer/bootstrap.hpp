#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "eprsteer/entropy.hpp"
#include "eprsteer/grid.hpp"
#include "eprsteer/witness.hpp"

namespace eprsteer {

/// Counter-based generator: the i-th output of stream `key` is a fixed
/// bijective mix of (key, i), so any replicate's stream can be reconstructed
/// from (seed, replicate index) alone. Satisfies UniformRandomBitGenerator.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t key) noexcept : key_(key) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return ~result_type{0}; }

  result_type operator()() noexcept;

  /// Independent child stream.
  CounterRng split(std::uint64_t index) const noexcept;

  std::uint64_t key() const noexcept { return key_; }
  std::uint64_t position() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

std::uint64_t mix64(std::uint64_t x) noexcept;

/// Seed for a sweep cell or replicate derived from a master seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0) noexcept;

/// Each cell independently ~ Poisson(observed count). Zero cells stay zero.
CountTensor poisson_resample(const CountTensor& counts, CounterRng& rng);

/// Draw Poisson counts with the given cell means.
CountTensor poisson_sample(const std::vector<std::size_t>& shape, const std::vector<double>& means,
                           CounterRng& rng);

struct BootstrapOptions {
  std::size_t n_boot = 1000;
  std::uint64_t seed = 0;
  bool keep_replicates = false;
  /// 0 = hardware concurrency. Results do not depend on this.
  unsigned threads = 0;
};

inline constexpr std::size_t kMinBootstrapReplicates = 100;

struct BootstrapReport {
  std::size_t n_boot = 0;
  std::uint64_t seed = 0;
  double margin_point = 0.0;  // margin of the observed counts
  double margin_mean = 0.0;
  double margin_std = 0.0;    // sample standard deviation over replicates
  /// margin_mean / margin_std; empty when every replicate gave the same margin.
  std::optional<double> significance;
  std::size_t rejected_replicates = 0;  // zero-total draws that were redrawn
  std::vector<double> replicate_margins;
};

/// Poisson bootstrap of a witness margin. Never throws on a degenerate
/// spread; the significance is left empty instead.
BootstrapReport bootstrap_witness(const CountSet& counts, Direction direction,
                                  const BootstrapOptions& options, LogBase base = LogBase::bits());

/// As bootstrap_witness, but throws DegenerateBootstrap when margin_std = 0.
BootstrapReport witness_significance(const CountSet& counts, Direction direction,
                                     const BootstrapOptions& options,
                                     LogBase base = LogBase::bits());

}  // namespace eprsteer
