// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "helpers.hpp"

#include "eprsteer/bootstrap.hpp"
#include "eprsteer/coarse_grain.hpp"
#include "eprsteer/entropy.hpp"
#include "eprsteer/io.hpp"
#include "eprsteer/runner.hpp"
#include "eprsteer/spdc.hpp"
#include "eprsteer/witness.hpp"

using namespace eprsteer;
using namespace eprsteer::testing;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool passed = false;
  std::string detail;
};

int failures = 0;

void report(const char* id, const char* title, const std::function<Outcome()>& check) {
  const auto start = Clock::now();
  Outcome out;
  try {
    out = check();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  if (!out.passed) ++failures;
  std::printf("%s %s %s: %s [%.2f s]\n", out.passed ? "PASS" : "FAIL", id, title,
              out.detail.c_str(), secs);
  std::fflush(stdout);
}

double seconds_since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

const std::vector<std::size_t> kTargets{2, 3, 4, 6, 8, 12, 24};

CountSet default_counts(std::uint64_t seed) {
  return synthesize_counts(synthesize(default_synthetic_setup()).distributions, 2e6, seed);
}

SyntheticSetup separable_setup(double s0, double s1) {
  auto s = default_synthetic_setup();
  s.params.axes = {{s0, s0}, {s1, s1}};
  s.max_tail = kDefaultMaxTail;
  return s;
}

Outcome entropy_identities() {
  const auto start = Clock::now();
  std::mt19937_64 rng(1001);
  double worst = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const auto d = random_dist(rng, 2, 64);
    const double hab = joint_entropy(d).value;
    const double ha = entropy(marginalize(d, Party::A)).value;
    const double hb = entropy(marginalize(d, Party::B)).value;
    const double hb_a = conditional_entropy(d, Party::A).value;
    const double ha_b = conditional_entropy(d, Party::B).value;
    const double mi = mutual_information(d).value;
    worst = std::max({worst, std::abs(hab - (ha + hb_a)), std::abs(hab - (hb + ha_b)),
                      std::abs((hb_a - ha_b) - (hb - ha)), std::max(0.0, -mi),
                      std::max(0.0, hb_a - hb)});
  }
  const double secs = seconds_since(start);
  std::ostringstream os;
  os << "1000 distributions 2x2..64x64, worst violation " << worst << ", " << secs << " s";
  return {worst <= 1e-12 && secs < 10.0, os.str()};
}

Outcome connection() {
  const auto start = Clock::now();
  struct Density {
    std::string name;
    std::function<double(double)> pdf;
    double half_extent;
    std::vector<double> breaks;
  };
  const auto gauss = [](double mu, double s) {
    return [mu, s](double x) {
      const double z = (x - mu) / s;
      return std::exp(-0.5 * z * z) / (s * std::sqrt(2.0 * std::numbers::pi));
    };
  };
  std::vector<Density> densities;
  for (double s : {0.3, 1.0, 3.0}) {
    densities.push_back({"gaussian(" + format_number(s) + ")", gauss(0.0, s), 8.0 * s, {0.0}});
  }
  densities.push_back(
      {"uniform", [](double x) { return std::abs(x) <= 2.0 ? 0.25 : 0.0; }, 2.0, {-2.0, 2.0}});
  const auto left = gauss(-2.0, 0.7), right = gauss(2.0, 0.5);
  densities.push_back({"bimodal",
                       [=](double x) { return 0.4 * left(x) + 0.6 * right(x); },
                       2.0 + 8.0 * 0.7,
                       {-2.0, 2.0}});
  double worst = 0.0;
  std::string worst_case;
  for (const auto& d : densities) {
    for (double delta : {0.1, 0.5, 1.0}) {
      const auto n = static_cast<std::size_t>(std::ceil(2.0 * d.half_extent / delta));
      const auto r = connection_check(d.pdf, AxisGrid::centered(n, n * delta), LogBase::bits(),
                                      d.breaks);
      if (r.residual >= worst) {
        worst = r.residual;
        worst_case = d.name + " delta " + format_number(delta);
      }
    }
  }
  const double secs = seconds_since(start);
  std::ostringstream os;
  os << "15 density/window cases, worst residual " << worst << " (" << worst_case << "), " << secs
     << " s";
  return {worst < 1e-6 && secs < 30.0, os.str()};
}

Outcome discrete_bound() {
  double worst = 1e300;
  std::string where;
  for (int i = 0; i < 50; ++i) {
    const double ratio = std::pow(100.0, i / 49.0);  // log-spaced over [1, 100]
    const DoubleGaussian g(1.0, 1.0 / ratio);
    const double extent = 15.0 * g.marginal_sd();
    for (std::size_t n : {4u, 8u, 16u, 24u}) {
      const GridSpec grid(Observable::Position, {AxisGrid::centered(n, extent)},
                          {AxisGrid::centered(n, extent)});
      const double gap = discrete_bound_gap(g, grid);
      if (gap < worst) {
        worst = gap;
        where = "ratio " + format_number(ratio) + ", N " + std::to_string(n);
      }
    }
  }
  std::ostringstream os;
  os << "200 state/grid pairs, smallest H(B|A)+log dB-h(b|a) = " << worst << " bits (" << where
     << ")";
  return {worst >= -1e-6, os.str()};
}

Outcome cutoff() {
  const auto n = min_resolution(kReferenceExtentPosition, kReferenceExtentMomentum);
  const double area3 = kReferenceExtentPosition * kReferenceExtentMomentum / 9.0;
  const double area4 = kReferenceExtentPosition * kReferenceExtentMomentum / 16.0;
  std::ostringstream os;
  os << "min_resolution = " << n << "; dx dk at 3: " << area3 << ", at 4: " << area4
     << ", pi e = " << pi_e();
  return {n == 4 && area3 >= pi_e() && area4 < pi_e(), os.str()};
}

Outcome synthetic_pattern() {
  const auto start = Clock::now();
  const auto counts = default_counts(7);
  BootstrapOptions opt;
  opt.n_boot = 1000;
  std::uint64_t total = 0;
  for (const auto& b : counts.position) total = std::max(total, b.counts.total());

  const auto at = [&](std::size_t r, Direction d, std::uint64_t seed) {
    opt.seed = seed;
    return bootstrap_witness(downsample(counts, 24 / r, 24 / r), d, opt);
  };
  const auto c24 = at(24, Direction::BGivenA, 1);
  const auto c3 = at(3, Direction::BGivenA, 2);
  const auto s8 = at(8, Direction::Symmetric, 3);
  const auto s24 = at(24, Direction::Symmetric, 4);
  const double secs = seconds_since(start);

  const auto sig = [](const BootstrapReport& r) { return r.significance.value_or(0.0); };
  const bool ok = sig(c24) > 3.0 && c3.margin_point < 0.0 && s8.margin_point < 0.0 &&
                  sig(s8) < 3.0 && s24.margin_point > 0.0 && sig(s24) > 3.0 && secs < 120.0;
  std::ostringstream os;
  os << "conditional 24x24 margin " << c24.margin_point << " bits at " << sig(c24)
     << " sigma; conditional 3x3 margin " << c3.margin_point << "; symmetric 8x8 margin "
     << s8.margin_point << " (" << sig(s8) << " sigma); symmetric 24x24 margin "
     << s24.margin_point << " at " << sig(s24) << " sigma; ~" << total
     << " counts/tensor, n_boot 1000, " << secs << " s";
  return {ok, os.str()};
}

Outcome separable_null() {
  std::mt19937_64 rng(606);
  std::uniform_real_distribution<double> width(7.2e-5, 1.45e-4);
  BootstrapOptions opt;
  opt.n_boot = 200;
  std::size_t tests = 0, positives = 0, degenerate = 0;
  double largest = -1e300;
  for (int draw = 0; draw < 100; ++draw) {
    const auto setup = separable_setup(width(rng), width(rng));
    const auto counts = synthesize_counts(synthesize(setup).distributions, 1e6,
                                          derive_seed(606, static_cast<std::uint64_t>(draw)));
    for (std::size_t r : kTargets) {
      const auto coarse = downsample(counts, 24 / r, 24 / r);
      for (Direction d : {Direction::BGivenA, Direction::Symmetric}) {
        opt.seed = derive_seed(draw, r, static_cast<std::uint64_t>(d));
        const auto rep = bootstrap_witness(coarse, d, opt);
        ++tests;
        if (!rep.significance) {
          ++degenerate;
          if (rep.margin_point > 0.0) ++positives;
          continue;
        }
        largest = std::max(largest, *rep.significance);
        if (*rep.significance > 3.0) ++positives;
      }
    }
  }
  std::ostringstream os;
  os << tests << " bootstrap tests (100 draws x 7 resolutions x 2 witnesses), " << positives
     << " above 3 sigma, largest significance " << largest << ", degenerate " << degenerate;
  return {positives == 0, os.str()};
}

Outcome data_processing() {
  std::mt19937_64 rng(707);
  double worst = -1e300;
  for (int t = 0; t < 500; ++t) {
    const auto d = random_even_dist(rng, 1, 32);
    worst = std::max(worst, mutual_information(downsample(d, 2, 2)).value -
                                mutual_information(d).value);
  }
  std::ostringstream os;
  os << "500 distributions 2x2..64x64, largest I(after) - I(before) = " << worst << " bits";
  return {worst <= 1e-12, os.str()};
}

Outcome determinism() {
  RunConfig c;
  c.synthetic = SyntheticConfig{};
  c.n_boot = 200;
  const auto a = run_map(c);
  const auto b = run_map(c);
  c.threads = 1;
  const auto serial = run_map(c);
  c.map_format = MapFormat::Long;
  c.threads = 0;
  const auto la = run_map(c);
  const auto lb = run_map(c);
  std::ostringstream os;
  os << "matrix map " << a.size() << " bytes, repeat identical: " << (a == b)
     << ", single-thread identical: " << (a == serial) << ", long format identical: " << (la == lb);
  return {a == b && a == serial && la == lb, os.str()};
}

Outcome base_invariance() {
  const std::vector<LogBase> bases{LogBase::bits(), LogBase::nats(), LogBase::dits()};
  std::vector<CountSet> suite{default_counts(9)};
  for (auto [s0, s1] : {std::pair{7.5e-5, 1.4e-4}, std::pair{1e-4, 1e-4}}) {
    suite.push_back(
        synthesize_counts(synthesize(separable_setup(s0, s1)).distributions, 1e6, 10));
  }
  {
    auto mild = default_synthetic_setup();
    mild.params.axes = {{3.2e-4, 1.2e-4}, {3.2e-4, 1.2e-4}};
    suite.push_back(synthesize_counts(synthesize(mild).distributions, 1e6, 11));
  }
  std::size_t decisions = 0, mismatches = 0, boot_mismatches = 0;
  for (const auto& counts : suite) {
    for (Direction d : {Direction::BGivenA, Direction::AGivenB, Direction::Symmetric}) {
      MapOptions opt;
      opt.direction = d;
      opt.n_boot = 0;
      std::vector<ResolutionSweep> maps;
      for (const auto& b : bases) maps.push_back(asymmetry_map(counts, kTargets, kTargets, opt, b));
      for (std::size_t i = 0; i < maps[0].cells.size(); ++i) {
        ++decisions;
        const bool sign = maps[0].cells[i].result.witnessed();
        for (std::size_t k = 1; k < maps.size(); ++k) {
          if (maps[k].cells[i].result.witnessed() != sign) ++mismatches;
        }
      }
      BootstrapOptions bo;
      bo.n_boot = 100;
      bo.seed = 5;
      std::vector<double> sig;
      for (const auto& b : bases) {
        sig.push_back(bootstrap_witness(counts, d, bo, b).significance.value_or(0.0));
      }
      for (double s : sig) {
        if ((s > 3.0) != (sig[0] > 3.0) || (s > 0.0) != (sig[0] > 0.0)) ++boot_mismatches;
      }
    }
  }
  std::ostringstream os;
  os << decisions << " margin signs over 4 states x 3 witnesses x 49 resolutions; mismatches "
     << mismatches << "; bootstrap decision mismatches " << boot_mismatches;
  return {mismatches == 0 && boot_mismatches == 0, os.str()};
}

}  // namespace

int main() {
  report("AC1", "entropy identities", entropy_identities);
  report("AC2", "continuous/discrete connection", connection);
  report("AC3", "discrete bound on continuous conditional entropy", discrete_bound);
  report("AC4", "resolution cutoff", cutoff);
  report("AC5", "synthetic violation pattern", synthetic_pattern);
  report("AC6", "separable-state null test", separable_null);
  report("AC7", "data processing under downsampling", data_processing);
  report("AC8", "map determinism", determinism);
  report("AC9", "log-base invariance of decisions", base_invariance);
  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
