#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "eprsteer/coarse_grain.hpp"
#include "eprsteer/error.hpp"
#include "eprsteer/runner.hpp"

namespace eprsteer {

namespace {

JointDistribution random_distribution(std::mt19937_64& rng, std::size_t rows, std::size_t cols) {
  std::exponential_distribution<double> weight(1.0);
  std::bernoulli_distribution empty(0.2);
  std::vector<double> p(rows * cols);
  double sum = 0.0;
  for (auto& x : p) {
    x = empty(rng) ? 0.0 : weight(rng);
    sum += x;
  }
  if (sum == 0.0) {
    p[0] = 1.0;
    sum = 1.0;
  }
  for (auto& x : p) x /= sum;
  GridSpec grid(Observable::Position, {AxisGrid(rows, 1.0)}, {AxisGrid(cols, 1.0)});
  return JointDistribution(grid, std::move(p));
}

template <typename F>
SelftestCase guarded(std::string name, F&& body) {
  SelftestCase c{std::move(name), false, {}};
  try {
    std::ostringstream detail;
    c.passed = body(detail);
    c.detail = detail.str();
  } catch (const std::exception& e) {
    c.passed = false;
    c.detail = e.what();
  }
  return c;
}

}  // namespace

std::vector<SelftestCase> run_selftest() {
  std::vector<SelftestCase> cases;

  cases.push_back(guarded("entropy identities", [](std::ostringstream& os) {
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<std::size_t> size(2, 16);
    double worst = 0.0;
    for (int t = 0; t < 200; ++t) {
      const auto d = random_distribution(rng, size(rng), size(rng));
      const double hab = joint_entropy(d).value;
      const double ha = entropy(marginalize(d, Party::A)).value;
      const double hb = entropy(marginalize(d, Party::B)).value;
      const double hb_a = conditional_entropy(d, Party::A).value;
      const double ha_b = conditional_entropy(d, Party::B).value;
      const double mi = mutual_information(d).value;
      worst = std::max({worst, std::abs(hab - ha - hb_a), std::abs(hab - hb - ha_b),
                        std::abs((hb_a - ha_b) - (hb - ha)), std::max(0.0, -mi),
                        std::max(0.0, hb_a - hb)});
    }
    os << "worst deviation " << worst;
    return worst <= 1e-12;
  }));

  cases.push_back(guarded("continuous/discrete connection", [](std::ostringstream& os) {
    const auto pdf = [](double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); };
    const auto r = connection_check(pdf, AxisGrid(32, 0.5, -8.0));
    os << "residual " << r.residual;
    return r.residual < 1e-6;
  }));

  cases.push_back(guarded("discrete bound on continuous entropy", [](std::ostringstream& os) {
    double worst = 1e300;
    for (double ratio : {1.0, 10.0, 100.0}) {
      const DoubleGaussian g(1.0, 1.0 / ratio);
      const double extent = 15.0 * g.marginal_sd();
      for (std::size_t n : {4u, 24u}) {
        const GridSpec grid(Observable::Position, {AxisGrid::centered(n, extent)},
                            {AxisGrid::centered(n, extent)});
        worst = std::min(worst, discrete_bound_gap(g, grid));
      }
    }
    os << "smallest gap " << worst;
    return worst >= -1e-6;
  }));

  cases.push_back(guarded("resolution cutoff", [](std::ostringstream& os) {
    const auto n = min_resolution(kReferenceExtentPosition, kReferenceExtentMomentum);
    os << "min_resolution " << n;
    return n == 4;
  }));

  cases.push_back(guarded("data processing", [](std::ostringstream& os) {
    std::mt19937_64 rng(2);
    double worst = -1e300;
    for (int t = 0; t < 100; ++t) {
      const auto d = random_distribution(rng, 8, 8);
      worst = std::max(worst, mutual_information(downsample(d, 2, 2)).value -
                                  mutual_information(d).value);
    }
    os << "largest increase " << worst;
    return worst <= 1e-12;
  }));

  cases.push_back(guarded("bootstrap determinism", [](std::ostringstream& os) {
    auto setup = default_synthetic_setup();
    setup.resolution_a = setup.resolution_b = 8;
    const auto counts = synthesize_counts(synthesize(setup).distributions, 1e5, 7);
    BootstrapOptions bo;
    bo.n_boot = 100;
    bo.seed = 11;
    const auto a = bootstrap_witness(counts, Direction::BGivenA, bo);
    bo.threads = 1;
    const auto b = bootstrap_witness(counts, Direction::BGivenA, bo);
    os << "mean " << a.margin_mean << " std " << a.margin_std;
    return a.margin_mean == b.margin_mean && a.margin_std == b.margin_std;
  }));

  cases.push_back(guarded("base invariance", [](std::ostringstream& os) {
    const auto state = synthesize(default_synthetic_setup()).distributions;
    int mismatches = 0;
    for (std::size_t f : {1u, 3u, 8u}) {
      const auto d = downsample(state, f, f);
      for (auto dir : {Direction::BGivenA, Direction::AGivenB, Direction::Symmetric}) {
        const bool bits = evaluate_witness(d, dir, LogBase::bits()).margin > 0;
        const bool nats = evaluate_witness(d, dir, LogBase::nats()).margin > 0;
        const bool dits = evaluate_witness(d, dir, LogBase::dits()).margin > 0;
        mismatches += (bits != nats) + (bits != dits);
      }
    }
    os << mismatches << " sign mismatches";
    return mismatches == 0;
  }));

  cases.push_back(guarded("separable state is never witnessed", [](std::ostringstream& os) {
    auto setup = default_synthetic_setup();
    setup.params.axes = {{1.0e-4, 1.0e-4}};
    setup.extent_position = {kReferenceExtentPosition};
    setup.extent_momentum = {kReferenceExtentMomentum};
    setup.max_tail = kDefaultMaxTail;
    const auto state = synthesize(setup).distributions;
    double worst = -1e300;
    for (std::size_t f : {1u, 2u, 3u, 4u, 6u, 8u, 12u, 24u}) {
      const auto d = downsample(state, f, f);
      worst = std::max({worst, conditional_witness(d, Direction::BGivenA).margin,
                        symmetric_witness(d).margin});
    }
    os << "largest margin " << worst;
    return worst < 0.0;
  }));

  return cases;
}

}  // namespace eprsteer
