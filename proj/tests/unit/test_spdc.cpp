#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "helpers.hpp"

#include "eprsteer/entropy.hpp"
#include "eprsteer/error.hpp"
#include "eprsteer/quadrature.hpp"
#include "eprsteer/spdc.hpp"
#include "eprsteer/witness.hpp"

using namespace eprsteer;
using namespace eprsteer::testing;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

double integrate_2d(const BivariateDensity& d, double lo, double hi, std::vector<double> breaks) {
  return quad::integrate([&](double a) { return d.inner_mass(a, lo, hi); }, lo, hi,
                         std::move(breaks));
}

GridSpec square_grid(std::size_t n, double extent, Observable obs = Observable::Position) {
  return GridSpec(obs, {AxisGrid::centered(n, extent)}, {AxisGrid::centered(n, extent)});
}

}  // namespace

TEST_CASE("separable double Gaussian factorizes") {
  const ModeWidths w{2e-4, 2e-4};
  const auto g = DoubleGaussian::position(w);
  CHECK(g.slope() == 0.0);
  for (double a : {-3e-4, 0.0, 1e-4})
    for (double b : {-2e-4, 5e-5, 3e-4})
      CHECK(joint_position_pdf(w, a, b) ==
            Approx(g.marginal_pdf(a) * g.marginal_pdf(b)).epsilon(1e-12));
}

TEST_CASE("joint pdfs integrate to one over a wide grid") {
  for (const ModeWidths w : {ModeWidths{3.2e-4, 3.2e-5}, ModeWidths{1e-4, 1e-4},
                             ModeWidths{1e-3, 1e-5}}) {
    const auto pos = DoubleGaussian::position(w);
    const auto mom = DoubleGaussian::momentum(w);
    for (const auto* d : {&pos, &mom}) {
      const double L = 20.0 * d->marginal_sd();
      const auto breaks = d->outer_breakpoints(-L, L, -L, L);
      CHECK(integrate_2d(*d, -L, L, breaks) == Approx(1.0).epsilon(1e-6));
      // Pointwise closed-form inner integral against direct quadrature.
      const double a = 0.7 * d->marginal_sd();
      const double direct = quad::integrate([&](double b) { return d->pdf(a, b); }, -L, L,
                                            d->inner_breakpoints(a, -L, L));
      CHECK(d->inner_mass(a, -L, L) == Approx(direct).epsilon(1e-9));
    }
  }
}

TEST_CASE("conditional variance oracle by quadrature") {
  const ModeWidths w{3.2e-4, 3.2e-5};
  const auto g = DoubleGaussian::position(w);
  const double sp2 = w.sigma_plus * w.sigma_plus, sm2 = w.sigma_minus * w.sigma_minus;
  const double expected = sp2 * sm2 / (sp2 + sm2);
  CHECK(g.conditional_sd() * g.conditional_sd() == Approx(expected).epsilon(1e-12));
  CHECK(g.marginal_sd() * g.marginal_sd() == Approx((sp2 + sm2) / 4.0).epsilon(1e-12));
  for (double a : {0.0, 2e-4, -5e-4}) {
    const double L = 12.0 * g.marginal_sd();
    const auto breaks = g.inner_breakpoints(a, -L, L);
    const double m0 = quad::integrate([&](double b) { return g.pdf(a, b); }, -L, L, breaks);
    const double m1 =
        quad::integrate([&](double b) { return b * g.pdf(a, b); }, -L, L, breaks) / m0;
    const double m2 = quad::integrate([&](double b) { return (b - m1) * (b - m1) * g.pdf(a, b); },
                                      -L, L, breaks) /
                      m0;
    CHECK(m1 == Approx(g.slope() * a).epsilon(1e-9).scale(1e-6));
    CHECK(m2 == Approx(expected).epsilon(1e-9));
  }
  const auto k = DoubleGaussian::momentum(w);
  CHECK(k.conditional_sd() * k.conditional_sd() == Approx(1.0 / (sp2 + sm2)).epsilon(1e-12));
}

TEST_CASE("position and momentum marginals obey the Fourier bound") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-5.0, -3.0);
  for (int t = 0; t < 50; ++t) {
    const ModeWidths w{std::pow(10.0, u(rng)), std::pow(10.0, u(rng))};
    const double product = DoubleGaussian::position(w).marginal_sd() *
                           DoubleGaussian::momentum(w).marginal_sd();
    CHECK(product >= 0.5 * (1.0 - 1e-12));
  }
  const ModeWidths eq{1e-4, 1e-4};
  CHECK(DoubleGaussian::position(eq).marginal_sd() * DoubleGaussian::momentum(eq).marginal_sd() ==
        Approx(0.5));
}

TEST_CASE("discretize examples") {
  const DoubleGaussian g(std::sqrt(2.0), std::sqrt(2.0));  // independent standard normals
  const auto one = discretize(g, square_grid(1, 16.0));
  CHECK(one.distribution.probs()[0] == Approx(1.0).epsilon(1e-10));
  CHECK(one.tail_mass < 1e-10);

  const auto unit = marginalize(discretize(g, square_grid(17, 17.0)).distribution, Party::A);
  CHECK(unit[8] == Approx(std::erf(0.5 / std::sqrt(2.0))).epsilon(1e-9));
  const auto one_sigma = marginalize(discretize(g, square_grid(9, 18.0)).distribution, Party::A);
  CHECK(one_sigma[4] == Approx(std::erf(1.0 / std::sqrt(2.0))).epsilon(1e-9));
  CHECK(one_sigma[4] == Approx(0.6827).epsilon(1e-4));

  const auto corr = discretize(DoubleGaussian(1.0, 0.05), square_grid(12, 8.0));
  const auto& p = corr.distribution;
  for (std::size_t l = 0; l < 12; ++l)
    for (std::size_t m = 0; m < 12; ++m)
      CHECK(p.at(l, m) == Approx(p.at(m, l)).epsilon(1e-12).scale(1e-14));
}

TEST_CASE("discretize refuses a grid that misses mass") {
  const DoubleGaussian g(1.0, 1.0);
  CHECK_THROWS_AS(discretize(g, square_grid(8, 2.0)), Error);
  const auto loose = discretize(g, square_grid(8, 2.0), 0.9);
  CHECK(loose.tail_mass > 0.1);
  double total = 0.0;
  for (double x : loose.distribution.probs()) total += x;
  CHECK(total == Approx(1.0).epsilon(1e-14));
}

TEST_CASE("product discretization over two axes") {
  const DoubleGaussian a(1.0, 0.2), b(0.5, 0.5);
  const GridSpec g2(Observable::Position, {AxisGrid::centered(6, 10.0), AxisGrid::centered(4, 6.0)},
                    {AxisGrid::centered(6, 10.0), AxisGrid::centered(4, 6.0)});
  const auto joint = discretize({&a, &b}, g2);
  const auto da = discretize(a, square_grid(6, 10.0)).distribution;
  const auto db = discretize(b, square_grid(4, 6.0)).distribution;
  // Cell (i0, i1 | j0, j1) = da(i0, j0) * db(i1, j1).
  CHECK(joint.distribution.at(2 * 4 + 1, 3 * 4 + 2) == Approx(da.at(2, 3) * db.at(1, 2)).epsilon(1e-9));
  const double h = conditional_entropy(joint.distribution, Party::A).value;
  CHECK(h == Approx(conditional_entropy(da, Party::A).value + conditional_entropy(db, Party::A).value)
                 .epsilon(1e-9));
}

TEST_CASE("analytic conditional entropy") {
  const double s = 2e-4;
  const DoubleGaussianParams sep{{{s, s}}};
  const double marginal_sd = DoubleGaussian::position({s, s}).marginal_sd();
  CHECK(analytic_conditional_entropy(sep, Observable::Position) ==
        Approx(0.5 * std::log2(2.0 * kPi * std::numbers::e * marginal_sd * marginal_sd)));
  CHECK(continuous_steering_sum(sep) == Approx(continuous_steering_bound(1)));
  CHECK(continuous_steering_bound(2) == Approx(2.0 * std::log2(pi_e())));

  double previous = -1e300;
  for (double ratio : {100.0, 30.0, 10.0, 3.0, 1.5, 1.1, 1.0}) {
    const DoubleGaussianParams p{{{s, s / ratio}}};
    const double sum = continuous_steering_sum(p);
    CHECK(sum <= std::log2(pi_e()) + 1e-12);
    CHECK(sum >= previous);
    previous = sum;
  }
  const DoubleGaussianParams strong{{{s, s / 100.0}}};
  CHECK(continuous_steering_sum(strong) < std::log2(pi_e()));
  const DoubleGaussianParams two{{{s, s / 10.0}, {s, s / 10.0}}};
  CHECK(continuous_steering_sum(two) == Approx(2.0 * continuous_steering_sum(DoubleGaussianParams{{{s, s / 10.0}}})));
}

TEST_CASE("connection check examples") {
  const auto uni = [](double x) { return (x >= -2.0 && x <= 2.0) ? 0.25 : 0.0; };
  const auto r = connection_check(uni, AxisGrid::centered(8, 4.0));
  CHECK(r.residual < 1e-12);
  CHECK(r.continuous_entropy == Approx(2.0));
  CHECK(r.discrete_entropy == Approx(3.0));
  CHECK(r.mean_window_entropy == Approx(-1.0));

  const auto gauss = [](double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * kPi); };
  CHECK(connection_check(gauss, AxisGrid::centered(32, 16.0)).residual < 1e-6);

  const auto single = connection_check(gauss, AxisGrid::centered(1, 16.0));
  CHECK(single.discrete_entropy == 0.0);
  CHECK(single.residual < 1e-12);
  CHECK(single.continuous_entropy ==
        Approx(0.5 * std::log2(2.0 * kPi * std::numbers::e)).epsilon(1e-9));

  CHECK_THROWS_AS(connection_check(gauss, AxisGrid::centered(4, 2.0)), Error);
}

TEST_CASE("discrete entropies bound the continuous conditional entropy") {
  for (double ratio : {1.0, 3.0, 10.0, 100.0}) {
    const DoubleGaussian g(1.0, 1.0 / ratio);
    const double extent = 15.0 * g.marginal_sd();
    for (std::size_t n : {4u, 8u, 16u, 24u}) {
      const auto grid = square_grid(n, extent);
      CHECK(discrete_bound_gap(g, grid) >= -1e-6);
      CHECK(conditioning_gap(g, grid) >= -1e-6);
      CHECK(discrete_bound_gap(g, grid, LogBase::nats()) ==
            Approx(discrete_bound_gap(g, grid) * std::log(2.0)).epsilon(1e-9));
    }
  }
}

TEST_CASE("expected counts") {
  const auto u = uniform(grid_1d(2, 2));
  for (double m : expected_counts(u, 400.0)) CHECK(m == 100.0);
  const auto delta = make_dist(2, 2, {0, 0, 1, 0});
  const auto e = expected_counts(delta, 123.0);
  CHECK(e == std::vector<double>{0, 0, 123, 0});
  std::mt19937_64 rng(1);
  for (int t = 0; t < 20; ++t) {
    const auto d = random_dist(rng, 2, 30);
    double total = 0.0;
    for (double m : expected_counts(d, 1e6)) total += m;
    CHECK(total == Approx(1e6).epsilon(1e-12));
  }
}

TEST_CASE("default synthetic state") {
  const auto setup = default_synthetic_setup();
  CHECK(setup.params.axes.size() == 2);
  CHECK(setup.resolution_a == 24);
  const auto state = synthesize(setup);
  CHECK(state.distributions.position.size() == 2);
  CHECK(state.distributions.mode() == AnalysisMode::IndependentAxes);
  for (double t : state.tail_mass_position) CHECK(t < setup.max_tail);
  for (double t : state.tail_mass_momentum) CHECK(t < setup.max_tail);

  const auto cond = conditional_witness(state.distributions, Direction::BGivenA);
  CHECK(cond.witnessed());
  CHECK(symmetric_witness(state.distributions).witnessed());

  auto coarse = setup;
  coarse.resolution_a = coarse.resolution_b = 3;
  CHECK_FALSE(conditional_witness(synthesize(coarse).distributions, Direction::BGivenA).witnessed());
  coarse.resolution_a = coarse.resolution_b = 8;
  CHECK_FALSE(symmetric_witness(synthesize(coarse).distributions).witnessed());

  auto joint = setup;
  joint.resolution_a = joint.resolution_b = 6;
  joint.mode = AnalysisMode::FullJoint;
  const auto js = synthesize(joint);
  CHECK(js.distributions.position.size() == 1);
  CHECK(js.distributions.position[0].grid().dimensions() == 2);
  auto indep = joint;
  indep.mode = AnalysisMode::IndependentAxes;
  const auto is = synthesize(indep);
  CHECK(conditional_witness(js.distributions, Direction::BGivenA).lhs.value ==
        Approx(conditional_witness(is.distributions, Direction::BGivenA).lhs.value).epsilon(1e-9));
}

TEST_CASE("synthetic counts are reproducible and Poisson-scaled") {
  const auto state = synthesize(one_axis_setup({3.2e-4, 3.2e-5}, 12, 5e-3));
  const auto a = synthesize_counts(state.distributions, 1e6, 42);
  const auto b = synthesize_counts(state.distributions, 1e6, 42);
  const auto c = synthesize_counts(state.distributions, 1e6, 43);
  CHECK(a.position[0].counts.counts()[0] == b.position[0].counts.counts()[0]);
  const auto ta = a.position[0].counts.total();
  CHECK(ta == b.position[0].counts.total());
  CHECK(ta != c.position[0].counts.total());
  CHECK(std::abs(static_cast<double>(ta) - 1e6) < 5.0 * 1e3);
}

TEST_CASE("invalid double-Gaussian parameters") {
  CHECK_THROWS_AS(DoubleGaussian(0.0, 1.0), Error);
  CHECK_THROWS_AS(DoubleGaussianParams{}.validate(), Error);
  CHECK_THROWS_AS((DoubleGaussianParams{{{1, 1}, {1, 1}, {1, 1}}}.validate()), Error);
  CHECK_THROWS_AS((DoubleGaussianParams{{{1, -1}}}.validate()), Error);
}
