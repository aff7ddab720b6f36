#include "eprsteer/spdc.hpp"

#include <cmath>
#include <numbers>

#include "eprsteer/bootstrap.hpp"
#include "eprsteer/detail/sum.hpp"
#include "eprsteer/error.hpp"
#include "eprsteer/quadrature.hpp"

namespace eprsteer {

namespace {

constexpr double kTwoPiE = 2.0 * std::numbers::pi * std::numbers::e;
constexpr double kSqrt2 = std::numbers::sqrt2;
constexpr double kSpread[] = {-8.0, -4.0, -2.0, -1.0, 0.0, 1.0, 2.0, 4.0, 8.0};

// P(lo <= Z <= hi) for standard normal Z, evaluated on the side of the
// distribution that avoids cancellation.
double normal_interval(double lo, double hi) {
  if (lo > 0.0) return 0.5 * (std::erfc(lo / kSqrt2) - std::erfc(hi / kSqrt2));
  return 0.5 * (std::erfc(-hi / kSqrt2) - std::erfc(-lo / kSqrt2));
}

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

}  // namespace

void DoubleGaussianParams::validate() const {
  if (axes.empty() || axes.size() > 2) {
    throw Error(ErrorCode::InvalidConfig,
                "double-Gaussian state needs 1 or 2 axes, got " + std::to_string(axes.size()));
  }
  for (const auto& w : axes) {
    if (!(w.sigma_plus > 0.0) || !(w.sigma_minus > 0.0) || !std::isfinite(w.sigma_plus) ||
        !std::isfinite(w.sigma_minus)) {
      throw Error(ErrorCode::InvalidConfig, "mode widths must be positive and finite");
    }
  }
}

// ---------------------------------------------------------------------------
// BivariateDensity

double BivariateDensity::inner_mass(double a, double b_lo, double b_hi) const {
  return quad::integrate([&](double b) { return pdf(a, b); }, b_lo, b_hi,
                         inner_breakpoints(a, b_lo, b_hi));
}

std::vector<double> BivariateDensity::outer_breakpoints(double, double, double, double) const {
  return {};
}

std::vector<double> BivariateDensity::inner_breakpoints(double, double, double) const {
  return {};
}

double BivariateDensity::pdf_log_pdf(double a, double b) const { return xlogx(pdf(a, b)); }

// ---------------------------------------------------------------------------
// DoubleGaussian

DoubleGaussian::DoubleGaussian(double sum_sd, double diff_sd) : sum_sd_(sum_sd), diff_sd_(diff_sd) {
  if (!(sum_sd > 0.0) || !(diff_sd > 0.0)) {
    throw Error(ErrorCode::InvalidConfig, "double-Gaussian widths must be positive");
  }
  const double sp2 = sum_sd * sum_sd, sm2 = diff_sd * diff_sd;
  marginal_sd_ = 0.5 * std::sqrt(sp2 + sm2);
  conditional_sd_ = sum_sd * diff_sd / std::sqrt(sp2 + sm2);
  slope_ = (sp2 - sm2) / (sp2 + sm2);
}

DoubleGaussian DoubleGaussian::position(const ModeWidths& w) {
  return DoubleGaussian(w.sigma_plus, w.sigma_minus);
}

DoubleGaussian DoubleGaussian::momentum(const ModeWidths& w) {
  return DoubleGaussian(1.0 / w.sigma_plus, 1.0 / w.sigma_minus);
}

DoubleGaussian DoubleGaussian::of(const ModeWidths& w, Observable obs) {
  return obs == Observable::Position ? position(w) : momentum(w);
}

double DoubleGaussian::log_pdf(double a, double b) const {
  const double u = (a + b) / sum_sd_;
  const double v = (a - b) / diff_sd_;
  return -std::log(std::numbers::pi * sum_sd_ * diff_sd_) - 0.5 * (u * u + v * v);
}

double DoubleGaussian::pdf(double a, double b) const { return std::exp(log_pdf(a, b)); }

double DoubleGaussian::marginal_pdf(double a) const {
  const double z = a / marginal_sd_;
  return std::exp(-0.5 * z * z) / (marginal_sd_ * std::sqrt(2.0 * std::numbers::pi));
}

double DoubleGaussian::inner_mass(double a, double b_lo, double b_hi) const {
  const double mu = slope_ * a;
  return marginal_pdf(a) * normal_interval((b_lo - mu) / conditional_sd_,
                                           (b_hi - mu) / conditional_sd_);
}

std::vector<double> DoubleGaussian::outer_breakpoints(double, double, double b_lo,
                                                      double b_hi) const {
  std::vector<double> pts{0.0};
  if (slope_ == 0.0) return pts;
  const double w = conditional_sd_ / std::abs(slope_);
  for (double edge : {b_lo, b_hi}) {
    for (double k : kSpread) pts.push_back(edge / slope_ + k * w);
  }
  return pts;
}

std::vector<double> DoubleGaussian::inner_breakpoints(double a, double, double) const {
  std::vector<double> pts;
  for (double k : kSpread) pts.push_back(slope_ * a + k * conditional_sd_);
  return pts;
}

double DoubleGaussian::pdf_log_pdf(double a, double b) const {
  const double lp = log_pdf(a, b);
  if (lp < -745.0) return 0.0;
  return std::exp(lp) * lp;
}

double DoubleGaussian::conditional_entropy(LogBase base) const {
  return 0.5 * std::log(kTwoPiE * conditional_sd_ * conditional_sd_) / std::log(base.value());
}

double DoubleGaussian::marginal_entropy(LogBase base) const {
  return 0.5 * std::log(kTwoPiE * marginal_sd_ * marginal_sd_) / std::log(base.value());
}

double DoubleGaussian::joint_entropy(LogBase base) const {
  return marginal_entropy(base) + conditional_entropy(base);
}

double joint_position_pdf(const ModeWidths& w, double x_a, double x_b) {
  return DoubleGaussian::position(w).pdf(x_a, x_b);
}

double joint_momentum_pdf(const ModeWidths& w, double k_a, double k_b) {
  return DoubleGaussian::momentum(w).pdf(k_a, k_b);
}

// ---------------------------------------------------------------------------
// Discretization

namespace {

// Unnormalized cell masses of a single-axis grid, row-major (A window, B window).
std::vector<double> cell_masses(const BivariateDensity& density, const AxisGrid& ax_a,
                                const AxisGrid& ax_b) {
  std::vector<double> mass(ax_a.n_windows() * ax_b.n_windows());
  for (std::size_t l = 0; l < ax_a.n_windows(); ++l) {
    const double a_lo = ax_a.lower_edge(l), a_hi = ax_a.lower_edge(l + 1);
    for (std::size_t m = 0; m < ax_b.n_windows(); ++m) {
      const double b_lo = ax_b.lower_edge(m), b_hi = ax_b.lower_edge(m + 1);
      mass[l * ax_b.n_windows() + m] = quad::integrate(
          [&](double a) { return density.inner_mass(a, b_lo, b_hi); }, a_lo, a_hi,
          density.outer_breakpoints(a_lo, a_hi, b_lo, b_hi));
    }
  }
  return mass;
}

Discretization finish(const GridSpec& grid, std::vector<double> mass, double max_tail) {
  const double inside = detail::accurate_sum(mass);
  const double tail = std::max(0.0, 1.0 - inside);
  if (tail > max_tail) {
    throw Error(ErrorCode::TruncationError, "grid misses " + std::to_string(tail) +
                                                " of the density mass (limit " +
                                                std::to_string(max_tail) + ")");
  }
  for (auto& m : mass) m /= inside;
  return {JointDistribution(grid, std::move(mass)), tail};
}

}  // namespace

Discretization discretize(const BivariateDensity& density, const GridSpec& grid, double max_tail) {
  if (grid.dimensions() != 1) {
    throw Error(ErrorCode::DimensionMismatch,
                "single-density discretize needs a 1-D grid; use the per-axis overload");
  }
  return finish(grid, cell_masses(density, grid.axes_a()[0], grid.axes_b()[0]), max_tail);
}

Discretization discretize(const std::vector<const BivariateDensity*>& per_axis,
                          const GridSpec& grid, double max_tail) {
  const std::size_t n = grid.dimensions();
  if (per_axis.size() != n) {
    throw Error(ErrorCode::DimensionMismatch, "need one density per axis");
  }
  std::vector<std::vector<double>> tables;
  for (std::size_t i = 0; i < n; ++i) {
    tables.push_back(cell_masses(*per_axis[i], grid.axes_a()[i], grid.axes_b()[i]));
  }
  const auto shape = grid.shape();
  std::vector<double> mass(grid.total_cells());
  std::vector<std::size_t> idx(2 * n, 0);
  for (auto& cell : mass) {
    double p = 1.0;
    for (std::size_t i = 0; i < n; ++i) p *= tables[i][idx[i] * shape[n + i] + idx[n + i]];
    cell = p;
    for (std::size_t d = 2 * n; d-- > 0;) {
      if (++idx[d] < shape[d]) break;
      idx[d] = 0;
    }
  }
  return finish(grid, std::move(mass), max_tail);
}

// ---------------------------------------------------------------------------
// Closed-form oracles

double analytic_conditional_entropy(const DoubleGaussianParams& params, Observable obs,
                                    LogBase base) {
  params.validate();
  double h = 0.0;
  for (const auto& w : params.axes) h += DoubleGaussian::of(w, obs).conditional_entropy(base);
  return h;
}

double continuous_steering_sum(const DoubleGaussianParams& params, LogBase base) {
  return analytic_conditional_entropy(params, Observable::Position, base) +
         analytic_conditional_entropy(params, Observable::Momentum, base);
}

double continuous_steering_bound(std::size_t dimensions, LogBase base) {
  return static_cast<double>(dimensions) * base.log(std::numbers::pi * std::numbers::e);
}

ConnectionCheck connection_check(const std::function<double(double)>& pdf, const AxisGrid& axis,
                                 LogBase base, std::vector<double> breakpoints, double max_tail) {
  const std::size_t n = axis.n_windows();
  std::vector<double> window_mass(n);
  for (std::size_t l = 0; l < n; ++l) {
    window_mass[l] = quad::integrate(pdf, axis.lower_edge(l), axis.lower_edge(l + 1), breakpoints);
  }
  const double inside = detail::accurate_sum(window_mass);
  ConnectionCheck out;
  out.tail_mass = std::max(0.0, 1.0 - inside);
  if (out.tail_mass > max_tail) {
    throw Error(ErrorCode::TruncationError, "axis misses " + std::to_string(out.tail_mass) +
                                                " of the density mass (limit " +
                                                std::to_string(max_tail) + ")");
  }
  const double ln_base = std::log(base.value());

  // h over the whole extent as one integral, independent of the windowing.
  std::vector<double> whole_breaks = breakpoints;
  out.continuous_entropy =
      -quad::integrate([&](double x) { return xlogx(pdf(x) / inside); }, axis.lower_edge(0),
                       axis.lower_edge(n), std::move(whole_breaks)) /
      ln_base;

  detail::CompensatedSum mean_h, discrete_h;
  for (std::size_t l = 0; l < n; ++l) {
    const double p = window_mass[l] / inside;
    if (!(window_mass[l] > 0.0)) continue;
    const double mass = window_mass[l];
    const double h_l = -quad::integrate([&](double x) { return xlogx(pdf(x) / mass); },
                                        axis.lower_edge(l), axis.lower_edge(l + 1), breakpoints);
    mean_h.add(p * h_l / ln_base);
    discrete_h.add(-p * std::log(p) / ln_base);
  }
  out.mean_window_entropy = mean_h.value();
  out.discrete_entropy = discrete_h.value();
  out.residual =
      std::abs(out.continuous_entropy - out.mean_window_entropy - out.discrete_entropy);
  return out;
}

double discrete_bound_gap(const DoubleGaussian& density, const GridSpec& grid, LogBase base,
                          double max_tail) {
  const auto d = discretize(density, grid, max_tail);
  const double h_discrete = conditional_entropy(d.distribution, Party::A, base).value;
  return h_discrete + base.log(grid.axes_b()[0].window_width()) - density.conditional_entropy(base);
}

double conditioning_gap(const DoubleGaussian& density, const GridSpec& grid, LogBase base,
                        double max_tail) {
  const auto d = discretize(density, grid, max_tail);
  const double inside = 1.0 - d.tail_mass;
  const auto& ax_a = grid.axes_a().at(0);
  const auto& ax_b = grid.axes_b().at(0);
  const quad::Tolerance tol{1e-15, 1e-10, 30};

  // sum over cells of P h_lm(b|a) = sum over cells of [int g ln g - int int p ln p]
  detail::CompensatedSum within;
  for (std::size_t l = 0; l < ax_a.n_windows(); ++l) {
    const double a_lo = ax_a.lower_edge(l), a_hi = ax_a.lower_edge(l + 1);
    for (std::size_t m = 0; m < ax_b.n_windows(); ++m) {
      const double b_lo = ax_b.lower_edge(m), b_hi = ax_b.lower_edge(m + 1);
      const auto breaks = density.outer_breakpoints(a_lo, a_hi, b_lo, b_hi);
      const double g_log_g = quad::integrate(
          [&](double a) { return xlogx(density.inner_mass(a, b_lo, b_hi)); }, a_lo, a_hi, breaks,
          tol);
      const double p_log_p = quad::integrate(
          [&](double a) {
            return quad::integrate([&](double b) { return density.pdf_log_pdf(a, b); }, b_lo, b_hi,
                                   density.inner_breakpoints(a, b_lo, b_hi), tol);
          },
          a_lo, a_hi, breaks, tol);
      within.add(g_log_g - p_log_p);
    }
  }
  const double mean_cell_conditional = within.value() / inside / std::log(base.value());
  return mean_cell_conditional + conditional_entropy(d.distribution, Party::A, base).value -
         density.conditional_entropy(base);
}

std::vector<double> expected_counts(const JointDistribution& dist, double total) {
  if (!(total > 0.0)) throw Error(ErrorCode::ZeroTotal, "expected total must be positive");
  std::vector<double> means(dist.probs().begin(), dist.probs().end());
  for (auto& m : means) m *= total;
  return means;
}

// ---------------------------------------------------------------------------
// Synthetic experiments

SyntheticSetup default_synthetic_setup() {
  SyntheticSetup s;
  s.params.axes = {{3.2e-4, 3.2e-5}, {3.2e-4, 3.2e-5}};
  s.resolution_a = 24;
  s.resolution_b = 24;
  s.extent_position = {kReferenceExtentPosition, kReferenceExtentPosition};
  s.extent_momentum = {kReferenceExtentMomentum, kReferenceExtentMomentum};
  s.mode = AnalysisMode::IndependentAxes;
  s.max_tail = 5e-3;
  return s;
}

SyntheticState synthesize(const SyntheticSetup& setup) {
  setup.params.validate();
  const std::size_t n = setup.params.axes.size();
  if (setup.extent_position.size() != n || setup.extent_momentum.size() != n) {
    throw Error(ErrorCode::InvalidConfig, "need one position and one momentum extent per axis");
  }
  SyntheticState state;
  for (Observable obs : {Observable::Position, Observable::Momentum}) {
    const auto& extents = obs == Observable::Position ? setup.extent_position : setup.extent_momentum;
    auto& blocks = obs == Observable::Position ? state.distributions.position
                                               : state.distributions.momentum;
    auto& tails = obs == Observable::Position ? state.tail_mass_position : state.tail_mass_momentum;
    std::vector<DoubleGaussian> densities;
    std::vector<AxisGrid> axes_a, axes_b;
    for (std::size_t i = 0; i < n; ++i) {
      densities.push_back(DoubleGaussian::of(setup.params.axes[i], obs));
      axes_a.push_back(AxisGrid::centered(setup.resolution_a, extents[i]));
      axes_b.push_back(AxisGrid::centered(setup.resolution_b, extents[i]));
    }
    if (setup.mode == AnalysisMode::IndependentAxes) {
      for (std::size_t i = 0; i < n; ++i) {
        auto d = discretize(densities[i], GridSpec(obs, {axes_a[i]}, {axes_b[i]}), setup.max_tail);
        blocks.push_back(std::move(d.distribution));
        tails.push_back(d.tail_mass);
      }
    } else {
      std::vector<const BivariateDensity*> ptrs;
      for (const auto& g : densities) ptrs.push_back(&g);
      auto d = discretize(ptrs, GridSpec(obs, axes_a, axes_b), setup.max_tail);
      blocks.push_back(std::move(d.distribution));
      tails.push_back(d.tail_mass);
    }
  }
  return state;
}

CountSet synthesize_counts(const DistributionSet& state, double total_per_tensor,
                           std::uint64_t seed) {
  check_compatible(state);
  const CounterRng root(seed);
  CountSet out;
  for (std::size_t i = 0; i < state.position.size(); ++i) {
    auto rng = root.split(2 * i);
    const auto& d = state.position[i];
    out.position.push_back(
        {d.grid(), poisson_sample(d.grid().shape(), expected_counts(d, total_per_tensor), rng)});
  }
  for (std::size_t i = 0; i < state.momentum.size(); ++i) {
    auto rng = root.split(2 * i + 1);
    const auto& d = state.momentum[i];
    out.momentum.push_back(
        {d.grid(), poisson_sample(d.grid().shape(), expected_counts(d, total_per_tensor), rng)});
  }
  return out;
}

}  // namespace eprsteer
