#pragma once

// Synthetic double-Gaussian biphoton model.
//
// The two-photon transverse amplitude along one axis is taken to be
//
//   psi(x_A, x_B) ~ exp(-(x_A + x_B)^2 / (4 s+^2)) * exp(-(x_A - x_B)^2 / (4 s-^2))
//
// so that x_A + x_B ~ N(0, s+^2) and x_A - x_B ~ N(0, s-^2) independently.
// Its Fourier transform has the same form in (k_A + k_B, k_A - k_B) with
// widths (1/s+, 1/s-). Pair correlation in position (s- < s+) therefore
// comes with anticorrelation in momentum. Positions are in metres and
// wavenumbers in 1/m.
//
// With this amplitude
//   Var(x_B | x_A) = s+^2 s-^2 / (s+^2 + s-^2)
//   Var(k_B | k_A) = 1 / (s+^2 + s-^2)
// and h(x_B|x_A) + h(k_B|k_A) = log(2 pi e s+ s- / (s+^2 + s-^2)) per axis,
// which equals log(pi e) exactly when s+ = s-.

#include <cstdint>
#include <functional>
#include <vector>

#include "eprsteer/entropy.hpp"
#include "eprsteer/grid.hpp"

namespace eprsteer {

/// Viewing-area extents of the reference experiment.
inline constexpr double kReferenceExtentPosition = 1.04e-3;  // m
inline constexpr double kReferenceExtentMomentum = 1.00e5;   // 1/m

/// Mode widths of one spatial axis.
struct ModeWidths {
  double sigma_plus = 0.0;   // scale of x_A + x_B (m)
  double sigma_minus = 0.0;  // scale of x_A - x_B (m)
};

struct DoubleGaussianParams {
  std::vector<ModeWidths> axes;  // one per spatial dimension

  /// Throws InvalidConfig unless every width is positive and 1 <= n <= 2.
  void validate() const;
};

/// A probability density over (a, b) = (party A coordinate, party B coordinate).
class BivariateDensity {
 public:
  virtual ~BivariateDensity() = default;

  virtual double pdf(double a, double b) const = 0;

  /// Integral of pdf(a, .) over [b_lo, b_hi]. The default integrates pdf
  /// numerically.
  virtual double inner_mass(double a, double b_lo, double b_hi) const;

  /// Points in [a_lo, a_hi] where a -> inner_mass(a, b_lo, b_hi) changes
  /// rapidly; quadrature splits there.
  virtual std::vector<double> outer_breakpoints(double a_lo, double a_hi, double b_lo,
                                                double b_hi) const;
  /// Points in [b_lo, b_hi] where b -> pdf(a, b) changes rapidly.
  virtual std::vector<double> inner_breakpoints(double a, double b_lo, double b_hi) const;

  /// p log p, overridable where log p is available in closed form.
  virtual double pdf_log_pdf(double a, double b) const;
};

/// Bivariate density from a callable; all integrals are numerical.
class FunctionDensity final : public BivariateDensity {
 public:
  explicit FunctionDensity(std::function<double(double, double)> f) : f_(std::move(f)) {}
  double pdf(double a, double b) const override { return f_(a, b); }

 private:
  std::function<double(double, double)> f_;
};

/// Joint Gaussian with a + b ~ N(0, sum_sd^2) and a - b ~ N(0, diff_sd^2).
class DoubleGaussian final : public BivariateDensity {
 public:
  DoubleGaussian(double sum_sd, double diff_sd);

  static DoubleGaussian position(const ModeWidths& w);
  static DoubleGaussian momentum(const ModeWidths& w);
  static DoubleGaussian of(const ModeWidths& w, Observable obs);

  double sum_sd() const noexcept { return sum_sd_; }
  double diff_sd() const noexcept { return diff_sd_; }
  double marginal_sd() const noexcept { return marginal_sd_; }
  double conditional_sd() const noexcept { return conditional_sd_; }
  /// E[b | a] = slope * a
  double slope() const noexcept { return slope_; }

  double pdf(double a, double b) const override;
  double log_pdf(double a, double b) const;
  double marginal_pdf(double a) const;
  double inner_mass(double a, double b_lo, double b_hi) const override;
  std::vector<double> outer_breakpoints(double a_lo, double a_hi, double b_lo,
                                        double b_hi) const override;
  std::vector<double> inner_breakpoints(double a, double b_lo, double b_hi) const override;
  double pdf_log_pdf(double a, double b) const override;

  /// Differential entropies (closed form).
  double conditional_entropy(LogBase base) const;
  double marginal_entropy(LogBase base) const;
  double joint_entropy(LogBase base) const;

 private:
  double sum_sd_;
  double diff_sd_;
  double marginal_sd_;
  double conditional_sd_;
  double slope_;
};

double joint_position_pdf(const ModeWidths& w, double x_a, double x_b);
double joint_momentum_pdf(const ModeWidths& w, double k_a, double k_b);

inline constexpr double kDefaultMaxTail = 1e-6;

struct Discretization {
  JointDistribution distribution;
  double tail_mass = 0.0;  // mass outside the grid, removed by renormalization
};

/// Cell probabilities of a 1-D (per party) grid by Gauss-Legendre
/// quadrature. Throws TruncationError when more than max_tail of the mass
/// falls outside the grid.
Discretization discretize(const BivariateDensity& density, const GridSpec& grid,
                          double max_tail = kDefaultMaxTail);

/// Product density over n axes (one factor per axis) on an n-dimensional
/// full-joint grid.
Discretization discretize(const std::vector<const BivariateDensity*>& per_axis,
                          const GridSpec& grid, double max_tail = kDefaultMaxTail);

/// Sum over axes of the closed-form h(B|A) for the given observable.
double analytic_conditional_entropy(const DoubleGaussianParams& params, Observable obs,
                                    LogBase base = LogBase::bits());

/// h(x_B|x_A) + h(k_B|k_A) summed over axes, and its separable-state bound
/// n log(pi e).
double continuous_steering_sum(const DoubleGaussianParams& params, LogBase base = LogBase::bits());
double continuous_steering_bound(std::size_t dimensions, LogBase base = LogBase::bits());

struct ConnectionCheck {
  double continuous_entropy = 0.0;    // h(x) of the density restricted to the axis
  double mean_window_entropy = 0.0;   // sum_l P(X_l) h_l(x)
  double discrete_entropy = 0.0;      // H(X)
  double residual = 0.0;              // |h - sum_l P h_l - H|
  double tail_mass = 0.0;
};

/// Continuous/discrete entropy connection for a 1-D density on one axis.
/// `breakpoints` marks kinks or jumps of the density.
ConnectionCheck connection_check(const std::function<double(double)>& pdf, const AxisGrid& axis,
                                 LogBase base = LogBase::bits(),
                                 std::vector<double> breakpoints = {},
                                 double max_tail = kDefaultMaxTail);

/// H(B|A) + log(dB) - h(b|a) for a double-Gaussian axis on a 1-D grid. Never
/// negative up to quadrature and truncation error.
double discrete_bound_gap(const DoubleGaussian& density, const GridSpec& grid,
                          LogBase base = LogBase::bits(), double max_tail = kDefaultMaxTail);

/// sum_{lm} P(l,m) h_lm(b|a) + H(B|A) - h(b|a), where h_lm is the
/// conditional differential entropy of the density restricted to cell (l,m).
/// Never negative up to quadrature and truncation error.
double conditioning_gap(const DoubleGaussian& density, const GridSpec& grid,
                        LogBase base = LogBase::bits(), double max_tail = kDefaultMaxTail);

/// Poisson means for a synthetic run: total * probs.
std::vector<double> expected_counts(const JointDistribution& dist, double total);

struct SyntheticSetup {
  DoubleGaussianParams params;
  std::size_t resolution_a = 24;
  std::size_t resolution_b = 24;
  std::vector<double> extent_position;  // per dimension, m
  std::vector<double> extent_momentum;  // per dimension, 1/m
  AnalysisMode mode = AnalysisMode::IndependentAxes;
  double max_tail = kDefaultMaxTail;
};

/// Default state: two axes with s+ = 3.2e-4 m and s- = 3.2e-5 m on the
/// reference viewing area at 24x24. The beam slightly overfills the aperture
/// (about 2e-3 of the mass is clipped per axis), so max_tail is 5e-3.
SyntheticSetup default_synthetic_setup();

struct SyntheticState {
  DistributionSet distributions;
  std::vector<double> tail_mass_position;
  std::vector<double> tail_mass_momentum;
};

SyntheticState synthesize(const SyntheticSetup& setup);

/// Independent Poisson counts with mean total * P per cell for every block.
CountSet synthesize_counts(const DistributionSet& state, double total_per_tensor,
                           std::uint64_t seed);

}  // namespace eprsteer
