#pragma once

// Gauss-Legendre quadrature with adaptive bisection.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <span>
#include <vector>

namespace eprsteer::quad {

template <int N>
class GaussLegendre {
 public:
  static const GaussLegendre& instance() {
    static const GaussLegendre rule;
    return rule;
  }

  std::span<const double> nodes() const noexcept { return nodes_; }
  std::span<const double> weights() const noexcept { return weights_; }

  template <typename F>
  double integrate(F&& f, double a, double b) const {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    double sum = 0.0;
    for (int i = 0; i < N; ++i) sum += weights_[i] * f(mid + half * nodes_[i]);
    return sum * half;
  }

 private:
  GaussLegendre() {
    // Roots of P_N by Newton iteration from the Tricomi initial guess.
    for (int k = 0; k < N; ++k) {
      double x = std::cos(std::numbers::pi * (k + 0.75) / (N + 0.5));
      double deriv = 0.0;
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = x;
        for (int j = 2; j <= N; ++j) {
          const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
          p0 = p1;
          p1 = p2;
        }
        deriv = N * (x * p1 - p0) / (x * x - 1.0);
        const double dx = p1 / deriv;
        x -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= N; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      deriv = N * (x * p1 - p0) / (x * x - 1.0);
      nodes_[k] = x;
      weights_[k] = 2.0 / ((1.0 - x * x) * deriv * deriv);
    }
  }

  std::array<double, N> nodes_{};
  std::array<double, N> weights_{};
};

using GaussLegendre16 = GaussLegendre<16>;

struct Tolerance {
  double absolute = 1e-15;
  double relative = 1e-12;
  int max_depth = 30;
};

namespace detail {

template <typename F>
double adapt(F& f, double a, double b, double whole, double abs_tol, const Tolerance& tol,
             int depth) {
  const auto& rule = GaussLegendre16::instance();
  const double m = 0.5 * (a + b);
  const double left = rule.integrate(f, a, m);
  const double right = rule.integrate(f, m, b);
  const double refined = left + right;
  if (depth >= tol.max_depth ||
      std::abs(refined - whole) <= std::max(abs_tol, tol.relative * std::abs(refined))) {
    return refined;
  }
  return adapt(f, a, m, left, 0.5 * abs_tol, tol, depth + 1) +
         adapt(f, m, b, right, 0.5 * abs_tol, tol, depth + 1);
}

}  // namespace detail

/// Integral of f over [a, b] by 16-point Gauss-Legendre with bisection until
/// the whole-interval and two-half estimates agree.
template <typename F>
double integrate(F&& f, double a, double b, const Tolerance& tol = {}) {
  if (!(b > a)) return 0.0;
  const double whole = GaussLegendre16::instance().integrate(f, a, b);
  return detail::adapt(f, a, b, whole, tol.absolute, tol, 0);
}

/// As integrate(), additionally splitting at the given interior points
/// (points outside (a, b) are ignored). Use it to place a kink or steep
/// transition at a subinterval edge.
template <typename F>
double integrate(F&& f, double a, double b, std::vector<double> breakpoints,
                 const Tolerance& tol = {}) {
  if (!(b > a)) return 0.0;
  std::erase_if(breakpoints, [&](double x) { return !(x > a && x < b); });
  std::sort(breakpoints.begin(), breakpoints.end());
  double lo = a;
  double sum = 0.0;
  for (double x : breakpoints) {
    if (x > lo) {
      sum += integrate(f, lo, x, tol);
      lo = x;
    }
  }
  return sum + integrate(f, lo, b, tol);
}

}  // namespace eprsteer::quad
