#include "eprsteer/witness.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "eprsteer/error.hpp"

namespace eprsteer {

std::string_view to_string(Direction d) {
  switch (d) {
    case Direction::BGivenA: return "B_given_A";
    case Direction::AGivenB: return "A_given_B";
    case Direction::Symmetric: return "symmetric";
  }
  return "unknown";
}

Direction parse_direction(std::string_view text) {
  if (text == "ba" || text == "B_given_A") return Direction::BGivenA;
  if (text == "ab" || text == "A_given_B") return Direction::AGivenB;
  if (text == "sym" || text == "symmetric") return Direction::Symmetric;
  throw Error(ErrorCode::InvalidConfig, "unknown witness direction '" + std::string(text) + "'");
}

double pi_e() { return std::numbers::pi * std::numbers::e; }

double per_dim_bound(double dx, double dk, LogBase base) {
  if (!(dx > 0.0) || !(dk > 0.0)) {
    throw Error(ErrorCode::NonpositiveWindow, "window widths must be positive (dx=" +
                                                  std::to_string(dx) +
                                                  ", dk=" + std::to_string(dk) + ")");
  }
  return base.log(pi_e() / (dx * dk));
}

namespace {

std::vector<const AxisGrid*> flat_axes(const std::vector<JointDistribution>& blocks, Party party) {
  std::vector<const AxisGrid*> out;
  for (const auto& b : blocks) {
    for (const auto& ax : b.grid().axes(party)) out.push_back(&ax);
  }
  return out;
}

}  // namespace

WitnessResult conditional_witness(const DistributionSet& data, Direction direction,
                                  LogBase base) {
  if (direction == Direction::Symmetric) return symmetric_witness(data, base);
  check_compatible(data);
  const Party steered = direction == Direction::BGivenA ? Party::B : Party::A;
  const Party steering = other(steered);

  WitnessResult r;
  r.direction = direction;
  r.mode = data.mode();
  double lhs = 0.0;
  for (const auto* blocks : {&data.position, &data.momentum}) {
    for (const auto& d : *blocks) lhs += conditional_entropy(d, steering, base).value;
  }
  const auto xs = flat_axes(data.position, steered);
  const auto ks = flat_axes(data.momentum, steered);
  double bound = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double b = per_dim_bound(xs[i]->window_width(), ks[i]->window_width(), base);
    r.component_bounds.push_back(b);
    bound += b;
  }
  r.lhs = {lhs, base};
  r.bound = bound;
  r.margin = bound - lhs;
  return r;
}

WitnessResult symmetric_witness(const DistributionSet& data, LogBase base) {
  check_compatible(data);
  WitnessResult r;
  r.direction = Direction::Symmetric;
  r.mode = data.mode();
  double lhs = 0.0;
  for (const auto* blocks : {&data.position, &data.momentum}) {
    for (const auto& d : *blocks) lhs += mutual_information(d, base).value;
  }
  const std::size_t n = dimensions(data);
  for (Party party : {Party::A, Party::B}) {
    const auto xs = flat_axes(data.position, party);
    const auto ks = flat_axes(data.momentum, party);
    double area = 1.0;
    for (std::size_t i = 0; i < n; ++i) area *= xs[i]->extent() * ks[i]->extent() / pi_e();
    r.component_bounds.push_back(base.log(area));
  }
  r.lhs = {lhs, base};
  r.bound = *std::max_element(r.component_bounds.begin(), r.component_bounds.end());
  r.margin = lhs - r.bound;
  return r;
}

WitnessResult evaluate_witness(const DistributionSet& data, Direction direction, LogBase base) {
  return direction == Direction::Symmetric ? symmetric_witness(data, base)
                                           : conditional_witness(data, direction, base);
}

std::size_t min_resolution(double extent_position, double extent_momentum) {
  if (!(extent_position > 0.0) || !(extent_momentum > 0.0) || !std::isfinite(extent_position) ||
      !std::isfinite(extent_momentum)) {
    throw Error(ErrorCode::NonpositiveExtent, "extents must be positive and finite");
  }
  const double area = extent_position * extent_momentum;
  auto below = [&](std::size_t n) {
    const double nd = static_cast<double>(n);
    return (extent_position / nd) * (extent_momentum / nd) < pi_e();
  };
  auto n = static_cast<std::size_t>(std::floor(std::sqrt(area / pi_e()))) + 1;
  // Correct the closed form against the defining inequality.
  while (n > 1 && below(n - 1)) --n;
  while (!below(n)) ++n;
  return n;
}

}  // namespace eprsteer
