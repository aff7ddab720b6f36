#include "eprsteer/entropy.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "eprsteer/detail/sum.hpp"
#include "eprsteer/error.hpp"

namespace eprsteer {

LogBase::LogBase(double base) : base_(base), ln_base_(std::log(base)) {
  if (!(base > 1.0) || !std::isfinite(base)) {
    throw Error(ErrorCode::InvalidConfig, "logarithm base must be > 1, got " + std::to_string(base));
  }
}

LogBase LogBase::nats() { return LogBase(std::numbers::e); }

double LogBase::log(double x) const noexcept {
  if (base_ == 2.0) return std::log2(x);
  if (base_ == 10.0) return std::log10(x);
  return std::log(x) / ln_base_;
}

std::string LogBase::unit() const {
  if (base_ == 2.0) return "bits";
  if (base_ == std::numbers::e) return "nats";
  if (base_ == 10.0) return "dits";
  std::ostringstream os;
  os.precision(17);
  os << "log" << base_;
  return os.str();
}

EntropyValue EntropyValue::in(LogBase to) const {
  // log_to(x) = log_base(x) * log_to(base)
  return {value * to.log(base.value()), to};
}

EntropyValue entropy(std::span<const double> p, LogBase base) {
  detail::CompensatedSum total;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!(p[i] >= 0.0)) {
      throw Error(ErrorCode::NegativeProbability, "probability entry " + std::to_string(i) +
                                                      " is negative or NaN: " + std::to_string(p[i]));
    }
    total.add(p[i]);
  }
  if (std::abs(total.value() - 1.0) > kEntropyInputTolerance) {
    throw Error(ErrorCode::NotNormalized,
                "probabilities sum to " + std::to_string(total.value()));
  }
  detail::CompensatedSum h;
  for (double x : p) {
    if (x >= kZeroProbability) h.add(-x * base.log(x));
  }
  return {h.value(), base};
}

EntropyValue joint_entropy(const JointDistribution& dist, LogBase base) {
  return entropy(dist.probs(), base);
}

EntropyValue conditional_entropy(const JointDistribution& dist, Party conditioned_party,
                                 LogBase base) {
  const auto joint = joint_entropy(dist, base);
  const auto marginal = marginalize(dist, conditioned_party);
  return {joint.value - entropy(marginal, base).value, base};
}

EntropyValue mutual_information(const JointDistribution& dist, LogBase base) {
  const auto joint = joint_entropy(dist, base);
  const auto ha = entropy(marginalize(dist, Party::A), base);
  const auto hb = entropy(marginalize(dist, Party::B), base);
  return {ha.value + hb.value - joint.value, base};
}

}  // namespace eprsteer
