#pragma once

#include <span>
#include <string>

#include "eprsteer/grid.hpp"

namespace eprsteer {

/// Logarithm base for entropies. Bits (2) are the default everywhere.
class LogBase {
 public:
  explicit LogBase(double base);

  static LogBase bits() { return LogBase(2.0); }
  static LogBase nats();
  static LogBase dits() { return LogBase(10.0); }

  double value() const noexcept { return base_; }
  double log(double x) const noexcept;
  /// "bits", "nats", "dits", or "log<base>" for anything else.
  std::string unit() const;

  friend bool operator==(const LogBase& a, const LogBase& b) noexcept { return a.base_ == b.base_; }

 private:
  double base_;
  double ln_base_;
};

struct EntropyValue {
  double value = 0.0;
  LogBase base = LogBase::bits();

  /// value * log_{to}(base)
  EntropyValue in(LogBase to) const;
};

// Cells below this are treated as exact zeros (0 log 0 = 0).
inline constexpr double kZeroProbability = 1e-300;
inline constexpr double kEntropyInputTolerance = 1e-9;

/// Shannon entropy of a probability vector. Throws NegativeProbability or
/// NotNormalized (|sum - 1| > 1e-9).
EntropyValue entropy(std::span<const double> p, LogBase base = LogBase::bits());

EntropyValue joint_entropy(const JointDistribution& dist, LogBase base = LogBase::bits());

/// H(other | conditioned_party), computed as H(A,B) - H(conditioned_party).
/// conditioned_party = A gives H(B|A).
EntropyValue conditional_entropy(const JointDistribution& dist, Party conditioned_party,
                                 LogBase base = LogBase::bits());

EntropyValue mutual_information(const JointDistribution& dist, LogBase base = LogBase::bits());

}  // namespace eprsteer
