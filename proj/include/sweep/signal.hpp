#pragma once

#include <cstddef>
#include <utility>
#include <variant>
#include <vector>

#include "sweep/types.hpp"

namespace sweep {

/// amplitude * sin(2*pi*frequency*t) + offset
struct SineChannel {
  double amplitude = 1.0;
  double frequency = 1.0;
  double offset = 0.0;
  bool operator==(const SineChannel&) const = default;
};

/// sign(sin(2*pi*frequency*t)), with sign(0) = 0. Discontinuous.
struct SignOfSineChannel {
  double frequency = 1.0;
  bool operator==(const SignOfSineChannel&) const = default;
};

struct ConstantChannel {
  double value = 0.0;
  bool operator==(const ConstantChannel&) const = default;
};

/// Linear interpolation through (time, value) knots; held constant outside.
struct PiecewiseLinearChannel {
  std::vector<std::pair<double, double>> knots;
  bool operator==(const PiecewiseLinearChannel&) const = default;
};

using SignalChannel = std::variant<SineChannel, SignOfSineChannel,
                                   ConstantChannel, PiecewiseLinearChannel>;

double evaluate(const SignalChannel& channel, double t);
/// Global Lipschitz constant in t; +inf for discontinuous channels.
double lipschitz_bound(const SignalChannel& channel);
/// sup_t |u(t)|, analytic.
double sup_bound(const SignalChannel& channel);
bool is_continuous(const SignalChannel& channel);

/// A p-valued input signal u(t), one scalar channel per component.
class Signal {
 public:
  Signal() = default;
  explicit Signal(std::vector<SignalChannel> channels);

  static Signal zero(std::size_t dim);

  std::size_t dim() const { return channels_.size(); }
  const std::vector<SignalChannel>& channels() const { return channels_; }

  Vector operator()(double t) const;
  /// Lipschitz constant of t -> u(t) in the Euclidean norm.
  double lipschitz() const;
  /// Upper bound on sup_t ||u(t)||.
  double sup_norm() const;
  bool continuous() const;

  bool operator==(const Signal&) const = default;

 private:
  std::vector<SignalChannel> channels_;
};

}  // namespace sweep
