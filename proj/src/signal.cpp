#include "sweep/signal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "sweep/errors.hpp"

namespace sweep {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void validate(const SignalChannel& channel) {
  std::visit(
      Overloaded{
          [](const SineChannel& s) {
            if (!std::isfinite(s.amplitude) || !std::isfinite(s.frequency) ||
                !std::isfinite(s.offset)) {
              throw InvalidArgument("sine channel has non-finite parameters");
            }
          },
          [](const SignOfSineChannel& s) {
            if (!std::isfinite(s.frequency)) {
              throw InvalidArgument("sign-of-sine frequency must be finite");
            }
          },
          [](const ConstantChannel& c) {
            if (!std::isfinite(c.value)) {
              throw InvalidArgument("constant channel must be finite");
            }
          },
          [](const PiecewiseLinearChannel& p) {
            if (p.knots.empty()) {
              throw InvalidArgument("piecewise-linear channel needs knots");
            }
            for (std::size_t i = 0; i < p.knots.size(); ++i) {
              if (!std::isfinite(p.knots[i].first) ||
                  !std::isfinite(p.knots[i].second)) {
                throw InvalidArgument("piecewise-linear knot is not finite");
              }
              if (i > 0 && !(p.knots[i].first > p.knots[i - 1].first)) {
                throw InvalidArgument(
                    "piecewise-linear knot times must be strictly increasing");
              }
            }
          },
      },
      channel);
}

}  // namespace

double evaluate(const SignalChannel& channel, double t) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  return std::visit(
      Overloaded{
          [t](const SineChannel& s) {
            return s.amplitude * std::sin(two_pi * s.frequency * t) + s.offset;
          },
          [t](const SignOfSineChannel& s) {
            const double v = std::sin(two_pi * s.frequency * t);
            return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0);
          },
          [](const ConstantChannel& c) { return c.value; },
          [t](const PiecewiseLinearChannel& p) {
            const auto& k = p.knots;
            if (t <= k.front().first) return k.front().second;
            if (t >= k.back().first) return k.back().second;
            auto it = std::upper_bound(
                k.begin(), k.end(), t,
                [](double value, const auto& knot) { return value < knot.first; });
            const auto& hi = *it;
            const auto& lo = *(it - 1);
            const double w = (t - lo.first) / (hi.first - lo.first);
            return lo.second + w * (hi.second - lo.second);
          },
      },
      channel);
}

double lipschitz_bound(const SignalChannel& channel) {
  return std::visit(
      Overloaded{
          [](const SineChannel& s) {
            return 2.0 * std::numbers::pi * std::abs(s.frequency) *
                   std::abs(s.amplitude);
          },
          [](const SignOfSineChannel& s) {
            return s.frequency == 0.0 ? 0.0
                                      : std::numeric_limits<double>::infinity();
          },
          [](const ConstantChannel&) { return 0.0; },
          [](const PiecewiseLinearChannel& p) {
            double slope = 0.0;
            for (std::size_t i = 1; i < p.knots.size(); ++i) {
              slope = std::max(slope, std::abs(p.knots[i].second -
                                               p.knots[i - 1].second) /
                                          (p.knots[i].first -
                                           p.knots[i - 1].first));
            }
            return slope;
          },
      },
      channel);
}

double sup_bound(const SignalChannel& channel) {
  return std::visit(
      Overloaded{
          [](const SineChannel& s) {
            return s.frequency == 0.0 ? std::abs(s.offset)
                                      : std::abs(s.amplitude) + std::abs(s.offset);
          },
          [](const SignOfSineChannel& s) { return s.frequency == 0.0 ? 0.0 : 1.0; },
          [](const ConstantChannel& c) { return std::abs(c.value); },
          [](const PiecewiseLinearChannel& p) {
            double m = 0.0;
            for (const auto& [t, v] : p.knots) m = std::max(m, std::abs(v));
            return m;
          },
      },
      channel);
}

bool is_continuous(const SignalChannel& channel) {
  return std::isfinite(lipschitz_bound(channel));
}

Signal::Signal(std::vector<SignalChannel> channels)
    : channels_(std::move(channels)) {
  for (const auto& c : channels_) validate(c);
}

Signal Signal::zero(std::size_t dim) {
  return Signal(std::vector<SignalChannel>(dim, ConstantChannel{0.0}));
}

Vector Signal::operator()(double t) const {
  Vector out(static_cast<Eigen::Index>(channels_.size()));
  for (std::size_t i = 0; i < channels_.size(); ++i) {
    out(static_cast<Eigen::Index>(i)) = evaluate(channels_[i], t);
  }
  return out;
}

double Signal::lipschitz() const {
  double sq = 0.0;
  for (const auto& c : channels_) {
    const double l = lipschitz_bound(c);
    sq += l * l;
  }
  return std::sqrt(sq);
}

double Signal::sup_norm() const {
  double sq = 0.0;
  for (const auto& c : channels_) {
    const double s = sup_bound(c);
    sq += s * s;
  }
  return std::sqrt(sq);
}

bool Signal::continuous() const {
  return std::all_of(channels_.begin(), channels_.end(),
                     [](const auto& c) { return is_continuous(c); });
}

}  // namespace sweep
