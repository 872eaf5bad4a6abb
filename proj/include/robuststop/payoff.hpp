// Exercise payoffs, evaluated as pre-discounted cash-flows.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <string>

#include "robuststop/common.hpp"

namespace robuststop {

enum class PayoffKind { Call, Put, MaxCall, SwingCall, Custom };

// f_t(x) = e^{-r t} * intrinsic(x). The discount rate folds deterministic
// discounting into the cash-flow so all later averages are plain means.
class Payoff {
  public:
    using CustomFn = std::function<double(double t, std::span<const double> state)>;

    Payoff(PayoffKind kind, double strike, double discount_rate = 0.0)
        : kind_(kind), strike_(strike), rate_(discount_rate) {
        if (kind_ != PayoffKind::Custom && strike_ <= 0.0)
            throw ConfigError("payoff strike must be > 0");
    }
    static Payoff custom(CustomFn fn) {
        Payoff p(PayoffKind::Custom, 1.0);
        p.custom_ = std::move(fn);
        return p;
    }

    double operator()(double t, std::span<const double> state) const {
        switch (kind_) {
            case PayoffKind::Call:
            case PayoffKind::SwingCall:
                return std::exp(-rate_ * t) * std::max(state[0] - strike_, 0.0);
            case PayoffKind::Put:
                return std::exp(-rate_ * t) * std::max(strike_ - state[0], 0.0);
            case PayoffKind::MaxCall: {
                double m = state[0];
                for (std::size_t k = 1; k < state.size(); ++k) m = std::max(m, state[k]);
                return std::exp(-rate_ * t) * std::max(m - strike_, 0.0);
            }
            case PayoffKind::Custom:
                return custom_(t, state);
        }
        return 0.0;
    }

    PayoffKind kind() const { return kind_; }
    double strike() const { return strike_; }
    double discount_rate() const { return rate_; }
    // Exercise region direction for boundary extraction: +1 if exercising is
    // optimal above the threshold (calls), -1 if below (puts).
    int boundary_direction() const { return kind_ == PayoffKind::Put ? -1 : +1; }

  private:
    PayoffKind kind_;
    double strike_;
    double rate_;
    CustomFn custom_;
};

}  // namespace robuststop
