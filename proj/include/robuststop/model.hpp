// Model parameter sets for the two supported state processes.
#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "robuststop/common.hpp"

namespace robuststop {

enum class ModelVariant { GbmDividend, TwoFactorJump };

struct GbmAsset {
    double x0 = 100.0;
    double mu = 0.0;
    double sigma = 0.2;
};

// Log-price X = S0 * exp(f(t) + u_t + v_t) with a Gaussian OU factor u and a
// spike factor v that decays at rate kappa_v between Poisson arrivals and
// jumps by `jump_size` at arrivals.
struct TwoFactorParams {
    double s0 = 10.0;
    double kappa_u = 10.0;
    double sigma_u = 0.25;
    double kappa_v = 50.0;
    double lambda_p = 1.0;
    double jump_size = 0.0;
    // Tabulated seasonal shape f(t); empty means f == 0.
    std::vector<double> f_times;
    std::vector<double> f_values;

    double seasonal(double t) const {
        if (f_times.empty()) return 0.0;
        if (t <= f_times.front()) return f_values.front();
        if (t >= f_times.back()) return f_values.back();
        std::size_t i = 1;
        while (f_times[i] < t) ++i;
        const double w = (t - f_times[i - 1]) / (f_times[i] - f_times[i - 1]);
        return f_values[i - 1] + w * (f_values[i] - f_values[i - 1]);
    }
};

struct ModelConfig {
    ModelVariant variant = ModelVariant::GbmDividend;
    std::vector<GbmAsset> assets{GbmAsset{}};  // one entry per independent asset
    TwoFactorParams two_factor;

    std::size_t state_dim() const {
        return variant == ModelVariant::GbmDividend ? assets.size() : 1;
    }
    std::size_t n_brownian() const {
        return variant == ModelVariant::GbmDividend ? assets.size() : 1;
    }
    std::size_t n_jump() const {
        return variant == ModelVariant::TwoFactorJump && two_factor.jump_size > 0.0 ? 1 : 0;
    }

    void validate() const {
        if (variant == ModelVariant::GbmDividend) {
            if (assets.empty()) throw ConfigError("gbm model needs at least one asset");
            for (const auto& a : assets) {
                if (a.sigma < 0.0) throw ConfigError("sigma must be >= 0");
                if (a.x0 <= 0.0) throw ConfigError("x0 must be > 0");
            }
        } else {
            const auto& p = two_factor;
            if (p.kappa_u <= 0.0 || p.kappa_v <= 0.0)
                throw ConfigError("mean-reversion speeds must be > 0");
            if (p.sigma_u < 0.0) throw ConfigError("sigma_u must be >= 0");
            if (p.lambda_p < 0.0) throw ConfigError("lambda_p must be >= 0");
            if (p.jump_size < 0.0) throw ConfigError("jump_size must be >= 0");
            if (p.s0 <= 0.0) throw ConfigError("S0 must be > 0");
            if (p.f_times.size() != p.f_values.size())
                throw ConfigError("seasonal table sizes differ");
        }
    }
};

}  // namespace robuststop
