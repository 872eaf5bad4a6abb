// Path simulation for the supported models, exact in distribution at any
// step size, plus the in-memory trajectory store used by the regressions.
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "robuststop/common.hpp"
#include "robuststop/model.hpp"
#include "robuststop/rng.hpp"
#include "robuststop/time_grid.hpp"

namespace robuststop {

namespace streams {
constexpr std::uint64_t kBrownian = 0;
constexpr std::uint64_t kJump = 1;
constexpr std::uint64_t kPresim = 2;
}  // namespace streams

// Steps one path of the configured model through the fine grid. Both the
// stored ensembles and the streaming evaluators run on this, so regenerated
// increments always match the ones consumed during simulation.
class ModelStepper {
  public:
    struct PathState {
        std::array<double, 2> x{};  // observed state (spot prices)
        double u = 0.0, v = 0.0;    // two-factor latent components
    };

    ModelStepper(const ModelConfig& model, const TimeGrid& grid, std::uint64_t seed,
                 bool presim_leg = false)
        : model_(model),
          grid_(grid),
          rng_w_(seed, streams::kBrownian),
          rng_n_(seed, streams::kJump),
          rng_pre_(seed, streams::kPresim),
          presim_(presim_leg) {
        model_.validate();
        if (presim_ && model_.variant != ModelVariant::GbmDividend)
            throw ConfigError("boundary pre-simulation requires the gbm model");
    }

    std::size_t state_dim() const { return model_.state_dim(); }
    std::size_t n_brownian() const { return model_.n_brownian(); }
    std::size_t n_jump() const { return model_.n_jump(); }
    double jump_intensity() const { return model_.two_factor.lambda_p; }

    void init(std::uint64_t path, PathState& s) const {
        if (model_.variant == ModelVariant::GbmDividend) {
            for (std::size_t i = 0; i < model_.assets.size(); ++i) {
                s.x[i] = model_.assets[i].x0;
                if (presim_) {
                    // One year of driftless log-diffusion before time 0 so the
                    // time-0 cross-section is spread out for boundary fits.
                    const double z = rng_pre_.normal(path, 0, static_cast<std::uint32_t>(i));
                    s.x[i] *= std::exp(model_.assets[i].sigma * z);
                }
            }
        } else {
            s.u = 0.0;
            s.v = 0.0;
            s.x[0] = model_.two_factor.s0 * std::exp(model_.two_factor.seasonal(0.0));
        }
    }

    // Advances over fine step t_idx -> t_idx+1 and reports the increments
    // that drove it. dw_out has n_brownian() entries, dn_out n_jump().
    void step(std::uint64_t path, std::size_t t_idx, PathState& s, std::span<double> dw_out,
              std::span<double> dn_out) const {
        const double h = grid_.dt(t_idx);
        const double sqrt_h = std::sqrt(h);
        if (model_.variant == ModelVariant::GbmDividend) {
            for (std::size_t i = 0; i < model_.assets.size(); ++i) {
                const auto& a = model_.assets[i];
                const double dw =
                    sqrt_h * rng_w_.normal(path, t_idx, static_cast<std::uint32_t>(i));
                s.x[i] *= std::exp((a.mu - 0.5 * a.sigma * a.sigma) * h + a.sigma * dw);
                dw_out[i] = dw;
            }
        } else {
            const auto& p = model_.two_factor;
            const double xi1 = rng_w_.normal(path, t_idx, 0);
            const double xi2 = rng_w_.normal(path, t_idx, 1);
            const double dw = sqrt_h * xi1;
            const double decay = std::exp(-p.kappa_u * h);
            // Exact OU transition jointly with the reported Brownian
            // increment: the innovation splits into the component spanned by
            // dW plus an orthogonal remainder with the matching variance.
            const double var_u =
                p.sigma_u * p.sigma_u * (1.0 - decay * decay) / (2.0 * p.kappa_u);
            const double a = p.sigma_u * (1.0 - decay) / (p.kappa_u * sqrt_h);
            const double b = std::sqrt(std::max(var_u - a * a, 0.0));
            s.u = s.u * decay + a * xi1 + b * xi2;
            dw_out[0] = dw;
            if (model_.n_jump() > 0) {
                const int k = rng_n_.poisson(path, t_idx, 0, p.lambda_p * h);
                s.v = s.v * std::exp(-p.kappa_v * h) + p.jump_size * k;
                dn_out[0] = static_cast<double>(k);
            } else {
                s.v = s.v * std::exp(-p.kappa_v * h);
            }
            const double t_next = grid_.time_at(t_idx + 1);
            s.x[0] = p.s0 * std::exp(p.seasonal(t_next) + s.u + s.v);
        }
    }

  private:
    ModelConfig model_;
    const TimeGrid& grid_;
    CounterRng rng_w_, rng_n_, rng_pre_;
    bool presim_;
};

// Immutable trajectory store: the observed state at every fine time for every
// path. Brownian and Poisson increments are regenerated on demand from the
// counter streams instead of being stored (custom test ensembles may store
// them explicitly).
class PathEnsemble {
  public:
    PathEnsemble(const ModelConfig& model, std::shared_ptr<const TimeGrid> grid,
                 std::size_t n_paths, std::uint64_t seed, bool presim_leg = false)
        : grid_(std::move(grid)),
          model_(model),
          n_paths_(n_paths),
          seed_(seed),
          d_(model.state_dim()),
          d1_(model.n_brownian()),
          d2_(model.n_jump()),
          presim_(presim_leg),
          stepper_(std::make_unique<ModelStepper>(model_, *grid_, seed, presim_leg)) {
        if (n_paths_ < 1) throw ConfigError("n_paths must be >= 1");
        const std::size_t n_times = grid_->n_fine_steps() + 1;
        state_.resize(n_times * n_paths_ * d_);
        parallel_blocks(n_paths_, 4096, [&](std::size_t, std::size_t begin, std::size_t end) {
            std::array<double, 2> dw;
            std::array<double, 1> dn;
            ModelStepper::PathState s;
            for (std::size_t n = begin; n < end; ++n) {
                stepper_->init(n, s);
                write_state(0, n, s);
                for (std::size_t t = 0; t < grid_->n_fine_steps(); ++t) {
                    stepper_->step(n, t, s, std::span<double>(dw.data(), d1_),
                                   std::span<double>(dn.data(), d2_));
                    write_state(t + 1, n, s);
                }
            }
        });
    }

    // Test hook: ensemble with explicitly provided states and increments.
    static PathEnsemble from_arrays(std::shared_ptr<const TimeGrid> grid, std::size_t n_paths,
                                    std::size_t d, std::size_t d1, std::size_t d2,
                                    std::vector<double> state, std::vector<double> dw,
                                    std::vector<double> dn, double lambda_p = 0.0) {
        PathEnsemble e;
        e.grid_ = std::move(grid);
        e.n_paths_ = n_paths;
        e.d_ = d;
        e.d1_ = d1;
        e.d2_ = d2;
        e.model_.two_factor.lambda_p = lambda_p;
        const std::size_t n_times = e.grid_->n_fine_steps() + 1;
        if (state.size() != n_times * n_paths * d) throw ConfigError("bad state array size");
        if (dw.size() != e.grid_->n_fine_steps() * n_paths * d1)
            throw ConfigError("bad dw array size");
        if (dn.size() != e.grid_->n_fine_steps() * n_paths * d2)
            throw ConfigError("bad dn array size");
        e.state_ = std::move(state);
        e.stored_dw_ = std::move(dw);
        e.stored_dn_ = std::move(dn);
        e.has_stored_increments_ = true;
        return e;
    }

    const TimeGrid& grid() const { return *grid_; }
    std::shared_ptr<const TimeGrid> grid_ptr() const { return grid_; }
    const ModelConfig& model() const { return model_; }
    std::size_t n_paths() const { return n_paths_; }
    std::size_t state_dim() const { return d_; }
    std::size_t n_brownian() const { return d1_; }
    std::size_t n_jump() const { return d2_; }
    std::uint64_t seed() const { return seed_; }
    double jump_intensity() const { return model_.two_factor.lambda_p; }

    double state(std::size_t t_idx, std::size_t path, std::size_t dim = 0) const {
        return state_[(t_idx * n_paths_ + path) * d_ + dim];
    }
    std::span<const double> state_at(std::size_t t_idx, std::size_t path) const {
        return {&state_[(t_idx * n_paths_ + path) * d_], d_};
    }
    std::span<const double> state_slice(std::size_t t_idx) const {
        return {&state_[t_idx * n_paths_ * d_], n_paths_ * d_};
    }
    std::span<const double> state_at_date(std::size_t date_idx, std::size_t path) const {
        return state_at(grid_->exercise_step(date_idx), path);
    }

    // Increments over fine step t_idx for paths [begin, end); out spans are
    // (end-begin) * d1 (resp. d2), path-major.
    void fill_brownian_increments(std::size_t t_idx, std::size_t begin, std::size_t end,
                                  std::span<double> out) const {
        if (has_stored_increments_) {
            const double* src = &stored_dw_[(t_idx * n_paths_ + begin) * d1_];
            std::copy(src, src + (end - begin) * d1_, out.begin());
            return;
        }
        const double sqrt_h = std::sqrt(grid_->dt(t_idx));
        CounterRng rng(seed_, streams::kBrownian);
        for (std::size_t n = begin; n < end; ++n)
            for (std::size_t i = 0; i < d1_; ++i)
                out[(n - begin) * d1_ + i] =
                    sqrt_h * rng.normal(n, t_idx, static_cast<std::uint32_t>(i));
    }
    void fill_jump_counts(std::size_t t_idx, std::size_t begin, std::size_t end,
                          std::span<double> out) const {
        if (has_stored_increments_) {
            const double* src = &stored_dn_[(t_idx * n_paths_ + begin) * d2_];
            std::copy(src, src + (end - begin) * d2_, out.begin());
            return;
        }
        const double h = grid_->dt(t_idx);
        CounterRng rng(seed_, streams::kJump);
        for (std::size_t n = begin; n < end; ++n)
            for (std::size_t i = 0; i < d2_; ++i)
                out[(n - begin) * d2_ + i] = static_cast<double>(
                    rng.poisson(n, t_idx, static_cast<std::uint32_t>(i), jump_intensity() * h));
    }

    // Debug dump: one CSV per field with rows `path,time,value`.
    void dump_csv(const std::string& dir) const {
        for (std::size_t k = 0; k < d_; ++k) {
            std::ofstream f(dir + "/state_" + std::to_string(k) + ".csv");
            f << "path,time,value\n";
            for (std::size_t n = 0; n < n_paths_; ++n)
                for (std::size_t t = 0; t <= grid_->n_fine_steps(); ++t)
                    f << n << ',' << grid_->time_at(t) << ',' << state(t, n, k) << '\n';
        }
        std::vector<double> buf(n_paths_ * std::max<std::size_t>(d1_, 1));
        for (std::size_t i = 0; i < d1_; ++i) {
            std::ofstream f(dir + "/dw_" + std::to_string(i) + ".csv");
            f << "path,time,value\n";
            for (std::size_t t = 0; t < grid_->n_fine_steps(); ++t) {
                fill_brownian_increments(t, 0, n_paths_, buf);
                for (std::size_t n = 0; n < n_paths_; ++n)
                    f << n << ',' << grid_->time_at(t) << ',' << buf[n * d1_ + i] << '\n';
            }
        }
        for (std::size_t i = 0; i < d2_; ++i) {
            std::ofstream f(dir + "/dn_" + std::to_string(i) + ".csv");
            f << "path,time,value\n";
            for (std::size_t t = 0; t < grid_->n_fine_steps(); ++t) {
                fill_jump_counts(t, 0, n_paths_, buf);
                for (std::size_t n = 0; n < n_paths_; ++n)
                    f << n << ',' << grid_->time_at(t) << ',' << buf[n * d2_ + i] << '\n';
            }
        }
    }

  private:
    PathEnsemble() = default;
    void write_state(std::size_t t_idx, std::size_t path, const ModelStepper::PathState& s) {
        for (std::size_t k = 0; k < d_; ++k)
            state_[(t_idx * n_paths_ + path) * d_ + k] = s.x[k];
    }

    std::shared_ptr<const TimeGrid> grid_;
    ModelConfig model_;
    std::size_t n_paths_ = 0;
    std::uint64_t seed_ = 0;
    std::size_t d_ = 1, d1_ = 0, d2_ = 0;
    bool presim_ = false;
    std::unique_ptr<ModelStepper> stepper_;
    std::vector<double> state_;
    std::vector<double> stored_dw_, stored_dn_;
    bool has_stored_increments_ = false;
};

inline PathEnsemble simulate_gbm(const ModelConfig& model, std::shared_ptr<const TimeGrid> grid,
                                 std::size_t n_paths, std::uint64_t seed) {
    if (model.variant != ModelVariant::GbmDividend)
        throw ConfigError("simulate_gbm requires the gbm_dividend variant");
    return PathEnsemble(model, std::move(grid), n_paths, seed);
}

inline PathEnsemble simulate_two_factor(const ModelConfig& model,
                                        std::shared_ptr<const TimeGrid> grid,
                                        std::size_t n_paths, std::uint64_t seed) {
    if (model.variant != ModelVariant::TwoFactorJump)
        throw ConfigError("simulate_two_factor requires the two_factor_jump variant");
    return PathEnsemble(model, std::move(grid), n_paths, seed);
}

// Scatters the time-0 cross-section with one year of driftless log-diffusion
// (simulated "before" time 0); exercise dates and the grid are unchanged.
inline PathEnsemble presimulate_boundary_ensemble(const ModelConfig& model,
                                                  std::shared_ptr<const TimeGrid> grid,
                                                  std::size_t n_paths, std::uint64_t seed) {
    return PathEnsemble(model, std::move(grid), n_paths, seed, /*presim_leg=*/true);
}

inline PathEnsemble simulate(const ModelConfig& model, std::shared_ptr<const TimeGrid> grid,
                             std::size_t n_paths, std::uint64_t seed) {
    return PathEnsemble(model, std::move(grid), n_paths, seed);
}

}  // namespace robuststop
