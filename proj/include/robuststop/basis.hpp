// Regression function bases: quantile-knot linear splines, their tensor
// products, and spline-plus-linear augmentations of enlarged states.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "robuststop/common.hpp"
#include "robuststop/path_ensemble.hpp"

namespace robuststop {

enum class BasisKind { QuantileSpline, Tensor, Augmented };

inline std::vector<double> odd_percent_levels(int n) {
    // 1%, 3%, ..., (2n-1)% quantile levels.
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = (2.0 * i + 1.0) / 100.0;
    return v;
}
inline std::vector<double> evenly_spaced_levels(double step) {
    std::vector<double> v;
    for (double p = step; p < 1.0 - 0.5 * step; p += step) v.push_back(p);
    return v;
}

namespace detail {

// Type-7 empirical quantile on sorted data.
inline double quantile_sorted(const std::vector<double>& sorted, double p) {
    const std::size_t n = sorted.size();
    if (n == 1) return sorted[0];
    const double h = (n - 1) * p;
    const std::size_t i = std::min(static_cast<std::size_t>(h), n - 2);
    return sorted[i] + (h - i) * (sorted[i + 1] - sorted[i]);
}

// Per-time knot sets from empirical quantiles of one state coordinate.
// Duplicate knots are dropped, so a slice may carry fewer knots than levels;
// evaluation zero-pads to keep the feature count uniform across times.
inline std::vector<std::vector<double>> quantile_knots(const PathEnsemble& ens, std::size_t dim,
                                                       const std::vector<double>& levels,
                                                       std::size_t* n_degenerate) {
    const std::size_t n_times = ens.grid().n_fine_steps() + 1;
    std::vector<std::vector<double>> knots(n_times);
    std::size_t degenerate = 0;
    parallel_blocks(n_times, 8, [&](std::size_t, std::size_t begin, std::size_t end) {
        std::vector<double> slice(ens.n_paths());
        for (std::size_t t = begin; t < end; ++t) {
            for (std::size_t n = 0; n < ens.n_paths(); ++n) slice[n] = ens.state(t, n, dim);
            std::sort(slice.begin(), slice.end());
            std::vector<double> k;
            k.reserve(levels.size());
            for (double p : levels) {
                const double q = quantile_sorted(slice, p);
                if (k.empty() || q > k.back()) k.push_back(q);
            }
            knots[t] = std::move(k);
        }
    });
    for (std::size_t t = 0; t < n_times; ++t)
        if (knots[t].size() < levels.size()) ++degenerate;
    if (n_degenerate) *n_degenerate = degenerate;
    return knots;
}

inline void eval_spline(const std::vector<double>& knots, double x, std::size_t n_levels,
                        double* out) {
    out[0] = 1.0;
    out[1] = x;
    std::size_t i = 0;
    for (; i < knots.size(); ++i) out[2 + i] = std::max(x - knots[i], 0.0);
    for (; i < n_levels; ++i) out[2 + i] = 0.0;
}

// Non-constant univariate block for tensor products: x plus hinges.
inline void eval_spline_nc(const std::vector<double>& knots, double x, std::size_t n_levels,
                           double* out) {
    out[0] = x;
    std::size_t i = 0;
    for (; i < knots.size(); ++i) out[1 + i] = std::max(x - knots[i], 0.0);
    for (; i < n_levels; ++i) out[1 + i] = 0.0;
}

}  // namespace detail

class BasisSpec {
  public:
    // {1, x, (x - q_p)^+} with knots at per-time empirical quantiles.
    static BasisSpec quantile_spline(const PathEnsemble& ens,
                                     const std::vector<double>& levels, std::size_t dim = 0) {
        if (ens.n_paths() < 2) throw ConfigError("quantile basis needs >= 2 samples per slice");
        for (std::size_t i = 0; i < levels.size(); ++i) {
            if (levels[i] <= 0.0 || levels[i] >= 1.0 ||
                (i > 0 && levels[i] <= levels[i - 1]))
                throw ConfigError("quantile levels must be increasing inside (0,1)");
        }
        BasisSpec b;
        b.kind_ = BasisKind::QuantileSpline;
        b.n_levels_ = levels.size();
        b.size_ = 2 + levels.size();
        b.dim_ = dim;
        b.knots_ = detail::quantile_knots(ens, dim, levels, &b.n_degenerate_slices_);
        b.n_times_ = b.knots_.size();
        return b;
    }

    static BasisSpec from_knots(std::vector<std::vector<double>> knots_by_time,
                                std::size_t n_levels) {
        BasisSpec b;
        b.kind_ = BasisKind::QuantileSpline;
        b.n_levels_ = n_levels;
        b.size_ = 2 + n_levels;
        b.knots_ = std::move(knots_by_time);
        b.n_times_ = b.knots_.size();
        return b;
    }

    static BasisSpec constant_only(std::size_t n_times) {
        BasisSpec b;
        b.kind_ = BasisKind::QuantileSpline;
        b.n_levels_ = 0;
        b.size_ = 2;  // {1, x}
        b.knots_.assign(n_times, {});
        b.n_times_ = n_times;
        return b;
    }

    // Full bivariate product basis {1, phi1_i, phi2_j, phi1_i * phi2_j}.
    static BasisSpec tensor(const BasisSpec& b1, const BasisSpec& b2) {
        if (b1.kind_ != BasisKind::QuantileSpline || b2.kind_ != BasisKind::QuantileSpline)
            throw ConfigError("tensor basis needs univariate spline factors");
        if (b1.n_times_ != b2.n_times_) throw ConfigError("tensor factors have different time axes");
        BasisSpec b;
        b.kind_ = BasisKind::Tensor;
        b.n_times_ = b1.n_times_;
        b.m1_ = 1 + b1.n_levels_;  // non-constant features per asset
        b.m2_ = 1 + b2.n_levels_;
        b.knots_ = b1.knots_;
        b.knots2_ = b2.knots_;
        b.n_levels_ = b1.n_levels_;
        b.n_levels2_ = b2.n_levels_;
        b.dim_ = b1.dim_;
        b.dim2_ = b2.dim_;
        b.size_ = 1 + b.m1_ + b.m2_ + b.m1_ * b.m2_;
        return b;
    }

    // Spline features of the base state followed by raw linear coordinates of
    // the augmentation (martingale values, running dual maximum, ...).
    static BasisSpec augmented(BasisSpec x_basis, std::size_t n_extra) {
        if (x_basis.kind_ != BasisKind::QuantileSpline)
            throw ConfigError("augmented basis wraps a univariate spline");
        BasisSpec b = std::move(x_basis);
        b.kind_ = BasisKind::Augmented;
        b.n_extra_ = n_extra;
        b.size_ = 2 + b.n_levels_ + n_extra;
        return b;
    }

    std::size_t size() const { return size_; }
    std::size_t n_times() const { return n_times_; }
    std::size_t n_extra() const { return n_extra_; }
    std::size_t n_degenerate_slices() const { return n_degenerate_slices_; }
    const std::vector<double>& knots_at(std::size_t t) const { return knots_[t]; }

    // Writes exactly size() features; feature 0 is the constant 1.
    void evaluate(std::size_t t_idx, std::span<const double> state,
                  std::span<const double> extra, std::span<double> out) const {
        switch (kind_) {
            case BasisKind::QuantileSpline:
                detail::eval_spline(knots_[t_idx], state[dim_], n_levels_, out.data());
                break;
            case BasisKind::Augmented: {
                detail::eval_spline(knots_[t_idx], state[dim_], n_levels_, out.data());
                double* o = out.data() + 2 + n_levels_;
                for (std::size_t i = 0; i < n_extra_; ++i) o[i] = extra[i];
                break;
            }
            case BasisKind::Tensor: {
                double* u1 = out.data() + 1;
                double* u2 = u1 + m1_;
                detail::eval_spline_nc(knots_[t_idx], state[dim_], n_levels_, u1);
                detail::eval_spline_nc(knots2_[t_idx], state[dim2_], n_levels2_, u2);
                out[0] = 1.0;
                double* prod = u2 + m2_;
                for (std::size_t i = 0; i < m1_; ++i)
                    for (std::size_t j = 0; j < m2_; ++j) prod[i * m2_ + j] = u1[i] * u2[j];
                break;
            }
        }
    }
    void evaluate(std::size_t t_idx, std::span<const double> state,
                  std::span<double> out) const {
        evaluate(t_idx, state, {}, out);
    }

  private:
    BasisKind kind_ = BasisKind::QuantileSpline;
    std::size_t size_ = 0, n_times_ = 0;
    std::size_t n_levels_ = 0, n_levels2_ = 0;
    std::size_t m1_ = 0, m2_ = 0;
    std::size_t dim_ = 0, dim2_ = 1;
    std::size_t n_extra_ = 0;
    std::size_t n_degenerate_slices_ = 0;
    std::vector<std::vector<double>> knots_, knots2_;
};

}  // namespace robuststop
