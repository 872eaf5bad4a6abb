// Two-level time grid: exercise dates embedded in a fine simulation grid.
#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "robuststop/common.hpp"

namespace robuststop {

// Exercise dates t_0 = 0 < ... < t_J = T, each interval split into
// `steps_per_interval` equal fine steps. Fine times are indexed globally,
// 0 .. n_fine_steps(); exercise date j sits at fine index j * steps_per_interval.
class TimeGrid {
  public:
    TimeGrid(std::vector<double> exercise_dates, int steps_per_interval)
        : dates_(std::move(exercise_dates)), n0_(steps_per_interval) {
        if (dates_.size() < 2) throw ConfigError("time grid needs at least two exercise dates");
        if (n0_ < 1) throw ConfigError("steps_per_interval must be >= 1");
        for (std::size_t j = 1; j < dates_.size(); ++j) {
            if (!(dates_[j] > dates_[j - 1]))
                throw ConfigError("exercise dates not strictly increasing at index " +
                                  std::to_string(j));
        }
        fine_.reserve(n_intervals() * static_cast<std::size_t>(n0_) + 1);
        for (std::size_t j = 0; j + 1 < dates_.size(); ++j) {
            const double h = (dates_[j + 1] - dates_[j]) / n0_;
            for (int p = 0; p < n0_; ++p) fine_.push_back(dates_[j] + p * h);
        }
        fine_.push_back(dates_.back());
    }

    static TimeGrid equidistant(double horizon, int n_dates, int steps_per_interval) {
        if (n_dates < 2) throw ConfigError("need at least two exercise dates");
        std::vector<double> dates(n_dates);
        for (int j = 0; j < n_dates; ++j) dates[j] = horizon * j / (n_dates - 1);
        return TimeGrid(std::move(dates), steps_per_interval);
    }

    // Same dates, each interval refined by `factor` additional subdivisions.
    TimeGrid refined(int factor) const { return TimeGrid(dates_, n0_ * factor); }

    const std::vector<double>& exercise_dates() const { return dates_; }
    const std::vector<double>& fine_times() const { return fine_; }
    int steps_per_interval() const { return n0_; }
    std::size_t n_intervals() const { return dates_.size() - 1; }
    std::size_t n_dates() const { return dates_.size(); }
    std::size_t n_fine_steps() const { return fine_.size() - 1; }

    double horizon() const { return dates_.back(); }
    double time_at(std::size_t fine_idx) const { return fine_[fine_idx]; }
    std::size_t exercise_step(std::size_t date_idx) const {
        return date_idx * static_cast<std::size_t>(n0_);
    }
    std::size_t interval_of_step(std::size_t fine_idx) const { return fine_idx / n0_; }
    // Step width of the interval containing fine step `fine_idx`.
    double dt(std::size_t fine_idx) const {
        const std::size_t j = std::min(interval_of_step(fine_idx), n_intervals() - 1);
        return (dates_[j + 1] - dates_[j]) / n0_;
    }
    // Index of the last exercise date <= fine time index (for state lookups).
    std::size_t date_index_of_step(std::size_t fine_idx) const {
        return std::min(fine_idx / n0_, dates_.size() - 1);
    }

  private:
    std::vector<double> dates_;
    int n0_;
    std::vector<double> fine_;
};

}  // namespace robuststop
