// Shared error types and the deterministic block-parallel helper.
#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace robuststop {

// Raised for invalid configuration / inputs (CLI exit code 2).
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Raised for numerical failures such as rank-deficient regressions or
// invalid measure changes (CLI exit code 3).
struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

inline int max_threads() {
    if (const char* env = std::getenv("ROBUSTSTOP_THREADS")) {
        int t = std::atoi(env);
        if (t >= 1) return t;
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

// Runs fn(block_index, begin, end) over fixed-size blocks of [0, n).
// Block boundaries do not depend on the worker count, so any per-block
// results can be reduced in block order to give thread-count independent
// (bit-identical) totals.
inline void parallel_blocks(std::size_t n, std::size_t block_size,
                            const std::function<void(std::size_t, std::size_t, std::size_t)>& fn) {
    if (n == 0) return;
    const std::size_t n_blocks = (n + block_size - 1) / block_size;
    const int n_threads = std::min<std::size_t>(max_threads(), n_blocks);
    if (n_threads <= 1) {
        for (std::size_t b = 0; b < n_blocks; ++b)
            fn(b, b * block_size, std::min(n, (b + 1) * block_size));
        return;
    }
    std::vector<std::thread> workers;
    workers.reserve(n_threads);
    std::atomic<std::size_t> next{0};
    for (int t = 0; t < n_threads; ++t) {
        workers.emplace_back([&]() {
            for (;;) {
                std::size_t b = next.fetch_add(1);
                if (b >= n_blocks) return;
                fn(b, b * block_size, std::min(n, (b + 1) * block_size));
            }
        });
    }
    for (auto& w : workers) w.join();
}

}  // namespace robuststop
