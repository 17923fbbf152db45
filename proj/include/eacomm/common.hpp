#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace eacomm {

// Schema version stamped into every JSON document the CLI emits.
inline constexpr int kSchemaVersion = 1;

// Default tolerances: algebraic identities vs. optimizer outputs.
inline constexpr double kTolAlgebra = 1e-9;
inline constexpr double kTolOptim = 1e-6;

// Invalid inputs or broken invariants detected at an interface boundary.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An enumeration or search whose cost exceeds the configured budget.
struct BudgetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

// SplitMix64: derives independent stream seeds from (seed, index) so that
// parallel work items are reproducible regardless of scheduling.
inline std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    return splitmix64(splitmix64(seed) ^ splitmix64(index + 0x51ed2701ab0e9c17ULL));
}

inline unsigned thread_budget() {
    if (const char* env = std::getenv("EACOMM_THREADS")) {
        const long n = std::strtol(env, nullptr, 10);
        if (n >= 1) return static_cast<unsigned>(n);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

// Runs fn(i) for i in [0, n). Work is split into contiguous chunks; results
// must be merged by the caller through per-index storage so the outcome is
// independent of the thread count.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    const unsigned threads = std::min<std::size_t>(thread_budget(), n);
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    std::vector<std::exception_ptr> errors(threads);
    const std::size_t chunk = (n + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
        const std::size_t lo = t * chunk;
        const std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &fn, &err = errors[t]] {
            try {
                for (std::size_t i = lo; i < hi; ++i) fn(i);
            } catch (...) {
                err = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (const std::exception_ptr& err : errors)
        if (err) std::rethrow_exception(err);
}

}  // namespace detail
}  // namespace eacomm
