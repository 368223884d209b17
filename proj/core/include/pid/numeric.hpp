#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <thread>
#include <vector>

namespace pid {

// Compensated (Kahan) accumulator. Aggregation reduces in a fixed order,
// so results do not depend on how work was split across threads.
class KahanSum {
  public:
    void add(double x) {
        double y = x - carry_;
        double t = sum_ + y;
        carry_ = (t - sum_) - y;
        sum_ = t;
    }
    double value() const { return sum_; }

  private:
    double sum_ = 0.0;
    double carry_ = 0.0;
};

// Uniform double in [0,1) from the top 53 bits of an mt19937_64 draw.
// std::generate_canonical is not bit-stable across standard libraries;
// this mapping is.
inline double uniform01(std::mt19937_64 &rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Runs fn(i) for i in [0, n) on up to `threads` std::threads in contiguous
// chunks. Callers write into per-index slots, so the result is independent
// of the schedule.
inline void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)> &fn) {
    if (n == 0) return;
    if (threads <= 1 || n == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    unsigned workers = static_cast<unsigned>(std::min<std::size_t>(threads, n));
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::size_t chunk = (n + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        std::size_t lo = w * chunk;
        std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &fn] {
            for (std::size_t i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto &t : pool) t.join();
}

// FNV-1a, used for parameter fingerprints embedded in output sidecars.
inline std::uint64_t fnv1a64(const void *data, std::size_t len, std::uint64_t seed = 0xcbf29ce484222325ull) {
    const auto *bytes = static_cast<const unsigned char *>(data);
    std::uint64_t h = seed;
    for (std::size_t i = 0; i < len; ++i) {
        h ^= bytes[i];
        h *= 0x100000001b3ull;
    }
    return h;
}

} // namespace pid
