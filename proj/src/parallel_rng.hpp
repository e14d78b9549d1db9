#pragma once

// Internal helpers shared by the seeded monte-carlo engines.  Trials are
// pre-partitioned into fixed-size blocks; every block owns a generator
// derived from the master seed and the block counter, so results are
// bit-identical for any worker count.

#include <atomic>
#include <cstdint>
#include <limits>
#include <random>
#include <thread>
#include <vector>

namespace fplab::detail {

inline constexpr std::uint64_t kBlockTrials = 4096;

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

inline std::uint64_t block_seed(std::uint64_t master, std::uint64_t block) {
    return splitmix64(master ^ splitmix64(block + 1));
}

// Uniform integer in [0, m) by rejection; portable because mt19937_64's
// output sequence is pinned by the standard.
inline std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t m) {
    std::uint64_t limit =
        std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % m;
    for (;;) {
        std::uint64_t r = rng();
        if (r < limit) return r % m;
    }
}

// Uniform double in [0, 1) from the top 53 bits.
inline double uniform_unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Runs per_block(0..blocks-1) across `workers` threads; block results must be
// written to per-block slots so the merge stays order-independent.
template <typename Fn>
void run_blocks(std::uint64_t blocks, int workers, const Fn& per_block) {
    if (workers <= 1 || blocks <= 1) {
        for (std::uint64_t b = 0; b < blocks; ++b) per_block(b);
        return;
    }
    std::atomic<std::uint64_t> next{0};
    auto worker = [&] {
        for (;;) {
            std::uint64_t b = next.fetch_add(1);
            if (b >= blocks) return;
            per_block(b);
        }
    };
    std::vector<std::thread> pool;
    std::uint64_t count = std::min<std::uint64_t>(blocks, static_cast<std::uint64_t>(workers));
    pool.reserve(count);
    for (std::uint64_t w = 0; w < count; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
}

// Compensated summation; keeps identity checks at rounding level even for
// long sequences.
class KahanSum {
public:
    void add(double value) {
        double y = value - compensation_;
        double t = sum_ + y;
        compensation_ = (t - sum_) - y;
        sum_ = t;
    }

    double value() const { return sum_; }

private:
    double sum_ = 0;
    double compensation_ = 0;
};

} // namespace fplab::detail
