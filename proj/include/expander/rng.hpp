#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "expander/errors.hpp"

// Seedable, platform-independent randomness. Every random quantity in this
// project is a pure function of (seed, stream index), so results are
// bit-identical across platforms, runs and thread counts.

namespace expander::rng {

/// splitmix64 finalizer (Vigna). Bijective 64-bit mix.
inline uint64_t mix64(uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// One step of the splitmix64 sequence.
inline uint64_t splitmix64_next(uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    return mix64(state);
}

/// Substream key derivation: stream `index` of master seed `seed`.
/// Column j of a matrix generated with seed s uses fold(s, j); Monte Carlo
/// trial t at set size k uses fold(fold(seed, k), t).
inline uint64_t fold(uint64_t seed, uint64_t index) {
    return mix64(seed ^ mix64(index + 0x9E3779B97F4A7C15ULL));
}

/// xoshiro256** (Blackman & Vigna), seeded through splitmix64.
class Xoshiro256StarStar {
public:
    using result_type = uint64_t;

    explicit Xoshiro256StarStar(uint64_t seed) {
        uint64_t sm = seed;
        for (auto& word : state_) word = splitmix64_next(sm);
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<uint64_t>::max(); }

    result_type operator()() {
        const uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

private:
    static constexpr uint64_t rotl(uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::array<uint64_t, 4> state_{};
};

/// Exact uniform draw from [0, bound) via Lemire's multiply-with-rejection.
inline uint64_t uniform_below(Xoshiro256StarStar& gen, uint64_t bound) {
    if (bound == 0) throw DomainError("uniform_below: bound must be positive");
    unsigned __int128 m = static_cast<unsigned __int128>(gen()) * bound;
    auto low = static_cast<uint64_t>(m);
    if (low < bound) {
        const uint64_t threshold = -bound % bound;
        while (low < threshold) {
            m = static_cast<unsigned __int128>(gen()) * bound;
            low = static_cast<uint64_t>(m);
        }
    }
    return static_cast<uint64_t>(m >> 64);
}

/// Uniform d-subsets of [0, n) by partial Fisher-Yates over a persistent pool.
/// The d swaps are reverted after each draw, so a sample costs O(d log d) and
/// depends only on the generator stream, never on sampler history.
class SubsetSampler {
public:
    explicit SubsetSampler(uint32_t n) : pool_(n) {
        for (uint32_t i = 0; i < n; ++i) pool_[i] = i;
    }

    uint32_t universe() const { return static_cast<uint32_t>(pool_.size()); }

    /// Appends d distinct sorted values from [0, n) to `out`.
    void sample(uint32_t d, Xoshiro256StarStar& gen, std::vector<uint32_t>& out) {
        const auto n = static_cast<uint32_t>(pool_.size());
        if (d > n) throw InfeasibleError("SubsetSampler: d exceeds universe size");
        swaps_.clear();
        for (uint32_t i = 0; i < d; ++i) {
            const auto j = i + static_cast<uint32_t>(uniform_below(gen, n - i));
            swaps_.emplace_back(i, j);
            std::swap(pool_[i], pool_[j]);
        }
        const size_t first = out.size();
        out.insert(out.end(), pool_.begin(), pool_.begin() + d);
        for (auto it = swaps_.rbegin(); it != swaps_.rend(); ++it)
            std::swap(pool_[it->first], pool_[it->second]);
        std::sort(out.begin() + first, out.end());
    }

private:
    std::vector<uint32_t> pool_;
    std::vector<std::pair<uint32_t, uint32_t>> swaps_;
};

}  // namespace expander::rng
