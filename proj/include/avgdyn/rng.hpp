#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace avgdyn {

// 64-bit finalizer used to derive engine seeds from (master seed, stream id).
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Deterministic RNG wrapper. The engine (mt19937_64) and every sampling
// routine below are fully specified, so a (master_seed, stream) pair yields
// the same draws on any platform and under any worker count.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Stream derivation: seed = splitmix64(master ^ splitmix64(stream + 1)).
    static Rng for_stream(std::uint64_t master_seed, std::uint64_t stream) {
        return Rng(splitmix64(master_seed ^ splitmix64(stream + 1)));
    }

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, bound). Unbiased via rejection.
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            const std::uint64_t r = engine_();
            if (r >= threshold) return r % bound;
        }
    }

    int index(int bound) { return static_cast<int>(below(static_cast<std::uint64_t>(bound))); }

    // Uniform double in [0,1) with 53 random bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    bool bernoulli(double p) { return uniform01() < p; }

    // First k entries of a partial Fisher-Yates shuffle of `items` (copied).
    // Order of the selected elements is part of the contract (event replay).
    void sample_without_replacement(const std::vector<int>& items, int k, std::vector<int>& out) {
        scratch_ = items;
        out.resize(static_cast<std::size_t>(k));
        const int n = static_cast<int>(scratch_.size());
        for (int i = 0; i < k; ++i) {
            const int j = i + index(n - i);
            std::swap(scratch_[i], scratch_[j]);
            out[static_cast<std::size_t>(i)] = scratch_[i];
        }
    }

private:
    std::mt19937_64 engine_;
    std::vector<int> scratch_;
};

}  // namespace avgdyn
