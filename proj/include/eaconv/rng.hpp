#pragma once

#include <cstdint>
#include <random>

namespace eaconv {

/// splitmix64 output mix. Used to derive independent per-run seeds.
constexpr std::uint64_t splitmix64_mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
}

/// Seed of run r's generator, a pure function of (seed, r). Run streams are
/// the r-th outputs of a splitmix64 sequence started at the master seed, so
/// results do not depend on how runs are scheduled across workers.
constexpr std::uint64_t run_seed(std::uint64_t master_seed, std::uint64_t run_index) {
    return splitmix64_mix(master_seed + (run_index + 1) * 0x9E3779B97F4A7C15ULL);
}

/// Pinned per-run generator: mt19937_64 with splitmix64-derived seeding and
/// hand-rolled uniform mappings (the std distributions are not reproducible
/// across standard libraries).
class RunRng {
public:
    RunRng(std::uint64_t master_seed, std::uint64_t run_index)
        : engine_(run_seed(master_seed, run_index)) {}

    /// Uniform double in [0, 1), 53 random bits.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n), fixed-point multiply (no rejection).
    std::uint64_t below(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(engine_()) * n) >> 64);
    }

    bool bernoulli(double p) { return uniform01() < p; }

private:
    std::mt19937_64 engine_;
};

}  // namespace eaconv
