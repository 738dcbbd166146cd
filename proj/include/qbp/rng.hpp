#pragma once

// Deterministic random stream. The engine is std::mt19937_64 (bit-exact across
// platforms); uniform doubles are derived from raw engine output rather than
// std distributions, whose results are implementation-defined.

#include <cstdint>
#include <random>

namespace qbp {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    // Independent per-trial stream: results depend only on (master, trial), so
    // scheduling and worker count never change a trial's randomness.
    static Rng for_trial(std::uint64_t master, std::uint64_t trial) {
        return Rng(splitmix64(splitmix64(master) ^ splitmix64(trial + 0x9E3779B97F4A7C15ull)));
    }

    std::uint64_t next_u64() { return eng_(); }

    // Uniform in [0, 1) with 53-bit resolution.
    double next_unit() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return next_unit() < p; }

private:
    std::mt19937_64 eng_;
};

} // namespace qbp
