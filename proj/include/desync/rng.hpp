#pragma once

#include <cstdint>
#include <random>

namespace desync {

// splitmix64 step (Vigna). Used only to expand seeds into engine state.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Seedable deterministic generator. mt19937_64 has a standard-defined
// sequence, and doubles are produced from raw bits rather than through
// std::uniform_real_distribution (whose output is implementation-defined),
// so streams replay bit-identically everywhere.
class Rng {
public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t s = seed;
        engine_.seed(splitmix64(s));
    }

    // Independent per-node substream: traces do not depend on the order in
    // which node streams are consumed.
    static Rng for_node(std::uint64_t run_seed, int node_id) {
        std::uint64_t s = run_seed;
        std::uint64_t a = splitmix64(s);
        s = run_seed ^ (0xA0761D6478BD642Full * static_cast<std::uint64_t>(node_id + 1));
        std::uint64_t b = splitmix64(s);
        return Rng(a ^ (b + 0x9E3779B97F4A7C15ull));
    }

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1), 53-bit resolution.
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform in [lo, hi).
    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform();
    }

private:
    std::mt19937_64 engine_;
};

} // namespace desync
