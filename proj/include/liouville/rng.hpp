#pragma once

#include <cstdint>

namespace liouville {

// Counter-based deterministic generator: every variate is a pure function of
// (seed, stream, counter), so parallel evaluation order cannot change the
// sampled values. The mixer is the splitmix64 finalizer applied to a combined
// key; statistically adequate for Monte Carlo quadrature.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream)
        : key_(mix(seed ^ 0x9e3779b97f4a7c15ull) ^ mix(stream + 0x6a09e667f3bcc909ull)) {}

    // 64 mixed bits for counter value n.
    std::uint64_t bits(std::uint64_t counter) const {
        return mix(key_ + 0xbf58476d1ce4e5b9ull * (counter + 1));
    }

    // Uniform double in [0, 1).
    double uniform(std::uint64_t counter) const {
        return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ull;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    std::uint64_t key_;
};

// Stable 64-bit hash for deriving stream ids from small integer tuples.
inline std::uint64_t hash_combine(std::uint64_t h, std::uint64_t v) {
    h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    return h;
}

} // namespace liouville
