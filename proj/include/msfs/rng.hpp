#pragma once

#include <cstdint>
#include <cstring>

namespace msfs {

// Deterministic RNG (SplitMix64). Used instead of <random> distributions so
// that streams are bit-identical across standard libraries and platforms.
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Uniform double in the open interval (0,1).
    double next_open01() {
        return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
    }
};

inline std::uint64_t mix64(std::uint64_t x) {
    x ^= x >> 33;
    x *= 0xFF51AFD7ED558CCDull;
    x ^= x >> 33;
    x *= 0xC4CEB9FE1A85EC53ull;
    x ^= x >> 33;
    return x;
}

inline std::uint64_t bits_of(double d) {
    std::uint64_t u;
    std::memcpy(&u, &d, sizeof u);
    return u;
}

// Order-sensitive fold of a value into a running hash. Seeds derived with
// this depend only on the folded values, never on enumeration order.
inline std::uint64_t hash_fold(std::uint64_t h, std::uint64_t v) {
    return mix64(h ^ mix64(v + 0x9E3779B97F4A7C15ull));
}

} // namespace msfs
