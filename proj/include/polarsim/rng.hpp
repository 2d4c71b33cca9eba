#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace polarsim {

/// SplitMix64 step. Used for seed derivation and as a small counter-based
/// stream in the graph generator. Constants from Steele et al. (2014).
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

/// Deterministic child seed for (base, role, index). Every source of
/// randomness in the toolkit draws its seed through this function so that a
/// single base seed reproduces a whole experiment.
inline std::uint64_t derive_seed(std::uint64_t base, std::string_view role, std::uint64_t index = 0) {
    std::uint64_t s = base ^ fnv1a64(role);
    std::uint64_t a = splitmix64(s);
    s ^= index + 0x9e3779b97f4a7c15ULL;
    std::uint64_t b = splitmix64(s);
    return a ^ (b + 0x2545f4914f6cdd1dULL);
}

/// Unbiased integer in [0, n) from a 64-bit engine, by rejection. Kept
/// in-tree because std::uniform_int_distribution is not specified
/// bit-for-bit across standard libraries.
template <class Engine>
std::uint64_t sample_below(Engine& rng, std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
    for (;;) {
        const std::uint64_t x = rng();
        if (x >= threshold) return x % n;
    }
}

/// Uniform double in (0, 1], 53-bit resolution.
template <class Engine>
double sample_unit_open(Engine& rng) {
    return static_cast<double>((rng() >> 11) + 1) * 0x1.0p-53;
}

/// Counter-based generator with the splitmix64 transition; cheap to seed per
/// row/worker, adequate for Bernoulli gap sampling.
class SplitMix64 {
public:
    using result_type = std::uint64_t;
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
    result_type operator()() { return splitmix64(state_); }
    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~0ULL; }

private:
    std::uint64_t state_;
};

}  // namespace polarsim
