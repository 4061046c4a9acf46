#pragma once

#include <cstdint>
#include <random>

namespace qfl::common {

// Uniform double in [0, 1) from the top 53 bits of one engine draw.
// Used instead of std::uniform_real_distribution / std::discrete_distribution
// so that identical seeds give bit-identical streams on any conforming
// implementation (mt19937_64 itself is fully specified by the standard,
// the distribution adapters are not).
inline double uniform01(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

// Unbiased integer in [0, n) by rejection.
inline std::uint64_t bounded(std::mt19937_64& gen, std::uint64_t n) {
    if (n == 0) return 0;
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t x;
    do {
        x = gen();
    } while (x >= limit);
    return x % n;
}

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// Deterministic stream splitting: one master seed fans out into
// per-(client, epoch, component, ...) sub-seeds without correlation.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a,
                                 std::uint64_t b = 0, std::uint64_t c = 0) {
    std::uint64_t h = splitmix64(master ^ 0x6a09e667f3bcc909ull);
    h = splitmix64(h ^ a);
    h = splitmix64(h ^ b);
    h = splitmix64(h ^ c);
    return h;
}

}  // namespace qfl::common
