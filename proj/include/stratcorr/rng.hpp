#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace stratcorr {

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

// Deterministic child-seed derivation: mix (master, scope, index) through
// splitmix64. Replicate r of a bootstrap uses scope = "inst|venue|month"
// and index = r; parallel and serial runs therefore agree bit for bit.
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view scope, std::uint64_t index) {
    std::uint64_t s = master ^ fnv1a64(scope);
    splitmix64(s);
    s ^= 0x6a09e667f3bcc909ULL + index;
    std::uint64_t out = splitmix64(s);
    return out ^ splitmix64(s);
}

// Unbiased draw in [0, n) by rejection; avoids the implementation-defined
// std::uniform_int_distribution so shuffles reproduce across toolchains.
inline std::uint64_t bounded_uint(std::mt19937_64& rng, std::uint64_t n) {
    if (n <= 1) return 0;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % n;
}

template <typename T>
void fisher_yates(std::vector<T>& v, std::mt19937_64& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(bounded_uint(rng, i));
        std::swap(v[i - 1], v[j]);
    }
}

}  // namespace stratcorr
