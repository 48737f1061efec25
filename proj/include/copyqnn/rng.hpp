#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

namespace copyqnn::rng {

/// splitmix64 step; the standard 64-bit finalizer used for seed derivation.
inline std::uint64_t splitmix64(std::uint64_t &state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// FNV-1a over a tag string, so seed streams for different purposes
/// ("query", "augment", ...) never collide.
inline std::uint64_t hash_tag(std::string_view tag) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : tag) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

/// Deterministically derives a child seed from a base seed, a purpose tag,
/// and coordinate words (round, sample index, epoch, ...). Parallel work
/// items seeded this way are independent of scheduling order.
inline std::uint64_t derive_seed(std::uint64_t base, std::string_view tag,
                                 std::initializer_list<std::uint64_t> coords = {}) {
    std::uint64_t s = base ^ hash_tag(tag);
    std::uint64_t out = splitmix64(s);
    for (std::uint64_t c : coords) {
        s ^= c + 0x9e3779b97f4a7c15ULL;
        out = splitmix64(s);
    }
    return out;
}

inline std::mt19937_64 engine(std::uint64_t seed) { return std::mt19937_64(seed); }

inline std::mt19937_64 engine(std::uint64_t base, std::string_view tag,
                              std::initializer_list<std::uint64_t> coords = {}) {
    return std::mt19937_64(derive_seed(base, tag, coords));
}

/// Bit pattern of a double, for folding real-valued coordinates (query hour)
/// into a seed derivation.
inline std::uint64_t bits_of(double x) {
    std::uint64_t u;
    static_assert(sizeof(u) == sizeof(x));
    __builtin_memcpy(&u, &x, sizeof(u));
    return u;
}

} // namespace copyqnn::rng
