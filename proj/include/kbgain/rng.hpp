#pragma once

#include <cmath>
#include <cstdint>

namespace kbgain::rng {

// splitmix64 finalizer; statistically strong bit mixer for counter streams.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

inline std::uint64_t key3(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    return mix64(mix64(mix64(a) ^ b) ^ c);
}

// Uniform in (0, 1]; the low bit is forced so log() stays finite.
inline double uniform01(std::uint64_t h) {
    return static_cast<double>((h >> 11) | 1ull) * 0x1.0p-53;
}

// Two independent standard normals from a keyed counter (Box-Muller).
inline void normal_pair(std::uint64_t key, std::uint64_t counter, double& z0, double& z1) {
    const double u1 = uniform01(mix64(key ^ (2 * counter + 1)));
    const double u2 = uniform01(mix64(key ^ (2 * counter + 2)));
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 6.283185307179586476925286766559 * u2;
    z0 = r * std::cos(theta);
    z1 = r * std::sin(theta);
}

} // namespace kbgain::rng
