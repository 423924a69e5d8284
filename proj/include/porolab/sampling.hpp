#pragma once

#include <cstdint>
#include <vector>

namespace porolab {

// splitmix64 (Steele, Lea, Flood 2014). The one PRNG used anywhere in the
// project; every sampling decision derives from a seed through it, so runs
// are reproducible across implementations.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Uniform double in [0, 1).
inline double splitmix64_unit(std::uint64_t& state) {
    return static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53;
}

// Picks m of n positions by constant stride from a seeded offset. Returns
// sorted unique positions; all of 0..n-1 when m >= n.
inline std::vector<std::size_t> stride_sample(std::size_t n, std::size_t m,
                                              std::uint64_t seed) {
    std::vector<std::size_t> out;
    if (n == 0) return out;
    if (m >= n) {
        out.resize(n);
        for (std::size_t i = 0; i < n; ++i) out[i] = i;
        return out;
    }
    std::uint64_t state = seed;
    const std::size_t offset = static_cast<std::size_t>(splitmix64(state) % n);
    out.reserve(m);
    for (std::size_t j = 0; j < m; ++j) {
        // floor(j*n/m) is strictly increasing for m < n, so positions are unique.
        const std::size_t pos = (offset + (j * n) / m) % n;
        out.push_back(pos);
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace porolab
