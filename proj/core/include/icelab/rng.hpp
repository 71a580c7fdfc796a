#pragma once

#include <cstdint>
#include <random>

namespace icelab {

using Rng = std::mt19937_64;

// Independent stream `stream` derived from one master seed.
inline Rng make_rng(std::uint64_t master, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(master), static_cast<std::uint32_t>(master >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    return Rng(seq);
}

// 53-bit uniform in [0,1); avoids the implementation-defined std::uniform_real_distribution.
inline double uniform01(Rng& r) { return static_cast<double>(r() >> 11) * 0x1.0p-53; }

inline bool bernoulli(Rng& r, double p) { return uniform01(r) < p; }

}  // namespace icelab
