#pragma once

// Deterministic random numbers: splitmix64 for seed derivation and
// xoshiro256++ for the per-path streams. Draws are generated from explicit
// bit manipulation, never from std::*_distribution, so a seed produces the
// same path on every platform.

#include <cmath>
#include <cstdint>

namespace hawkes {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Stream seed for replication `index` under a master seed. Used by the
// experiment driver so results do not depend on worker scheduling.
inline std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t index) {
    std::uint64_t s = master_seed ^ (0xA0761D6478BD642FULL + index * 0xE7037ED1A0B428DBULL);
    return splitmix64(s);
}

class Xoshiro256pp {
  public:
    explicit Xoshiro256pp(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& w : s_) w = splitmix64(sm);
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform on the open interval (0, 1); both endpoints excluded so
    // log(u) and inverse transforms are always finite.
    double uniform() {
        return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
    }

    double exponential(double rate) { return -std::log(uniform()) / rate; }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::uint64_t s_[4];
};

}  // namespace hawkes
