#pragma once

#include <cmath>
#include <cstdint>

namespace armlab {

// splitmix64 step; also used to derive per-path seeds so that path streams
// are independent of thread count and scheduling.
inline std::uint64_t splitmix64(std::uint64_t& s) {
    std::uint64_t z = (s += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// seed_path = mix(seed, path_index)
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t path_index) {
    std::uint64_t s = seed ^ (0x6a09e667f3bcc909ULL + path_index * 0x9e3779b97f4a7c15ULL);
    splitmix64(s);
    return splitmix64(s);
}

// xoshiro256++, seeded from a single 64-bit value via splitmix64.
class Xoshiro256pp {
  public:
    explicit Xoshiro256pp(std::uint64_t seed = 1) { reseed(seed); }

    void reseed(std::uint64_t seed) {
        std::uint64_t s = seed;
        for (auto& w : state_) w = splitmix64(s);
    }

    std::uint64_t next() {
        auto rotl = [](std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); };
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // uniform on (0,1]; never returns 0 so log() is always safe
    double uniform_pos() { return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53; }

    // uniform on [0,1)
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  private:
    std::uint64_t state_[4];
};

// Standard normal stream via Box-Muller (the fixed, documented transform:
// z1 = sqrt(-2 ln u1) cos(2 pi u2), z2 = sqrt(-2 ln u1) sin(2 pi u2)).
class GaussStream {
  public:
    explicit GaussStream(std::uint64_t seed = 1) : gen_(seed) {}

    double next() {
        if (have_cache_) {
            have_cache_ = false;
            return cache_;
        }
        double u1 = gen_.uniform_pos();
        double u2 = gen_.uniform01();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 6.283185307179586476925286766559 * u2;
        cache_ = r * std::sin(a);
        have_cache_ = true;
        return r * std::cos(a);
    }

    double uniform_pos() { return gen_.uniform_pos(); }
    double uniform01() { return gen_.uniform01(); }

  private:
    Xoshiro256pp gen_;
    bool have_cache_ = false;
    double cache_ = 0.0;
};

}  // namespace armlab
