#pragma once

#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

namespace perturb {

// Seed derivation and random generation.
//
// Every run is driven by one 64-bit base seed.  Child streams are derived as
//   child(base, label, index) = splitmix64(splitmix64(base ^ fnv1a64(label)) + index)
// which is fixed across platforms and documented here as part of the
// reproducibility contract: identical (base, label, index) always yields the
// identical stream, independent of evaluation order.

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline uint64_t fnv1a64(std::string_view s) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

struct Seed {
    uint64_t base = 0;

    Seed child(std::string_view label, uint64_t index = 0) const {
        return Seed{splitmix64(splitmix64(base ^ fnv1a64(label)) + index)};
    }
};

// xoshiro256** seeded via splitmix64.  We intentionally avoid the standard
// <random> distributions: engines are portable but distributions are not,
// and bit-exact reproducibility across platforms is a contract here.
class Rng {
public:
    explicit Rng(Seed seed) {
        uint64_t x = seed.base;
        for (auto& si : s_) si = x = splitmix64(x);
    }

    uint64_t next_u64() {
        const uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // uniform in [0, bound) by rejection (Lemire); bound > 0
    uint64_t next_below(uint64_t bound) {
        uint64_t x, r;
        do {
            x = next_u64();
            r = x % bound;
        } while (x - r > 0ULL - bound);
        return r;
    }
    int next_int(int bound) { return static_cast<int>(next_below(static_cast<uint64_t>(bound))); }

    // uniform double in [0, 1) with 53 random bits
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) {
        if (p <= 0.0) return false;
        if (p >= 1.0) return true;
        return next_double() < p;
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) {
            size_t j = next_below(i);
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    uint64_t s_[4];
};

}  // namespace perturb
