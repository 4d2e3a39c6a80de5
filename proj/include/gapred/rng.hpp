#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "gapred/util.hpp"

namespace gapred {

// SplitMix64. Self-contained so that seeded runs are byte-identical across
// platforms; the standard library distributions make no such promise.
class rng {
public:
    explicit rng(u64 seed) : state_(seed) {}

    u64 next() {
        u64 z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, bound), bound > 0, via rejection
    u64 below(u64 bound) {
        u64 threshold = (0 - bound) % bound;
        for (;;) {
            u64 r = next();
            if (r >= threshold) return r % bound;
        }
    }

    bool coin() { return (next() & 1u) != 0; }

    double unit() { return (next() >> 11) * (1.0 / 9007199254740992.0); }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) {
            size_t j = static_cast<size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    // k distinct elements of [0, m), sorted ascending
    std::vector<u64> subset(u64 m, u64 k) {
        std::vector<u64> pool(m);
        for (u64 i = 0; i < m; ++i) pool[i] = i;
        // partial Fisher-Yates: first k entries become the sample
        for (u64 i = 0; i < k; ++i) {
            u64 j = i + below(m - i);
            std::swap(pool[i], pool[j]);
        }
        pool.resize(k);
        std::sort(pool.begin(), pool.end());
        return pool;
    }

private:
    u64 state_;
};

inline u64 fnv1a64(const std::string& s) {
    u64 h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

// Per-stage seed stream: one master seed, independent labeled substreams.
inline u64 derive_seed(u64 master, const std::string& label) {
    rng r(master ^ fnv1a64(label));
    return r.next();
}

} // namespace gapred
