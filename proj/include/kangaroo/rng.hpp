// Counter-based splittable pseudo-random generator.
//
// Every value is a pure function of (seed, stream words, counter), so trials can
// be replayed or executed on any number of workers with identical results.
#pragma once

#include <cstdint>

namespace kangaroo {

inline std::uint64_t mix64(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return x;
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : key_(derive(seed, 0, 0)) {}
    Rng(std::uint64_t seed, std::uint64_t s1, std::uint64_t s2 = 0) : key_(derive(seed, s1, s2)) {}

    // Independent child stream; does not disturb this generator's counter.
    Rng substream(std::uint64_t a, std::uint64_t b = 0) const {
        Rng r(0);
        r.key_ = derive(key_, a, b);
        return r;
    }

    std::uint64_t key() const { return key_; }

    std::uint64_t next_u64() { return mix64(key_ + (++counter_) * 0x9e3779b97f4a7c15ULL); }

    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    bool coin() { return (next_u64() >> 63) != 0; }

    // Uniform value in [0, n); n >= 1.
    std::uint64_t below(std::uint64_t n) {
        unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * n;
        return static_cast<std::uint64_t>(m >> 64);
    }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;

    static std::uint64_t derive(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
        std::uint64_t x = mix64(seed + 0x9e3779b97f4a7c15ULL);
        x = mix64(x ^ (a + 0xbf58476d1ce4e5b9ULL));
        return mix64(x ^ (b + 0x94d049bb133111ebULL));
    }
};

}  // namespace kangaroo
