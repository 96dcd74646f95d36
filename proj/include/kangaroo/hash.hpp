// Keyed 64-bit avalanche hash over element encodings.
//
// Stand-in for the random oracle assumed by the walk analysis: the key is a
// config input, and step assignment and the distinguished predicate always use
// independent keys.
#pragma once

#include <cstddef>
#include <cstdint>

#include "kangaroo/rng.hpp"

namespace kangaroo {

struct HashKey {
    std::uint64_t hi = 0;
    std::uint64_t lo = 0;

    friend bool operator==(const HashKey&, const HashKey&) = default;
};

inline std::uint64_t keyed_hash64(const HashKey& key, const std::uint8_t* data, std::size_t len) {
    std::uint64_t h = key.lo ^ (0x9e3779b97f4a7c15ULL * (len + 1));
    std::size_t i = 0;
    while (i + 8 <= len) {
        std::uint64_t w = 0;
        for (int j = 0; j < 8; ++j) w |= static_cast<std::uint64_t>(data[i + j]) << (8 * j);
        h = mix64(h ^ w);
        i += 8;
    }
    if (i < len) {
        std::uint64_t w = 0;
        for (int j = 0; i + j < len; ++j) w |= static_cast<std::uint64_t>(data[i + j]) << (8 * j);
        h = mix64(h ^ w);
    }
    // two finalization rounds of multiply-xor-shift
    h = mix64(h ^ key.hi);
    return mix64(h);
}

// Deterministic key refresh used when a solve attempt is restarted.
inline HashKey rekey(const HashKey& key, std::uint64_t salt) {
    if (salt == 0) return key;
    return HashKey{mix64(key.hi ^ (salt * 0xbf58476d1ce4e5b9ULL)),
                   mix64(key.lo + salt * 0x9e3779b97f4a7c15ULL)};
}

}  // namespace kangaroo
