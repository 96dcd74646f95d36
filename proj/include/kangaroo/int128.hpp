// 128-bit integer helpers shared across the library.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace kangaroo {

using u128 = unsigned __int128;
using i128 = __int128;
using u64 = std::uint64_t;
using i64 = std::int64_t;

inline int bit_length(u128 v) {
    int n = 0;
    while (v) {
        ++n;
        v >>= 1;
    }
    return n;
}

// floor(sqrt(v)) by Newton iteration.
inline u128 isqrt(u128 v) {
    if (v < 2) return v;
    u128 x = u128{1} << ((bit_length(v) + 1) / 2);
    for (;;) {
        u128 y = (x + v / x) >> 1;
        if (y >= x) return x;
        x = y;
    }
}

inline u128 parse_u128(std::string_view text) {
    if (text.empty()) throw std::invalid_argument("empty integer literal");
    u128 value = 0;
    for (char c : text) {
        if (c < '0' || c > '9') throw std::invalid_argument("bad integer literal: " + std::string(text));
        u128 next = value * 10 + static_cast<unsigned>(c - '0');
        if (next < value) throw std::out_of_range("integer literal exceeds 128 bits");
        value = next;
    }
    return value;
}

inline std::string to_string(u128 v) {
    if (v == 0) return "0";
    std::string out;
    while (v) {
        out.push_back(static_cast<char>('0' + static_cast<unsigned>(v % 10)));
        v /= 10;
    }
    return {out.rbegin(), out.rend()};
}

struct U128Hash {
    std::size_t operator()(u128 v) const noexcept {
        u64 x = static_cast<u64>(v) ^ (static_cast<u64>(v >> 64) * 0x9e3779b97f4a7c15ULL);
        x ^= x >> 30;
        x *= 0xbf58476d1ce4e5b9ULL;
        x ^= x >> 27;
        return static_cast<std::size_t>(x);
    }
};

}  // namespace kangaroo
