// Exact rational arithmetic on 128-bit integers, used for step-mass bookkeeping.
#pragma once

#include <stdexcept>
#include <string>

#include "kangaroo/int128.hpp"

namespace kangaroo {

class RationalOverflow : public std::overflow_error {
public:
    RationalOverflow() : std::overflow_error("rational arithmetic exceeded 128 bits") {}
};

class Rational {
public:
    Rational() = default;
    Rational(i64 value) : num_(value) {}  // NOLINT: implicit by design
    Rational(i128 num, i128 den) : num_(num), den_(den) { normalize(); }

    static Rational from_u128(u128 v) {
        if (v > static_cast<u128>(max_i128())) throw RationalOverflow();
        return Rational(static_cast<i128>(v), 1);
    }

    i128 num() const { return num_; }
    i128 den() const { return den_; }

    bool is_zero() const { return num_ == 0; }
    bool is_negative() const { return num_ < 0; }

    u64 num_u64() const {
        if (num_ < 0 || num_ > static_cast<i128>(UINT64_MAX)) throw RationalOverflow();
        return static_cast<u64>(num_);
    }
    u64 den_u64() const {
        if (den_ > static_cast<i128>(UINT64_MAX)) throw RationalOverflow();
        return static_cast<u64>(den_);
    }

    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    friend Rational operator+(const Rational& a, const Rational& b) {
        return Rational(checked_add(checked_mul(a.num_, b.den_), checked_mul(b.num_, a.den_)),
                        checked_mul(a.den_, b.den_));
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        return Rational(checked_sub(checked_mul(a.num_, b.den_), checked_mul(b.num_, a.den_)),
                        checked_mul(a.den_, b.den_));
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        i128 g1 = gcd(a.num_, b.den_);
        i128 g2 = gcd(b.num_, a.den_);
        return Rational(checked_mul(a.num_ / g1, b.num_ / g2),
                        checked_mul(a.den_ / g2, b.den_ / g1));
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.num_ == 0) throw std::domain_error("rational division by zero");
        return a * Rational(b.den_, b.num_);
    }

    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }
    Rational& operator/=(const Rational& o) { return *this = *this / o; }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) {
        return checked_mul(a.num_, b.den_) < checked_mul(b.num_, a.den_);
    }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

    std::string str() const {
        std::string s;
        if (num_ < 0) s = "-";
        s += to_string(static_cast<u128>(num_ < 0 ? -num_ : num_));
        if (den_ != 1) s += "/" + to_string(static_cast<u128>(den_));
        return s;
    }

    // floor(2^64 * r) for r in [0, 1]; 2^64 itself is reported as UINT64_MAX.
    u64 floor_scale64() const {
        if (num_ < 0 || num_ > den_) throw std::domain_error("floor_scale64 needs r in [0,1]");
        if (num_ == den_) return UINT64_MAX;
        u128 n = static_cast<u128>(num_);
        if (n >= (u128{1} << 64)) throw RationalOverflow();
        return static_cast<u64>((n << 64) / static_cast<u128>(den_));
    }

private:
    i128 num_ = 0;
    i128 den_ = 1;

    static i128 max_i128() { return static_cast<i128>((u128{1} << 127) - 1); }

    static i128 gcd(i128 a, i128 b) {
        if (a < 0) a = -a;
        if (b < 0) b = -b;
        while (b) {
            i128 t = a % b;
            a = b;
            b = t;
        }
        return a == 0 ? 1 : a;
    }

    static i128 checked_mul(i128 a, i128 b) {
        i128 r;
        if (__builtin_mul_overflow(a, b, &r)) throw RationalOverflow();
        return r;
    }
    static i128 checked_add(i128 a, i128 b) {
        i128 r;
        if (__builtin_add_overflow(a, b, &r)) throw RationalOverflow();
        return r;
    }
    static i128 checked_sub(i128 a, i128 b) {
        i128 r;
        if (__builtin_sub_overflow(a, b, &r)) throw RationalOverflow();
        return r;
    }

    void normalize() {
        if (den_ == 0) throw std::domain_error("rational with zero denominator");
        if (den_ < 0) {
            num_ = -num_;
            den_ = -den_;
        }
        i128 g = gcd(num_, den_);
        num_ /= g;
        den_ /= g;
    }
};

}  // namespace kangaroo
