// Cyclic group abstraction: multiplicative subgroup mod p or additive group mod N.
//
// Both backends share one interface so op-count experiments can run on either.
// The additive backend exists so desk-scale runs count group operations without
// paying for modular multiplication.
#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "kangaroo/int128.hpp"

namespace kangaroo {

class InvalidModulus : public std::runtime_error {
public:
    explicit InvalidModulus(const std::string& what) : std::runtime_error(what) {}
};

class InvalidOrder : public std::runtime_error {
public:
    explicit InvalidOrder(const std::string& what) : std::runtime_error(what) {}
};

enum class GroupKind { Multiplicative, Additive };

struct Element {
    u128 value = 0;

    friend bool operator==(const Element& a, const Element& b) { return a.value == b.value; }
    friend bool operator!=(const Element& a, const Element& b) { return a.value != b.value; }
};

// Fixed-width big-endian encoding of a residue; width = ceil(bitlen(modulus)/8).
struct EncodedElement {
    std::array<std::uint8_t, 16> bytes{};
    std::uint8_t size = 0;

    const std::uint8_t* data() const { return bytes.data(); }
    std::string hex() const;
};

// Tally of counted group multiplications. One `mul` call is THE unit of cost.
struct OpCounter {
    u64 mults = 0;
};

class CyclicGroup {
public:
    CyclicGroup(GroupKind kind, u128 modulus, u128 generator, u128 order);

    GroupKind kind() const { return kind_; }
    u128 modulus() const { return modulus_; }
    u128 order() const { return order_; }
    Element generator() const { return generator_; }
    Element identity() const { return Element{kind_ == GroupKind::Multiplicative ? u128{1} : u128{0}}; }
    int encoded_width() const { return width_; }

    Element element(u128 residue) const;

    // The counted group operation. Pure; `ops` (when given) is incremented by one.
    Element mul(const Element& x, const Element& y, OpCounter* ops = nullptr) const;

    // Square-and-multiply; costs at most 2*bitlen(e) counted operations.
    Element pow(const Element& x, u128 e, OpCounter* ops = nullptr) const;

    EncodedElement encode(const Element& x) const;

private:
    GroupKind kind_;
    u128 modulus_;
    Element generator_;
    u128 order_;
    int width_;
};

inline CyclicGroup make_group(GroupKind kind, u128 modulus, u128 generator, u128 order) {
    return CyclicGroup(kind, modulus, generator, order);
}

}  // namespace kangaroo
