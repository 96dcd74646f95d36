#include "kangaroo/group.hpp"

namespace kangaroo {

namespace {

constexpr u128 kMaxModulus = u128{1} << 96;

// a*b mod m for m < 2^96. Residues below 2^64 take the native 128-bit product;
// larger moduli fall back to shift-and-add, where every intermediate stays
// below 2^97.
u128 mul_mod(u128 a, u128 b, u128 m) {
    if (m <= UINT64_MAX) return a * b % m;
    u128 acc = 0;
    while (b) {
        if (b & 1) {
            acc += a;
            if (acc >= m) acc -= m;
        }
        a <<= 1;
        if (a >= m) a -= m;
        b >>= 1;
    }
    return acc;
}

}  // namespace

std::string EncodedElement::hex() const {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(2 * size);
    for (int i = 0; i < size; ++i) {
        out.push_back(digits[bytes[i] >> 4]);
        out.push_back(digits[bytes[i] & 0xf]);
    }
    return out;
}

CyclicGroup::CyclicGroup(GroupKind kind, u128 modulus, u128 generator, u128 order)
    : kind_(kind), modulus_(modulus), generator_{generator}, order_(order) {
    if (modulus < 2 || modulus >= kMaxModulus) throw InvalidModulus("modulus must be in [2, 2^96)");
    if (generator >= modulus) throw InvalidModulus("generator residue out of range");
    if (kind == GroupKind::Multiplicative && generator == 0)
        throw InvalidModulus("multiplicative generator must be a unit");
    if (order == 0) throw InvalidOrder("order must be positive");
    if (order > 1 && generator_ == identity())
        throw InvalidOrder("generator is the identity but order > 1");
    width_ = (bit_length(modulus) + 7) / 8;
    if (pow(generator_, order) != identity())
        throw InvalidOrder("generator does not have the claimed order");
}

Element CyclicGroup::element(u128 residue) const {
    if (residue >= modulus_) throw std::invalid_argument("residue out of range");
    return Element{residue};
}

Element CyclicGroup::mul(const Element& x, const Element& y, OpCounter* ops) const {
    if (ops) ++ops->mults;
    if (kind_ == GroupKind::Multiplicative) return Element{mul_mod(x.value, y.value, modulus_)};
    u128 s = x.value + y.value;
    if (s >= modulus_) s -= modulus_;
    return Element{s};
}

Element CyclicGroup::pow(const Element& x, u128 e, OpCounter* ops) const {
    Element acc = identity();
    Element base = x;
    bool acc_live = false;  // skip the identity multiply at the first set bit
    while (e) {
        if (e & 1) {
            acc = acc_live ? mul(acc, base, ops) : base;
            acc_live = true;
        }
        e >>= 1;
        if (e) base = mul(base, base, ops);
    }
    return acc;
}

EncodedElement CyclicGroup::encode(const Element& x) const {
    EncodedElement out;
    out.size = static_cast<std::uint8_t>(width_);
    u128 v = x.value;
    for (int i = width_ - 1; i >= 0; --i) {
        out.bytes[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(v & 0xff);
        v >>= 8;
    }
    return out;
}

}  // namespace kangaroo
