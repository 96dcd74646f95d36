// Jump-size sets {n^k} with exact rational masses, the keyed step-assignment
// hash, and the distinguished-point predicate.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "json.hpp"
#include "kangaroo/group.hpp"
#include "kangaroo/hash.hpp"
#include "kangaroo/int128.hpp"
#include "kangaroo/rational.hpp"

namespace kangaroo {

class InfeasibleTarget : public std::runtime_error {
public:
    explicit InfeasibleTarget(const std::string& what) : std::runtime_error(what) {}
};

struct StepSet {
    u64 base = 2;
    u64 d = 0;                      // max exponent; sizes are n^0 .. n^d
    std::vector<u64> sizes;        // ascending
    std::vector<Rational> masses;  // sum to 1 exactly
    Rational mean;                 // sum of size * mass, exact
    Rational gamma;                // least g with g/(d+1) >= p(s) >= 1/(g(d+1))

    u64 s_max() const { return sizes.back(); }
    double mean_double() const { return mean.to_double(); }

    // Bucket lookup for a uniform 64-bit word against the cumulative masses.
    std::size_t sample_index(u64 word) const;

    // Uniform masses 1/(d+1); the workhorse of the walk laboratory.
    static StepSet uniform(u64 base, u64 d);
    // The one-point set {1}.
    static StepSet unit() { return uniform(2, 0); }

private:
    std::vector<u64> cum_thresholds_;  // floor(2^64 * cumulative), sentinel last
    void finalize();
    friend StepSet build_step_set_for_width(u64, u64, const Rational*);
};

// floor(2^20 * sqrt(width)) / 2^20; exact when width is a perfect square.
Rational sqrt_rational(u64 width);

// Builds sizes {n^0..n^d} with mean exactly sqrt(width)/2 (or the caller's
// target) by shifting mass from one end of the set to the other, keeping every
// mass within [1/(2(d+1)), 2/(d+1)] so gamma stays at most 2.
StepSet build_step_set_for_width(u64 width, u64 base, const Rational* target = nullptr);

inline StepSet build_step_set(u128 a, u128 b, u64 base) {
    if (b <= a) throw std::invalid_argument("interval is empty");
    u128 w = b - a;
    if (w > (u128{1} << 48)) throw std::invalid_argument("interval width above 2^48");
    return build_step_set_for_width(static_cast<u64>(w), base);
}

inline Rational mean_step(const StepSet& s) { return s.mean; }

// Deterministic step choice for one encoded element under one key.
u64 assign_step(const StepSet& s, const HashKey& key, const EncodedElement& e);
std::size_t assign_step_index(const StepSet& s, const HashKey& key, const EncodedElement& e);

struct DistinguishedPredicate {
    Rational density;  // c / sqrt(width), clamped to 1
    u64 threshold = 0;
    bool all_pass = false;
    HashKey key;
};

DistinguishedPredicate make_distinguished_predicate(u64 width, u64 c, const HashKey& key);

inline bool is_distinguished(const DistinguishedPredicate& pred, const EncodedElement& e) {
    return pred.all_pass || keyed_hash64(pred.key, e.data(), e.size) < pred.threshold;
}

nlohmann::ordered_json step_set_to_json(const StepSet& s);

}  // namespace kangaroo
