#include "kangaroo/stepset.hpp"

#include <algorithm>
#include <optional>

namespace kangaroo {

namespace {

std::vector<u64> power_sizes(u64 base, u64 d) {
    std::vector<u64> sizes(d + 1);
    u128 v = 1;
    for (u64 k = 0; k <= d; ++k) {
        if (v > UINT64_MAX) throw std::invalid_argument("step sizes exceed 64 bits");
        sizes[k] = static_cast<u64>(v);
        v *= base;
    }
    return sizes;
}

Rational uniform_mean(const std::vector<u64>& sizes) {
    Rational sum = 0;
    for (u64 s : sizes) sum += Rational::from_u128(s);
    return sum / Rational(static_cast<i64>(sizes.size()), 1);
}

Rational gamma_of(const std::vector<Rational>& masses) {
    Rational count(static_cast<i64>(masses.size()), 1);
    Rational g = 1;
    for (const Rational& p : masses) {
        Rational up = p * count;            // p(s)(d+1)
        Rational down = Rational(1) / up;   // 1/(p(s)(d+1))
        if (up > g) g = up;
        if (down > g) g = down;
    }
    return g;
}

// Moves mass between the extreme ends of the set until the mean hits the
// target, saturating each mass at the gamma<=2 bounds. Degenerates to the
// plain two-point shift whenever that alone suffices.
std::optional<std::vector<Rational>> shift_masses(const std::vector<u64>& sizes,
                                                  const Rational& target) {
    const std::size_t k = sizes.size();
    const Rational unif(1, static_cast<i128>(k));
    const Rational lo(1, static_cast<i128>(2 * k));
    const Rational hi(2, static_cast<i128>(k));
    std::vector<Rational> masses(k, unif);

    Rational excess = uniform_mean(sizes) - target;
    const bool down = !excess.is_negative();
    if (!down) excess = Rational(0) - excess;

    // Mean must decrease: drain the largest steps into the smallest.
    // Mean must increase: the mirror image.
    std::size_t src = down ? k - 1 : 0;
    std::size_t dst = down ? 0 : k - 1;
    auto step_src = [&] { down ? --src : ++src; };
    auto step_dst = [&] { down ? ++dst : --dst; };

    while (!excess.is_zero()) {
        if (down ? src <= dst : src >= dst) return std::nullopt;
        Rational src_cap = masses[src] - lo;
        Rational dst_cap = hi - masses[dst];
        if (src_cap.is_zero()) {
            step_src();
            continue;
        }
        if (dst_cap.is_zero()) {
            step_dst();
            continue;
        }
        u64 gap = down ? sizes[src] - sizes[dst] : sizes[dst] - sizes[src];
        Rational wanted = excess / Rational::from_u128(gap);
        Rational move = std::min(std::min(src_cap, dst_cap), wanted);
        masses[src] -= move;
        masses[dst] += move;
        excess -= move * Rational::from_u128(gap);
    }
    return masses;
}

}  // namespace

std::size_t StepSet::sample_index(u64 word) const {
    auto it = std::upper_bound(cum_thresholds_.begin(), cum_thresholds_.end(), word);
    std::size_t idx = static_cast<std::size_t>(it - cum_thresholds_.begin());
    return std::min(idx, sizes.size() - 1);
}

void StepSet::finalize() {
    cum_thresholds_.clear();
    Rational cum = 0;
    for (std::size_t i = 0; i + 1 < masses.size(); ++i) {
        cum += masses[i];
        cum_thresholds_.push_back(cum.floor_scale64());
    }
    // implicit sentinel: the last bucket absorbs everything >= the final threshold
}

StepSet StepSet::uniform(u64 base, u64 d) {
    if (base < 2) throw std::invalid_argument("base must be at least 2");
    StepSet s;
    s.base = base;
    s.d = d;
    s.sizes = power_sizes(base, d);
    s.masses.assign(d + 1, Rational(1, static_cast<i128>(d + 1)));
    s.mean = uniform_mean(s.sizes);
    s.gamma = 1;
    s.finalize();
    return s;
}

Rational sqrt_rational(u64 width) {
    u128 scaled = isqrt(static_cast<u128>(width) << 40);  // floor(2^20 sqrt(w))
    return Rational(static_cast<i128>(scaled), i128{1} << 20);
}

StepSet build_step_set_for_width(u64 width, u64 base, const Rational* target) {
    if (width < 16) throw std::invalid_argument("interval width must be at least 16");
    if (base < 2) throw std::invalid_argument("base must be at least 2");
    Rational goal = target ? *target : sqrt_rational(width) / Rational(2);
    if (!(goal > Rational(1))) throw InfeasibleTarget("target mean must exceed 1");

    u64 d0 = 1;
    while (uniform_mean(power_sizes(base, d0)) < goal) ++d0;

    std::vector<u64> candidates{d0, d0 + 1};
    for (u64 d = d0; d-- > 1;) candidates.push_back(d);

    for (u64 d : candidates) {
        auto sizes = power_sizes(base, d);
        auto masses = shift_masses(sizes, goal);
        if (!masses) continue;
        StepSet s;
        s.base = base;
        s.d = d;
        s.sizes = std::move(sizes);
        s.masses = std::move(*masses);
        s.mean = goal;
        s.gamma = gamma_of(s.masses);
        s.finalize();
        return s;
    }
    throw InfeasibleTarget("no exponent bound admits the target mean with gamma <= 2");
}

std::size_t assign_step_index(const StepSet& s, const HashKey& key, const EncodedElement& e) {
    return s.sample_index(keyed_hash64(key, e.data(), e.size));
}

u64 assign_step(const StepSet& s, const HashKey& key, const EncodedElement& e) {
    return s.sizes[assign_step_index(s, key, e)];
}

DistinguishedPredicate make_distinguished_predicate(u64 width, u64 c, const HashKey& key) {
    if (c == 0) throw std::invalid_argument("distinguished density constant must be positive");
    DistinguishedPredicate pred;
    pred.key = key;
    Rational density = Rational(static_cast<i64>(c), 1) / sqrt_rational(width);
    if (density >= Rational(1)) {
        pred.density = 1;
        pred.all_pass = true;
        pred.threshold = UINT64_MAX;
    } else {
        pred.density = density;
        pred.threshold = std::max<u64>(1, density.floor_scale64());
    }
    return pred;
}

nlohmann::ordered_json step_set_to_json(const StepSet& s) {
    nlohmann::ordered_json j;
    j["n"] = s.base;
    j["d"] = s.d;
    nlohmann::ordered_json masses = nlohmann::ordered_json::array();
    for (const Rational& p : s.masses) masses.push_back({p.num_u64(), p.den_u64()});
    j["masses"] = std::move(masses);
    j["mean"] = {s.mean.num_u64(), s.mean.den_u64()};
    j["gamma"] = {s.gamma.num_u64(), s.gamma.den_u64()};
    return j;
}

}  // namespace kangaroo
