#include "kangaroo/solver.hpp"

#include <cmath>

namespace kangaroo {

namespace {

u128 mod_sub(u128 a, u128 b, u128 m) {
    a %= m;
    b %= m;
    return a >= b ? a - b : a + (m - b);
}

u64 isqrt_ceil(u128 v) {
    u128 r = isqrt(v);
    if (r * r < v) ++r;
    return static_cast<u64>(r);
}

}  // namespace

JumpTable precompute_jumps(const CyclicGroup& g, const StepSet& s, OpCounter& ops) {
    JumpTable table;
    table.points.reserve(s.sizes.size());
    table.points.push_back(g.generator());  // n^0 = 1
    for (std::size_t k = 1; k < s.sizes.size(); ++k)
        table.points.push_back(g.pow(table.points.back(), s.base, &ops));
    return table;
}

void advance(KangarooState& state, const CyclicGroup& g, const StepSet& s, const JumpTable& jumps,
             const HashKey& step_key, OpCounter& ops) {
    std::size_t idx = assign_step_index(s, step_key, g.encode(state.current));
    state.current = g.mul(state.current, jumps.points[idx], &ops);
    state.offset += s.sizes[idx];
    ++state.steps_taken;
}

const PointStore::Entry* PointStore::insert(const Element& e, KangarooTag tag, u128 offset) {
    auto [it, inserted] = table_.try_emplace(e.value, Entry{tag, offset});
    if (inserted || it->second.tag == tag) return nullptr;
    return &it->second;
}

SolveResult solve(const CyclicGroup& g, const Element& h, u128 a, u128 b, const StepSet& s,
                  const DistinguishedPredicate& pred, const SolveKeys& keys,
                  const SolveOptions& opts) {
    if (b <= a) throw std::invalid_argument("interval is empty");
    const u128 width = b - a;
    const u128 y0 = a + width / 2;
    const u64 step_cap = opts.cap_multiplier * isqrt_ceil(width);

    SolveResult result;
    OpCounter precomp;
    JumpTable jumps = precompute_jumps(g, s, precomp);
    result.precomputation_ops = precomp.mults;
    OpCounter setup_verify;
    const Element tame_start = g.pow(g.generator(), y0, &setup_verify);

    PointStore store;
    for (u64 attempt = 0;; ++attempt) {
        if (attempt > opts.max_restarts) {
            result.restarts = attempt - 1;
            throw SolveFailed("no collision after " + std::to_string(opts.max_restarts) +
                              " rekeyed restarts");
        }
        const HashKey step_key = rekey(keys.step, attempt);
        DistinguishedPredicate dp = pred;
        dp.key = rekey(keys.distinguished, attempt);

        store.clear();
        KangarooState tame{KangarooTag::Tame, tame_start, y0};
        KangarooState wild{KangarooTag::Wild, h, 0};
        OpCounter walk_ops;

        const PointStore::Entry* hit = nullptr;
        KangarooState* arrived = nullptr;
        auto check = [&](KangarooState& k) {
            if (!is_distinguished(dp, g.encode(k.current))) return false;
            const PointStore::Entry* other = store.insert(k.current, k.tag, k.offset);
            if (!other) return false;
            hit = other;
            arrived = &k;
            return true;
        };

        bool found = check(tame) || check(wild);
        while (!found && tame.steps_taken + wild.steps_taken < step_cap) {
            advance(tame, g, s, jumps, step_key, walk_ops);
            if (check(tame)) {
                found = true;
                break;
            }
            advance(wild, g, s, jumps, step_key, walk_ops);
            if (check(wild)) {
                found = true;
                break;
            }
        }
        result.tame_steps += tame.steps_taken;
        result.wild_steps += wild.steps_taken;

        if (!found) continue;  // cap exceeded: rekey and start over

        result.restarts = attempt;
        u128 tame_exponent = arrived->tag == KangarooTag::Tame ? arrived->offset : hit->offset;
        u128 wild_offset = arrived->tag == KangarooTag::Wild ? arrived->offset : hit->offset;
        result.x = mod_sub(tame_exponent, wild_offset, g.order());
        result.collision_point_hex = g.encode(arrived->current).hex();
        result.store_entries = store.size();

        if (g.pow(g.generator(), result.x, &setup_verify) != h)
            throw VerificationFailed("recovered exponent fails pow(g, x) = h");
        result.verification_ops = setup_verify.mults;
        result.group_ops = result.tame_steps + result.wild_steps + result.precomputation_ops +
                           result.verification_ops;
        return result;
    }
}

double heuristic_cost(double b_minus_a, double s_bar, double c, StartGap gap) {
    if (b_minus_a <= 0 || s_bar <= 0 || c <= 0) throw std::invalid_argument("arguments must be positive");
    double catch_up = gap == StartGap::Average ? b_minus_a / (4.0 * s_bar) : b_minus_a / (2.0 * s_bar);
    return 2.0 * (catch_up + s_bar + std::sqrt(b_minus_a) / c);
}

nlohmann::ordered_json solve_result_to_json(const SolveResult& r) {
    nlohmann::ordered_json j;
    if (r.x <= UINT64_MAX)
        j["x"] = static_cast<u64>(r.x);
    else
        j["x"] = to_string(r.x);
    j["group_ops"] = r.group_ops;
    j["tame_steps"] = r.tame_steps;
    j["wild_steps"] = r.wild_steps;
    j["restarts"] = r.restarts;
    j["collision_point_hex"] = r.collision_point_hex;
    return j;
}

}  // namespace kangaroo
