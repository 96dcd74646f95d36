// Distinguished-points kangaroo solver for the interval discrete logarithm.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "kangaroo/group.hpp"
#include "kangaroo/hash.hpp"
#include "kangaroo/stepset.hpp"

namespace kangaroo {

class SolveFailed : public std::runtime_error {
public:
    explicit SolveFailed(const std::string& what) : std::runtime_error(what) {}
};

class VerificationFailed : public std::logic_error {
public:
    explicit VerificationFailed(const std::string& what) : std::logic_error(what) {}
};

enum class KangarooTag : std::uint8_t { Tame, Wild };

// One walker. The tame offset is the known exponent Y_j; the wild offset is
// the distance d_i walked from the unknown start, so its element is h*g^d_i.
struct KangarooState {
    KangarooTag tag;
    Element current;
    u128 offset;
    u64 steps_taken = 0;
};

// Precomputed jump elements g^{n^k}, one per step size, so each walk step
// costs a single group multiplication.
struct JumpTable {
    std::vector<Element> points;
};

JumpTable precompute_jumps(const CyclicGroup& g, const StepSet& s, OpCounter& ops);

// One walk step; exactly one counted group operation.
void advance(KangarooState& state, const CyclicGroup& g, const StepSet& s, const JumpTable& jumps,
             const HashKey& step_key, OpCounter& ops);

class PointStore {
public:
    struct Entry {
        KangarooTag tag;
        u128 offset;
    };

    // Returns the previously stored opposite-tag entry on a collision.
    // Re-insertion under the same tag keeps the first entry.
    const Entry* insert(const Element& e, KangarooTag tag, u128 offset);

    std::size_t size() const { return table_.size(); }
    void clear() { table_.clear(); }

private:
    std::unordered_map<u128, Entry, U128Hash> table_;
};

struct SolveResult {
    u128 x = 0;
    u64 group_ops = 0;  // tame + wild + precomputation + verification, exactly
    u64 tame_steps = 0;
    u64 wild_steps = 0;
    u64 precomputation_ops = 0;  // jump-table construction only
    u64 verification_ops = 0;    // start-element setup plus the final pow(g,x)=h check
    u64 restarts = 0;
    std::string collision_point_hex;
    u64 store_entries = 0;
};

struct SolveKeys {
    HashKey step;
    HashKey distinguished;
};

struct SolveOptions {
    u64 cap_multiplier = 20;  // combined-step cap, in units of sqrt(b-a)
    u64 max_restarts = 10;
};

// Runs tame and wild walks alternately until one distinguished element
// carries both tags, then recovers x = (Y_j - d_i) mod order and verifies
// pow(g, x) = h. Exceeding the step cap rekeys both hashes and restarts.
SolveResult solve(const CyclicGroup& g, const Element& h, u128 a, u128 b, const StepSet& s,
                  const DistinguishedPredicate& pred, const SolveKeys& keys,
                  const SolveOptions& opts = {});

enum class StartGap { Average, Worst };

// 2((b-a)/(4 sbar) + sbar + sqrt(b-a)/c); worst-case start doubles the
// catch-up term.
double heuristic_cost(double b_minus_a, double s_bar, double c, StartGap gap);

nlohmann::ordered_json solve_result_to_json(const SolveResult& r);

}  // namespace kangaroo
