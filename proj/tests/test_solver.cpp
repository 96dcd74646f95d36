#include "doctest.h"

#include <cmath>

#include "kangaroo/rng.hpp"
#include "kangaroo/solver.hpp"

using namespace kangaroo;

namespace {

SolveKeys keys_from_seed(u64 seed) {
    Rng rng(seed, 0, 2);
    return SolveKeys{{rng.next_u64(), rng.next_u64()}, {rng.next_u64(), rng.next_u64()}};
}

}  // namespace

TEST_CASE("additive dlog recovers the residue itself") {
    CyclicGroup g(GroupKind::Additive, 101, 1, 101);
    StepSet s = build_step_set(0, 100, 2);
    SolveKeys keys = keys_from_seed(42);
    DistinguishedPredicate pred = make_distinguished_predicate(100, 64, keys.distinguished);
    SolveResult r = solve(g, g.element(77), 0, 100, s, pred, keys);
    CHECK(r.x == 77);
    CHECK(g.pow(g.generator(), r.x) == g.element(77));
    CHECK(r.group_ops ==
          r.tame_steps + r.wild_steps + r.precomputation_ops + r.verification_ops);
    CHECK(!r.collision_point_hex.empty());
}

TEST_CASE("multiplicative dlog on a small prime group") {
    CyclicGroup g(GroupKind::Multiplicative, 101, 2, 100);  // 2 generates all of Z_101^*
    StepSet s = build_step_set(0, 99, 2);
    SolveKeys keys = keys_from_seed(7);
    DistinguishedPredicate pred = make_distinguished_predicate(99, 64, keys.distinguished);
    for (u64 x : {0ULL, 5ULL, 42ULL, 99ULL}) {
        Element h = g.pow(g.generator(), x);
        SolveResult r = solve(g, h, 0, 99, s, pred, keys);
        CHECK(r.x == x);
    }
}

TEST_CASE("advance keeps the walk invariants") {
    CyclicGroup g(GroupKind::Additive, 1009, 1, 1009);
    StepSet s = build_step_set(0, 1000, 2);
    OpCounter precomp;
    JumpTable jumps = precompute_jumps(g, s, precomp);
    HashKey key{77, 88};

    u128 x_secret = 345;
    Element h = g.pow(g.generator(), x_secret);

    KangarooState tame{KangarooTag::Tame, g.pow(g.generator(), 500), 500};
    KangarooState wild{KangarooTag::Wild, h, 0};

    u128 last_tame = tame.offset, last_wild = wild.offset;
    for (int i = 1; i <= 10000; ++i) {
        OpCounter ops;
        advance(tame, g, s, jumps, key, ops);
        advance(wild, g, s, jumps, key, ops);
        CHECK(ops.mults == 2);  // one counted op per walk step
        CHECK(tame.offset > last_tame);
        CHECK(wild.offset > last_wild);
        last_tame = tame.offset;
        last_wild = wild.offset;
        if (i % 100 == 0) {
            CHECK(tame.current == g.pow(g.generator(), tame.offset));
            CHECK(wild.current == g.mul(h, g.pow(g.generator(), wild.offset)));
        }
    }
    CHECK(tame.steps_taken == 10000);
}

TEST_CASE("advance moves by the assigned step") {
    CyclicGroup g(GroupKind::Additive, 1009, 1, 1009);
    StepSet s = build_step_set(0, 1000, 2);
    OpCounter precomp;
    JumpTable jumps = precompute_jumps(g, s, precomp);
    HashKey key{5, 6};
    KangarooState tame{KangarooTag::Tame, g.pow(g.generator(), 0), 0};
    u64 step = assign_step(s, key, g.encode(tame.current));
    OpCounter ops;
    advance(tame, g, s, jumps, key, ops);
    CHECK(tame.offset == step);
    CHECK(tame.current.value == step);
}

TEST_CASE("heuristic cost closed forms") {
    double w = 1 << 20;
    CHECK(heuristic_cost(w, 512, 64, StartGap::Average) == doctest::Approx(2080).epsilon(1e-12));
    CHECK(heuristic_cost(w, 512, 64, StartGap::Worst) == doctest::Approx(3104).epsilon(1e-12));
    double best = heuristic_cost(w, 512, 64, StartGap::Average);
    for (double sbar : {128.0, 256.0, 1024.0, 2048.0})
        CHECK(heuristic_cost(w, sbar, 64, StartGap::Average) > best);
}

TEST_CASE("solve is deterministic for fixed keys") {
    CyclicGroup g(GroupKind::Multiplicative, 2305843009213693951ULL, 3, 2305843009213693950ULL);
    StepSet s = build_step_set(0, 1 << 16, 2);
    SolveKeys keys = keys_from_seed(99);
    DistinguishedPredicate pred = make_distinguished_predicate(1 << 16, 64, keys.distinguished);
    Element h = g.pow(g.generator(), 31415);
    SolveResult r1 = solve(g, h, 0, 1 << 16, s, pred, keys);
    SolveResult r2 = solve(g, h, 0, 1 << 16, s, pred, keys);
    CHECK(r1.x == r2.x);
    CHECK(r1.group_ops == r2.group_ops);
    CHECK(r1.tame_steps == r2.tame_steps);
    CHECK(r1.wild_steps == r2.wild_steps);
    CHECK(r1.collision_point_hex == r2.collision_point_hex);
    CHECK(r1.x == 31415);
    CHECK(r1.store_entries <= 50 * 64);
}

TEST_CASE("a zero step cap exhausts restarts") {
    CyclicGroup g(GroupKind::Additive, 1 << 20, 1, 1 << 20);
    StepSet s = build_step_set(0, 1 << 12, 2);
    SolveKeys keys = keys_from_seed(3);
    DistinguishedPredicate pred = make_distinguished_predicate(1 << 12, 64, keys.distinguished);
    Element h = g.pow(g.generator(), 1234);
    SolveOptions opts;
    opts.cap_multiplier = 0;
    CHECK_THROWS_AS(solve(g, h, 0, 1 << 12, s, pred, keys, opts), SolveFailed);
}

TEST_CASE("solve result serialization carries the contract fields") {
    CyclicGroup g(GroupKind::Additive, 101, 1, 101);
    StepSet s = build_step_set(0, 100, 2);
    SolveKeys keys = keys_from_seed(42);
    DistinguishedPredicate pred = make_distinguished_predicate(100, 64, keys.distinguished);
    SolveResult r = solve(g, g.element(77), 0, 100, s, pred, keys);
    auto j = solve_result_to_json(r);
    CHECK(j["x"] == 77);
    CHECK(j.contains("group_ops"));
    CHECK(j.contains("tame_steps"));
    CHECK(j.contains("wild_steps"));
    CHECK(j.contains("restarts"));
    CHECK(j.contains("collision_point_hex"));
}
