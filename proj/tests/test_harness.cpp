#include "doctest.h"

#include <cmath>

#include "kangaroo/harness.hpp"
#include "kangaroo/solver.hpp"

using namespace kangaroo;

namespace {

ExperimentSpec small_solve_spec() {
    ExperimentSpec spec;
    spec.kind = ExperimentKind::SolveAverage;
    spec.group.kind = GroupKind::Additive;
    spec.group.modulus = 2147483647;  // prime 2^31 - 1
    spec.group.generator = 1;
    spec.group.order = 2147483647;
    spec.a = 0;
    spec.b = 1 << 16;
    spec.trials = 64;
    spec.master_seed = 4242;
    return spec;
}

nlohmann::ordered_json normalized(const ExperimentReport& r) {
    auto j = report_to_json(r);
    j.erase("wall_clock_seconds");
    return j;
}

}  // namespace

TEST_CASE("summarize basics") {
    Summary s = summarize({2, 2, 2});
    CHECK(s.mean == doctest::Approx(2.0));
    CHECK(s.stderr_ == doctest::Approx(0.0));

    Summary t = summarize({1, 3});
    CHECK(t.mean == doctest::Approx(2.0));
    CHECK(t.stderr_ == doctest::Approx(1.0));
    CHECK(t.ci_lo <= t.mean);
    CHECK(t.mean <= t.ci_hi);

    CHECK_THROWS_AS(summarize({1.0}), InsufficientSamples);
}

TEST_CASE("experiments are reproducible for a fixed spec") {
    ExperimentSpec spec = small_solve_spec();
    ExperimentReport r1 = run_experiment(spec);
    ExperimentReport r2 = run_experiment(spec);
    CHECK(normalized(r1) == normalized(r2));
    CHECK(r1.samples == r2.samples);
    CHECK(report_to_csv(r1) == report_to_csv(r2));
}

TEST_CASE("worker count does not change the samples") {
    ExperimentSpec spec = small_solve_spec();
    spec.trials = 96;
    ExperimentReport serial = run_experiment(spec);
    spec.workers = 4;
    ExperimentReport parallel = run_experiment(spec);
    CHECK(serial.samples == parallel.samples);
    CHECK(normalized(serial) == normalized(parallel));
}

TEST_CASE("solve reports cross-check against the cost formula") {
    ExperimentSpec spec = small_solve_spec();
    spec.trials = 200;
    ExperimentReport r = run_experiment(spec);
    StepSet s = build_step_set(spec.a, spec.b, spec.base);
    CHECK(r.reference ==
          doctest::Approx(heuristic_cost(static_cast<double>(spec.b - spec.a), s.mean_double(),
                                         static_cast<double>(spec.c), StartGap::Average)));
    CHECK(r.failures == 0);
    CHECK(r.samples.size() == spec.trials);
    // desk-scale run already sits near the predicted op count
    CHECK(std::fabs(r.relative_deviation) < 0.25);
}

TEST_CASE("additive backend reproduces the op-count constant at width 2^20") {
    ExperimentSpec spec;
    spec.kind = ExperimentKind::SolveAverage;
    spec.group.kind = GroupKind::Additive;
    spec.group.modulus = 2147483647;  // prime 2^31 - 1
    spec.group.generator = 1;
    spec.group.order = 2147483647;
    spec.a = 0;
    spec.b = u128{1} << 20;
    spec.trials = 500;
    spec.master_seed = 1;
    ExperimentReport r = run_experiment(spec);
    CHECK(r.reference == doctest::Approx(2080.0));
    CHECK(std::fabs(r.relative_deviation) < 0.10);
    CHECK(r.failures == 0);
}

TEST_CASE("worst-case kind pins x to the interval start") {
    ExperimentSpec spec = small_solve_spec();
    spec.kind = ExperimentKind::SolveWorst;
    spec.trials = 100;
    ExperimentReport r = run_experiment(spec);
    CHECK(r.reference ==
          doctest::Approx(heuristic_cost(static_cast<double>(spec.b - spec.a),
                                         build_step_set(spec.a, spec.b, spec.base).mean_double(),
                                         static_cast<double>(spec.c), StartGap::Worst)));
    CHECK(r.stats.mean > 0);
}

TEST_CASE("degenerate collision estimate passes through the harness") {
    ExperimentSpec spec;
    spec.kind = ExperimentKind::BEpsilon;
    spec.a = 0;
    spec.b = 16;
    spec.base = 2;
    spec.uniform_d = 0;  // step set {1}
    spec.m_horizon = 5;
    spec.trials = 40;
    spec.master_seed = 99;
    ExperimentReport r = run_experiment(spec);
    BEpsilonEstimate direct = estimate_b_epsilon(StepSet::unit(), 5, spec.trials, Rng(99));
    CHECK(r.extra["estimate_max"].get<double>() == doctest::Approx(direct.max_estimate));
    CHECK(r.stats.mean == doctest::Approx(1.0));
}

TEST_CASE("hitting experiment exposes the per-position profile") {
    ExperimentSpec spec;
    spec.kind = ExperimentKind::Hitting;
    spec.a = 0;
    spec.b = 16;
    spec.base = 2;
    spec.uniform_d = 1;  // {1, 2}
    spec.trials = 20000;
    spec.window_len = 32;
    spec.master_seed = 31;
    ExperimentReport r = run_experiment(spec);
    auto profile = r.extra["profile"];
    REQUIRE(profile.size() == 32);
    for (const auto& q : profile) CHECK(std::fabs(q.get<double>() - 2.0 / 3.0) < 0.03);
    CHECK(r.stats.mean / 32.0 == doctest::Approx(2.0 / 3.0).epsilon(0.02));
}

TEST_CASE("sandwich experiment reports containment") {
    ExperimentSpec spec;
    spec.kind = ExperimentKind::Sandwich;
    spec.a = 0;
    spec.b = 16;
    spec.base = 2;
    spec.uniform_d = 1;
    spec.trials = 20000;
    spec.master_seed = 77;
    ExperimentReport r = run_experiment(spec);
    auto [lo, hi] = birthday_bounds(1.5, r.extra["t_bar"].get<double>(),
                                    r.extra["b_epsilon"].get<double>(),
                                    r.extra["eps_hat"].get<double>());
    CHECK(r.extra["bound_lower"].get<double>() == doctest::Approx(lo));
    CHECK(r.extra["bound_upper"].get<double>() == doctest::Approx(hi));
    CHECK(r.extra["contained"].get<bool>());
}

TEST_CASE("csv uses the fixed schema") {
    ExperimentSpec spec = small_solve_spec();
    spec.trials = 3;
    ExperimentReport r = run_experiment(spec);
    std::string csv = report_to_csv(r);
    CHECK(csv.rfind("trial,seed,value,restarts\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
    CHECK(csv.find("\r") == std::string::npos);
}

TEST_CASE("report json has the versioned schema and stable keys") {
    ExperimentSpec spec = small_solve_spec();
    spec.trials = 2;
    auto j = report_to_json(run_experiment(spec));
    CHECK(j["schema"] == 1);
    auto it = j.begin();
    CHECK(it.key() == "schema");
    CHECK(j.contains("mean"));
    CHECK(j.contains("ci95"));
    CHECK(j.contains("wall_clock_seconds"));
}
