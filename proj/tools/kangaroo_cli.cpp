// Command-line front door: solve one instance, reproduce the running-time
// experiments, run the walk simulations, or evaluate the intersection bounds.
#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "kangaroo/harness.hpp"
#include "kangaroo/rng.hpp"
#include "kangaroo/solver.hpp"

namespace {

using namespace kangaroo;

// 2^61 - 1 and the prime factorization of its group order; used by the
// `reproduce` experiments.
constexpr std::uint64_t kDefaultPrime = 2305843009213693951ULL;
constexpr std::uint64_t kOrderPrimeFactors[] = {2, 3, 5, 7, 11, 13, 31, 41, 61, 151, 331, 1321};

u128 least_primitive_root(u128 p) {
    for (u128 g = 2;; ++g) {
        CyclicGroup grp(GroupKind::Multiplicative, p, g, p - 1);
        bool primitive = true;
        for (std::uint64_t q : kOrderPrimeFactors) {
            if ((p - 1) % q != 0) continue;
            if (grp.pow(grp.generator(), (p - 1) / q) == grp.identity()) {
                primitive = false;
                break;
            }
        }
        if (primitive) return g;
    }
}

GroupParams default_group() {
    GroupParams g;
    g.kind = GroupKind::Multiplicative;
    g.modulus = kDefaultPrime;
    g.order = kDefaultPrime - 1;
    g.generator = least_primitive_root(kDefaultPrime);
    return g;
}

void emit_report(const ExperimentReport& report, const std::string& out_path) {
    std::cout << report_to_json(report).dump(2) << '\n';
    if (!out_path.empty()) write_report(report, out_path);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Interval discrete logarithm via the kangaroo method, plus its walk laboratory"};
    app.require_subcommand(1);

    // ---- solve ----
    std::string kind_str = "mul", modulus_str, generator_str, order_str, h_str, a_str, b_str;
    std::uint64_t solve_base = 2, solve_c = 64, solve_seed = 1;
    CLI::App* solve_cmd = app.add_subcommand("solve", "solve one dlog instance");
    solve_cmd->set_help_flag("--help");  // leave --h free for the target element
    solve_cmd->add_option("--kind", kind_str, "group kind: mul or add")->required();
    solve_cmd->add_option("--modulus", modulus_str)->required();
    solve_cmd->add_option("--generator", generator_str)->required();
    solve_cmd->add_option("--order", order_str)->required();
    solve_cmd->add_option("--h", h_str, "target element")->required();
    solve_cmd->add_option("--a", a_str)->required();
    solve_cmd->add_option("--b", b_str)->required();
    solve_cmd->add_option("--base", solve_base, "step-size base");
    solve_cmd->add_option("--c", solve_c, "distinguished density constant");
    solve_cmd->add_option("--seed", solve_seed, "hash key seed");

    // ---- reproduce theorem1 ----
    std::uint64_t rep_width = 0, rep_trials = 0, rep_base = 2, rep_c = 64, rep_seed = 0;
    unsigned rep_workers = 1;
    bool rep_worst = false;
    std::string rep_out;
    CLI::App* reproduce_cmd = app.add_subcommand("reproduce", "rerun the running-time experiments");
    reproduce_cmd->require_subcommand(1);
    CLI::App* theorem1_cmd =
        reproduce_cmd->add_subcommand("theorem1", "mean group operations over random instances");
    theorem1_cmd->add_option("--width", rep_width, "interval width b-a")->required();
    theorem1_cmd->add_option("--trials", rep_trials)->required();
    theorem1_cmd->add_flag("--worst", rep_worst, "place x at the interval endpoint");
    theorem1_cmd->add_option("--base", rep_base);
    theorem1_cmd->add_option("--c", rep_c);
    theorem1_cmd->add_option("--seed", rep_seed)->required();
    theorem1_cmd->add_option("--out", rep_out)->required();
    theorem1_cmd->add_option("--workers", rep_workers, "trial worker count");

    // ---- simulate ----
    std::uint64_t sim_width = 0, sim_trials = 0, sim_base = 2, sim_seed = 0;
    unsigned sim_workers = 1;
    std::string sim_out;
    CLI::App* simulate_cmd = app.add_subcommand("simulate", "walk laboratory experiments");
    simulate_cmd->require_subcommand(1);
    CLI::App* hitting_cmd = simulate_cmd->add_subcommand("hitting", "anchored visit profile");
    CLI::App* beps_cmd = simulate_cmd->add_subcommand("b-epsilon", "collision-count estimate");
    CLI::App* sandwich_cmd =
        simulate_cmd->add_subcommand("sandwich", "first intersection vs its bounds");
    for (CLI::App* cmd : {hitting_cmd, beps_cmd, sandwich_cmd}) {
        cmd->add_option("--width", sim_width, "interval width the step set is built for")->required();
        cmd->add_option("--trials", sim_trials)->required();
        cmd->add_option("--base", sim_base);
        cmd->add_option("--seed", sim_seed)->required();
        cmd->add_option("--out", sim_out)->required();
        cmd->add_option("--workers", sim_workers, "trial worker count");
    }

    // ---- bounds ----
    double sbar = 0, tbar = 0, bval = 0, eps = 0;
    CLI::App* bounds_cmd = app.add_subcommand("bounds", "expected-intersection sandwich bounds");
    bounds_cmd->add_option("--sbar", sbar, "mean step size")->required();
    bounds_cmd->add_option("--tbar", tbar, "mean stopping time")->required();
    bounds_cmd->add_option("--b", bval, "expected pre-stop collisions")->required();
    bounds_cmd->add_option("--eps", eps, "visit-probability slack")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*solve_cmd) {
            GroupKind gk;
            if (kind_str == "mul")
                gk = GroupKind::Multiplicative;
            else if (kind_str == "add")
                gk = GroupKind::Additive;
            else
                throw std::invalid_argument("--kind must be mul or add");
            CyclicGroup group(gk, parse_u128(modulus_str), parse_u128(generator_str),
                              parse_u128(order_str));
            u128 a = parse_u128(a_str), b = parse_u128(b_str);
            StepSet steps = build_step_set(a, b, solve_base);
            Rng key_rng(solve_seed, 0, 2);
            SolveKeys keys{{key_rng.next_u64(), key_rng.next_u64()},
                           {key_rng.next_u64(), key_rng.next_u64()}};
            DistinguishedPredicate pred = make_distinguished_predicate(
                static_cast<std::uint64_t>(b - a), solve_c, keys.distinguished);
            SolveResult result =
                solve(group, group.element(parse_u128(h_str)), a, b, steps, pred, keys);
            std::cout << solve_result_to_json(result).dump(2) << '\n';
            return 0;
        }
        if (*theorem1_cmd) {
            ExperimentSpec spec;
            spec.kind = rep_worst ? ExperimentKind::SolveWorst
                                  : (rep_base == 2 ? ExperimentKind::SolveAverage
                                                   : ExperimentKind::BaseNSolve);
            spec.group = default_group();
            spec.a = 0;
            spec.b = rep_width;
            spec.base = rep_base;
            spec.c = rep_c;
            spec.trials = rep_trials;
            spec.master_seed = rep_seed;
            spec.workers = rep_workers;
            emit_report(run_experiment(spec), rep_out);
            return 0;
        }
        if (*hitting_cmd || *beps_cmd || *sandwich_cmd) {
            ExperimentSpec spec;
            spec.kind = *hitting_cmd ? ExperimentKind::Hitting
                                     : (*beps_cmd ? ExperimentKind::BEpsilon
                                                  : ExperimentKind::Sandwich);
            spec.a = 0;
            spec.b = sim_width;
            spec.base = sim_base;
            spec.trials = sim_trials;
            spec.master_seed = sim_seed;
            spec.workers = sim_workers;
            emit_report(run_experiment(spec), sim_out);
            return 0;
        }
        if (*bounds_cmd) {
            auto [lo, hi] = birthday_bounds(sbar, tbar, bval, eps);
            nlohmann::ordered_json j;
            j["schema"] = 1;
            j["lower"] = lo;
            j["upper"] = hi;
            std::cout << j.dump(2) << '\n';
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
