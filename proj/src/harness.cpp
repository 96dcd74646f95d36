#include "kangaroo/harness.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "kangaroo/rng.hpp"
#include "kangaroo/solver.hpp"

namespace kangaroo {

namespace {

constexpr u64 kSandwichProfileTrials = 20000;   // eps-hat estimation
constexpr u64 kSandwichBEpsilonTrials = 10000;  // per start

struct TrialOutcome {
    std::optional<double> value;
    u64 restarts = 0;
    std::vector<u64> window_words;  // hitting kind bitmask
};

// Runs `trials` independent jobs, serially or with OpenMP workers; results are
// keyed by trial index, so the schedule cannot change them. The serial path is
// the reference implementation the parallel one is tested against.
void run_trials(u64 trials, unsigned workers, std::vector<TrialOutcome>& out,
                const std::function<TrialOutcome(u64)>& job) {
    out.assign(trials, {});
#ifdef _OPENMP
    if (workers > 1) {
        #pragma omp parallel for schedule(static) num_threads(static_cast<int>(workers))
        for (std::int64_t t = 0; t < static_cast<std::int64_t>(trials); ++t)
            out[static_cast<u64>(t)] = job(static_cast<u64>(t));
        return;
    }
#else
    (void)workers;
#endif
    for (u64 t = 0; t < trials; ++t) out[t] = job(t);
}

u64 trial_seed(u64 master, u64 trial) { return mix64(mix64(master + 0x9e3779b97f4a7c15ULL) ^ trial); }

HashKey key_from(Rng& rng) { return HashKey{rng.next_u64(), rng.next_u64()}; }

nlohmann::ordered_json json_u128(u128 v) {
    if (v <= UINT64_MAX) return static_cast<u64>(v);
    return to_string(v);
}

}  // namespace

const char* kind_name(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::SolveAverage: return "solve-average";
        case ExperimentKind::SolveWorst: return "solve-worst";
        case ExperimentKind::Hitting: return "hitting";
        case ExperimentKind::BEpsilon: return "b-epsilon";
        case ExperimentKind::Sandwich: return "sandwich";
        case ExperimentKind::BaseNSolve: return "base-n-solve";
    }
    return "unknown";
}

Summary summarize(const std::vector<double>& samples) {
    if (samples.size() < 2) throw InsufficientSamples("summarize needs at least two samples");
    double n = static_cast<double>(samples.size());
    double mean = 0;
    for (double v : samples) mean += v;
    mean /= n;
    double ss = 0;
    for (double v : samples) ss += (v - mean) * (v - mean);
    Summary s;
    s.mean = mean;
    s.stderr_ = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
    s.ci_lo = mean - 1.96 * s.stderr_;
    s.ci_hi = mean + 1.96 * s.stderr_;
    return s;
}

namespace {

ExperimentReport run_solve_experiment(const ExperimentSpec& spec) {
    const bool worst = spec.kind == ExperimentKind::SolveWorst;
    const u128 width = spec.b - spec.a;
    const CyclicGroup group(spec.group.kind, spec.group.modulus, spec.group.generator,
                            spec.group.order);
    const StepSet steps = build_step_set(spec.a, spec.b, spec.base);

    ExperimentReport report;
    report.spec = spec;

    std::vector<TrialOutcome> outcomes;
    double precomp_sum = 0, verify_sum = 0, total_ops_sum = 0;
    std::vector<double> precomp(spec.trials, 0), verify(spec.trials, 0), totals(spec.trials, 0);
    run_trials(spec.trials, spec.workers, outcomes, [&](u64 t) -> TrialOutcome {
        Rng rng(spec.master_seed, t);
        Rng draw = rng.substream(1);
        Rng key_rng = rng.substream(2);
        u128 x = worst ? spec.a : spec.a + draw.below(static_cast<u64>(width) + 1);
        SolveKeys keys{key_from(key_rng), key_from(key_rng)};
        const Element h = group.pow(group.generator(), x);
        const DistinguishedPredicate pred =
            make_distinguished_predicate(static_cast<u64>(width), spec.c, keys.distinguished);
        TrialOutcome out;
        try {
            SolveResult r = solve(group, h, spec.a, spec.b, steps, pred, keys);
            if (group.pow(group.generator(), r.x) != h)
                throw VerificationFailed("solver returned an unverified exponent");
            out.value = static_cast<double>(r.tame_steps + r.wild_steps);
            out.restarts = r.restarts;
            precomp[t] = static_cast<double>(r.precomputation_ops);
            verify[t] = static_cast<double>(r.verification_ops);
            totals[t] = static_cast<double>(r.group_ops);
        } catch (const SolveFailed&) {
            out.restarts = SolveOptions{}.max_restarts;
        }
        return out;
    });

    std::vector<double> values;
    for (u64 t = 0; t < spec.trials; ++t) {
        report.trial_seeds.push_back(trial_seed(spec.master_seed, t));
        report.trial_restarts.push_back(outcomes[t].restarts);
        report.samples.push_back(outcomes[t].value);
        if (outcomes[t].value) {
            values.push_back(*outcomes[t].value);
            precomp_sum += precomp[t];
            verify_sum += verify[t];
            total_ops_sum += totals[t];
        } else {
            ++report.failures;
        }
    }
    if (report.failures * 100 > spec.trials)
        throw ExperimentFailed("solve failure rate above 1%");

    report.stats = summarize(values);
    report.reference = heuristic_cost(static_cast<double>(width), steps.mean_double(),
                                      static_cast<double>(spec.c),
                                      worst ? StartGap::Worst : StartGap::Average);
    report.relative_deviation = (report.stats.mean - report.reference) / report.reference;
    double n = static_cast<double>(values.size());
    report.extra["mean_precomputation_ops"] = precomp_sum / n;
    report.extra["mean_verification_ops"] = verify_sum / n;
    report.extra["mean_group_ops_total"] = total_ops_sum / n;
    report.extra["step_set"] = step_set_to_json(steps);
    return report;
}

ExperimentReport run_hitting_experiment(const ExperimentSpec& spec) {
    const u128 width = spec.b - spec.a;
    const StepSet steps = spec.uniform_d
                              ? StepSet::uniform(spec.base, *spec.uniform_d)
                              : build_step_set_for_width(static_cast<u64>(width), spec.base);
    ExperimentReport report;
    report.spec = spec;
    const u64 window = spec.window_len;
    const u64 words = (window + 63) / 64;

    std::vector<TrialOutcome> outcomes;
    run_trials(spec.trials, spec.workers, outcomes, [&](u64 t) -> TrialOutcome {
        Rng rng(spec.master_seed, t);
        StoppingOutcome stop = steps.base == 2 ? run_stopping_time(steps, rng)
                                               : run_stopping_time_base_n(steps, rng);
        TrialOutcome out;
        out.window_words.assign(words, 0);
        u64 visited = 0;
        u64 end = stop.anchor + window;
        auto mark = [&](u64 p) {
            if (p >= end) return;
            u64 off = p - stop.anchor;
            u64& word = out.window_words[off >> 6];
            u64 bit = u64{1} << (off & 63);
            if (!(word & bit)) {
                word |= bit;
                ++visited;
            }
        };
        mark(stop.position);  // post-stopping trail only
        LazyWalk walk{&steps, &rng, stop.position};
        while (walk.pos < end)
            if (walk.advance().moved) mark(walk.pos);
        out.value = static_cast<double>(visited);
        return out;
    });

    std::vector<u64> hits(window, 0);
    std::vector<double> values;
    for (u64 t = 0; t < spec.trials; ++t) {
        report.trial_seeds.push_back(trial_seed(spec.master_seed, t));
        report.trial_restarts.push_back(0);
        report.samples.push_back(outcomes[t].value);
        values.push_back(*outcomes[t].value);
        for (u64 i = 0; i < window; ++i)
            if ((outcomes[t].window_words[i >> 6] >> (i & 63)) & 1) ++hits[i];
    }
    report.stats = summarize(values);
    double inv_mean = 1.0 / steps.mean_double();
    report.reference = static_cast<double>(window) * inv_mean;
    report.relative_deviation = (report.stats.mean - report.reference) / report.reference;

    nlohmann::ordered_json profile = nlohmann::ordered_json::array();
    for (u64 i = 0; i < window; ++i)
        profile.push_back(static_cast<double>(hits[i]) / static_cast<double>(spec.trials));
    report.extra["window_len"] = window;
    report.extra["visit_target"] = inv_mean;
    report.extra["profile"] = std::move(profile);
    report.extra["step_set"] = step_set_to_json(steps);
    return report;
}

ExperimentReport run_b_epsilon_experiment(const ExperimentSpec& spec) {
    const u128 width = spec.b - spec.a;
    const StepSet steps = spec.uniform_d
                              ? StepSet::uniform(spec.base, *spec.uniform_d)
                              : build_step_set_for_width(static_cast<u64>(width), spec.base);
    ExperimentReport report;
    report.spec = spec;

    std::vector<std::vector<u64>> counts;
    BEpsilonEstimate est =
        estimate_b_epsilon(steps, spec.m_horizon, spec.trials, Rng(spec.master_seed), &counts);

    std::vector<double> values;
    for (u64 t = 0; t < spec.trials; ++t) {
        report.trial_seeds.push_back(trial_seed(spec.master_seed, t));
        report.trial_restarts.push_back(0);
        double v = static_cast<double>(counts.front()[t]);  // worst start Y0 = X0
        report.samples.push_back(v);
        values.push_back(v);
    }
    report.stats = summarize(values);
    report.reference = 1.0 / static_cast<double>(steps.d + 1);
    report.relative_deviation = (est.max_estimate - report.reference) / report.reference;

    report.extra["estimate_max"] = est.max_estimate;
    report.extra["per_start_y0"] = est.start_offsets;
    report.extra["per_start_estimates"] = est.per_start;
    report.extra["per_start_mean_stop_steps"] = est.mean_stop_steps;
    report.extra["m_horizon"] = spec.m_horizon ? spec.m_horizon : 64 * (steps.d + 1);
    report.extra["truncated_share"] = est.truncated_share;
    report.extra["step_set"] = step_set_to_json(steps);
    return report;
}

ExperimentReport run_sandwich_experiment(const ExperimentSpec& spec) {
    const u128 width = spec.b - spec.a;
    const StepSet steps = spec.uniform_d
                              ? StepSet::uniform(spec.base, *spec.uniform_d)
                              : build_step_set_for_width(static_cast<u64>(width), spec.base);
    ExperimentReport report;
    report.spec = spec;

    std::vector<TrialOutcome> outcomes;
    run_trials(spec.trials, spec.workers, outcomes, [&](u64 t) -> TrialOutcome {
        Rng rng(spec.master_seed, t);
        TrialOutcome out;
        out.value = static_cast<double>(first_intersection(steps, 0, 0, rng));
        return out;
    });
    std::vector<double> values;
    for (u64 t = 0; t < spec.trials; ++t) {
        report.trial_seeds.push_back(trial_seed(spec.master_seed, t));
        report.trial_restarts.push_back(0);
        report.samples.push_back(outcomes[t].value);
        values.push_back(*outcomes[t].value);
    }
    report.stats = summarize(values);

    Rng aux(spec.master_seed, UINT64_MAX);
    BEpsilonEstimate est =
        estimate_b_epsilon(steps, spec.m_horizon, kSandwichBEpsilonTrials, aux.substream(1));
    std::vector<double> profile =
        hitting_profile(steps, kSandwichProfileTrials, std::min<u64>(64, 8 * steps.s_max()),
                        aux.substream(2));
    double s_bar = steps.mean_double();
    double eps_hat = 0;
    for (double p : profile) eps_hat = std::max(eps_hat, std::abs(p * s_bar - 1.0));
    auto [lo, hi] = birthday_bounds(s_bar, est.worst_start_mean_stop, est.max_estimate, eps_hat);

    report.reference = s_bar;
    report.relative_deviation = (report.stats.mean - s_bar) / s_bar;
    report.extra["b_epsilon"] = est.max_estimate;
    report.extra["t_bar"] = est.worst_start_mean_stop;
    report.extra["eps_hat"] = eps_hat;
    report.extra["bound_lower"] = lo;
    report.extra["bound_upper"] = hi;
    report.extra["contained"] = report.stats.mean >= lo && report.stats.mean <= hi;
    report.extra["step_set"] = step_set_to_json(steps);
    return report;
}

}  // namespace

ExperimentReport run_experiment(const ExperimentSpec& spec) {
    if (spec.trials < 1) throw std::invalid_argument("need at least one trial");
    if (spec.b <= spec.a) throw std::invalid_argument("interval is empty");
    auto start = std::chrono::steady_clock::now();
    ExperimentReport report;
    switch (spec.kind) {
        case ExperimentKind::SolveAverage:
        case ExperimentKind::SolveWorst:
        case ExperimentKind::BaseNSolve:
            report = run_solve_experiment(spec);
            break;
        case ExperimentKind::Hitting:
            report = run_hitting_experiment(spec);
            break;
        case ExperimentKind::BEpsilon:
            report = run_b_epsilon_experiment(spec);
            break;
        case ExperimentKind::Sandwich:
            report = run_sandwich_experiment(spec);
            break;
    }
    report.wall_clock_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

nlohmann::ordered_json report_to_json(const ExperimentReport& report) {
    const ExperimentSpec& spec = report.spec;
    nlohmann::ordered_json j;
    j["schema"] = 1;
    j["kind"] = kind_name(spec.kind);
    if (spec.kind == ExperimentKind::SolveAverage || spec.kind == ExperimentKind::SolveWorst ||
        spec.kind == ExperimentKind::BaseNSolve) {
        j["group"] = {
            {"kind", spec.group.kind == GroupKind::Multiplicative ? "mul" : "add"},
            {"modulus", json_u128(spec.group.modulus)},
            {"generator", json_u128(spec.group.generator)},
            {"order", json_u128(spec.group.order)},
        };
    }
    j["a"] = json_u128(spec.a);
    j["b"] = json_u128(spec.b);
    j["base"] = spec.base;
    j["c"] = spec.c;
    j["trials"] = spec.trials;
    j["master_seed"] = spec.master_seed;
    nlohmann::ordered_json samples = nlohmann::ordered_json::array();
    for (const auto& s : report.samples) {
        if (s)
            samples.push_back(*s);
        else
            samples.push_back(nullptr);
    }
    j["samples"] = std::move(samples);
    j["failures"] = report.failures;
    j["mean"] = report.stats.mean;
    j["stderr"] = report.stats.stderr_;
    j["ci95"] = {report.stats.ci_lo, report.stats.ci_hi};
    j["reference"] = report.reference;
    j["relative_deviation"] = report.relative_deviation;
    for (auto& [key, value] : report.extra.items()) j[key] = value;
    j["wall_clock_seconds"] = report.wall_clock_seconds;
    return j;
}

std::string report_to_csv(const ExperimentReport& report) {
    std::string out = "trial,seed,value,restarts\n";
    char buf[64];
    for (std::size_t t = 0; t < report.samples.size(); ++t) {
        out += std::to_string(t);
        out += ',';
        out += std::to_string(report.trial_seeds[t]);
        out += ',';
        if (report.samples[t]) {
            double v = *report.samples[t];
            if (v == std::floor(v) && std::abs(v) < 1e15) {
                std::snprintf(buf, sizeof buf, "%.0f", v);
            } else {
                std::snprintf(buf, sizeof buf, "%.17g", v);
            }
            out += buf;
        }
        out += ',';
        out += std::to_string(report.trial_restarts[t]);
        out += '\n';
    }
    return out;
}

void write_report(const ExperimentReport& report, const std::string& path) {
    std::string csv_path = path;
    std::size_t dot = csv_path.find_last_of('.');
    std::size_t slash = csv_path.find_last_of('/');
    if (dot != std::string::npos && (slash == std::string::npos || dot > slash))
        csv_path.resize(dot);
    csv_path += ".csv";

    std::ofstream json_file(path, std::ios::binary);
    if (!json_file) throw std::runtime_error("cannot write " + path);
    json_file << report_to_json(report).dump(2) << '\n';

    std::ofstream csv_file(csv_path, std::ios::binary);
    if (!csv_file) throw std::runtime_error("cannot write " + csv_path);
    csv_file << report_to_csv(report);
}

}  // namespace kangaroo
