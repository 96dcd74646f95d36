// Seeded Monte Carlo experiment orchestration, statistics, and report
// persistence. Trials derive independent substreams from the master seed, so
// serial and worker-parallel runs produce identical samples.
#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "kangaroo/group.hpp"
#include "kangaroo/stepset.hpp"
#include "kangaroo/zwalk.hpp"

namespace kangaroo {

class InsufficientSamples : public std::runtime_error {
public:
    explicit InsufficientSamples(const std::string& what) : std::runtime_error(what) {}
};

class ExperimentFailed : public std::runtime_error {
public:
    explicit ExperimentFailed(const std::string& what) : std::runtime_error(what) {}
};

enum class ExperimentKind { SolveAverage, SolveWorst, Hitting, BEpsilon, Sandwich, BaseNSolve };

const char* kind_name(ExperimentKind kind);

struct GroupParams {
    GroupKind kind = GroupKind::Multiplicative;
    u128 modulus = 0;
    u128 generator = 0;
    u128 order = 0;
};

struct ExperimentSpec {
    ExperimentKind kind = ExperimentKind::SolveAverage;
    GroupParams group;  // solve kinds only
    u128 a = 0;
    u128 b = 0;
    u64 base = 2;
    u64 c = 64;
    u64 trials = 1;
    u64 master_seed = 1;
    unsigned workers = 1;
    u64 window_len = 64;               // hitting kind
    u64 m_horizon = 0;                 // b-epsilon kind; 0 means 64*(d+1)
    std::optional<u64> uniform_d;      // simulation kinds: use uniform masses {base^0..base^d}
};

struct Summary {
    double mean = 0;
    double stderr_ = 0;
    double ci_lo = 0;
    double ci_hi = 0;
};

// Sample mean, stderr (unbiased variance), and the 1.96-sigma interval.
Summary summarize(const std::vector<double>& samples);

struct ExperimentReport {
    ExperimentSpec spec;
    std::vector<std::optional<double>> samples;  // one slot per trial; empty = failed
    std::vector<u64> trial_seeds;
    std::vector<u64> trial_restarts;
    u64 failures = 0;
    Summary stats;
    double reference = 0;
    double relative_deviation = 0;
    double wall_clock_seconds = 0;
    nlohmann::ordered_json extra;  // kind-specific results
};

ExperimentReport run_experiment(const ExperimentSpec& spec);

nlohmann::ordered_json report_to_json(const ExperimentReport& report);
std::string report_to_csv(const ExperimentReport& report);

// Writes <path> as JSON and the sibling .csv with per-trial samples.
void write_report(const ExperimentReport& report, const std::string& path);

}  // namespace kangaroo
