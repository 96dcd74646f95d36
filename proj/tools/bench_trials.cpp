// Compares the serial reference trial loop against the OpenMP-parallel one on
// a representative solve experiment and checks that both produce identical
// samples.
#include <chrono>
#include <cstdio>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "kangaroo/harness.hpp"

using namespace kangaroo;

namespace {

double timed_run(ExperimentSpec spec, unsigned workers, ExperimentReport& out) {
    spec.workers = workers;
    auto start = std::chrono::steady_clock::now();
    out = run_experiment(spec);
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

int main() {
    ExperimentSpec spec;
    spec.kind = ExperimentKind::SolveAverage;
    spec.group.kind = GroupKind::Multiplicative;
    spec.group.modulus = 2305843009213693951ULL;  // 2^61 - 1
    spec.group.generator = 37;
    spec.group.order = spec.group.modulus - 1;
    spec.a = 0;
    spec.b = u128{1} << 20;
    spec.trials = 2000;
    spec.master_seed = 20240901;

#ifdef _OPENMP
    unsigned hw = static_cast<unsigned>(omp_get_max_threads());
#else
    unsigned hw = 1;
#endif

    ExperimentReport serial, parallel;
    double t_serial = timed_run(spec, 1, serial);
    double t_parallel = timed_run(spec, hw, parallel);

    bool identical = serial.samples == parallel.samples;
    double per_trial_us = 1e6 * t_serial / static_cast<double>(spec.trials);

    std::printf("trials            : %llu (width 2^20, multiplicative mod 2^61-1)\n",
                static_cast<unsigned long long>(spec.trials));
    std::printf("serial            : %.3f s  (%.1f us/trial, mean %.1f ops)\n", t_serial,
                per_trial_us, serial.stats.mean);
    std::printf("parallel (%2u thr) : %.3f s\n", hw, t_parallel);
    std::printf("speedup           : %.2fx\n", t_serial / t_parallel);
    std::printf("samples identical : %s\n", identical ? "yes" : "NO");
    return identical ? 0 : 1;
}
