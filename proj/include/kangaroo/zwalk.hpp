// Line-walk laboratory on the integers: first-intersection simulation, the
// coupon stopping-time constructions, collision-count estimation, composition
// counting, and the closed-form intersection bounds.
#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "kangaroo/rng.hpp"
#include "kangaroo/stepset.hpp"

namespace kangaroo {

class HorizonExceeded : public std::runtime_error {
public:
    explicit HorizonExceeded(const std::string& what) : std::runtime_error(what) {}
};

class Intractable : public std::runtime_error {
public:
    explicit Intractable(const std::string& what) : std::runtime_error(what) {}
};

// Membership over a sliding window of visited positions. Positions below the
// window are forgotten; an increasing walk can never revisit them.
class WalkTrail {
public:
    WalkTrail(u64 span, u64 base_position);

    void insert(u64 pos);
    bool contains(u64 pos) const;

private:
    std::vector<u64> words_;
    u64 capacity_;  // power of two
    u64 lo_;

    void clear_span(u64 from, u64 to);
    void forget_below(u64 new_lo);
};

// A plain increasing walk; one step per call.
struct PlainWalk {
    const StepSet* steps;
    Rng rng;
    u64 pos;

    u64 advance() {
        pos += steps->sizes[steps->sample_index(rng.next_u64())];
        return pos;
    }
};

// The lazy variant: each step first samples a size, then moves with
// probability 1/2. Used only inside the stopping-time construction. Borrows
// the caller's generator so a walk can be continued after the construction.
struct LazyWalk {
    const StepSet* steps;
    Rng* rng;
    u64 pos = 0;
    u64 steps_taken = 0;

    struct Step {
        std::size_t index;
        bool moved;
    };
    Step advance() {
        std::size_t idx = steps->sample_index(rng->next_u64());
        bool moved = rng->coin();
        if (moved) pos += steps->sizes[idx];
        ++steps_taken;
        return {idx, moved};
    }
};

struct StoppingOutcome {
    u64 accepted_step = 0;     // lazy-walk step index at acceptance
    u64 tentative_rounds = 0;  // rejected candidates before acceptance
    u64 delta = 0;             // uniform offset in [0, n^d)
    u64 anchor = 0;            // position - delta
    u64 position = 0;          // lazy-walk position at acceptance
};

// Steps taken by the X walk until it first lands on a position visited by the
// Y walk. Pre: y0 < x0 + s_max.
u64 first_intersection(const StepSet& s, u64 x0, u64 y0, Rng rng);

// Coupon construction for base 2: the first time every non-maximal size has
// been chosen, the accumulated first-choice displacements form a uniform
// offset; accept with the tail mass above it, else reset and continue.
StoppingOutcome run_stopping_time(const StepSet& s, Rng& rng);

// Base-n generalization working on blocks of n-1 consecutive lazy steps.
// For n = 2 this reduces exactly to run_stopping_time.
StoppingOutcome run_stopping_time_base_n(const StepSet& s, Rng& rng);

// Fraction of trials whose post-stopping trail visits each position of
// [anchor, anchor + window_len), with the anchor realized per trial by the
// stopping construction.
std::vector<double> hitting_profile(const StepSet& s, u64 trials, u64 window_len, Rng rng);

// Fraction of trials (walks from 0) visiting each position of
// [offset, offset + window_len); lazy or plain stepping.
std::vector<double> visit_profile(const StepSet& s, u64 trials, u64 offset, u64 window_len,
                                  bool lazy, Rng rng);

// Ordered i-tuples of sizes summing to `value`, counted exactly.
u64 count_compositions(u64 value, u64 tuple_len, const StepSet& s);
// max over value of count_compositions(value, tuple_len, s)
u64 max_composition_count(u64 tuple_len, const StepSet& s);

// max over v of the i-step transition probability from 0 to v under the
// actual masses. Guard: i*d <= 64.
double max_transition_prob(const StepSet& s, u64 i);

// Closed-form collision-count bound from per-step maxima:
//   sum_i (1+2i) maxP^i + M (2 (smax/sbar)^2 / sbar (1+eps) + e^-M)
double b_epsilon_upper_bound(std::span<const double> max_probs, u64 m_horizon, double s_max,
                             double s_bar, double eps);

struct BEpsilonEstimate {
    std::vector<u64> start_offsets;      // Y0 - X0 per grid start
    std::vector<double> per_start;       // mean collision count per start
    std::vector<double> mean_stop_steps; // mean truncated stopping step per start
    double max_estimate = 0;
    double worst_start_mean_stop = 0;    // mean_stop_steps at the Y0 = X0 start
    double truncated_share = 0;          // fraction of trials cut off at the horizon
};

// Monte Carlo estimate of the worst-case expected number of collisions before
// the walks leave the start-dependent window. The stopping time is the first
// passage of Y0 + s_max, truncated at m_horizon (0 means 64*(d+1)); collisions
// are X positions already visited by Y. Starts cover a 16-point grid of
// Y0 - X0 in [0, s_max).
BEpsilonEstimate estimate_b_epsilon(const StepSet& s, u64 m_horizon, u64 trials_per_start,
                                    Rng rng, std::vector<std::vector<u64>>* counts = nullptr);

// Expected-first-intersection sandwich:
//   lower = 1 + sbar max(0, 1-sqrt(B))^2/(1+eps)
//   upper = 1 + ((sqrt(sbar(1+B)) + sqrt(tbar))/(1-eps))^2
std::pair<double, double> birthday_bounds(double s_bar, double t_bar, double b, double eps);

// Smallest sample count M with P(sum of M draws < (1+N) s_max) <= eps for any
// nonnegative variable with the given mean and maximum (Hoeffding).
u64 hoeffding_sample_count(double s_max, double s_bar, double n_blocks, double eps);

}  // namespace kangaroo
