#include "kangaroo/zwalk.hpp"

#include <algorithm>
#include <cmath>

namespace kangaroo {

namespace {

constexpr u64 kStoppingSafetyAbort = 1'000'000'000;  // construction bug tripwire

u64 round_up_pow2(u64 v) {
    u64 p = 64;
    while (p < v) p <<= 1;
    return p;
}

// Acceptance thresholds by size rank: accept_threshold[k] is the 2^64-scaled
// tail mass of sizes >= sizes[k].
std::vector<u64> tail_thresholds(const StepSet& s) {
    std::vector<u64> out(s.sizes.size());
    Rational tail = 0;
    for (std::size_t k = s.sizes.size(); k-- > 0;) {
        tail += s.masses[k];
        out[k] = tail >= Rational(1) ? UINT64_MAX : tail.floor_scale64();
    }
    return out;
}

// Accept probability = mass of sizes strictly above delta. Always consumes
// exactly one draw so every candidate costs the same amount of stream.
bool accept_candidate(const StepSet& s, const std::vector<u64>& tails, u64 delta, Rng& rng) {
    auto it = std::upper_bound(s.sizes.begin(), s.sizes.end(), delta);
    u64 threshold = it == s.sizes.end() ? 0 : tails[static_cast<std::size_t>(it - s.sizes.begin())];
    u64 draw = rng.next_u64();
    return threshold == UINT64_MAX || draw < threshold;
}

u64 binomial(u64 n, u64 k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    u64 r = 1;
    for (u64 i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

struct TrailedWalk {
    PlainWalk walk;
    WalkTrail trail;

    TrailedWalk(const StepSet& s, u64 y0, Rng rng)
        : walk{&s, rng, y0}, trail(2 * (s.s_max() + 1), y0) {
        trail.insert(y0);
    }
    void advance_to(u64 x) {
        while (walk.pos < x) trail.insert(walk.advance());
    }
    bool visited(u64 p) const { return trail.contains(p); }
};

}  // namespace

WalkTrail::WalkTrail(u64 span, u64 base_position)
    : capacity_(round_up_pow2(span)), lo_(base_position) {
    words_.assign(capacity_ / 64, 0);
}

void WalkTrail::clear_span(u64 from, u64 to) {
    u64 fw = from >> 6;
    u64 lw = (to - 1) >> 6;
    u64 head = from & 63;
    u64 tail = to - (lw << 6);  // 1..64 bits occupied in the last word
    if (fw == lw) {
        u64 mask = (tail == 64 ? ~u64{0} : (u64{1} << tail) - 1) & ~((u64{1} << head) - 1);
        words_[fw] &= ~mask;
        return;
    }
    words_[fw] &= (u64{1} << head) - 1;
    for (u64 w = fw + 1; w < lw; ++w) words_[w] = 0;
    words_[lw] &= tail == 64 ? u64{0} : ~((u64{1} << tail) - 1);
}

void WalkTrail::forget_below(u64 new_lo) {
    if (new_lo <= lo_) return;
    if (new_lo - lo_ >= capacity_) {
        std::fill(words_.begin(), words_.end(), u64{0});
        lo_ = new_lo;
        return;
    }
    u64 first = lo_ & (capacity_ - 1);
    u64 count = new_lo - lo_;
    while (count) {
        u64 span = std::min(count, capacity_ - first);
        clear_span(first, first + span);
        first = 0;
        count -= span;
    }
    lo_ = new_lo;
}

void WalkTrail::insert(u64 pos) {
    if (pos < lo_) throw std::logic_error("insert below trail window");
    if (pos >= lo_ + capacity_) forget_below(pos - capacity_ + 1);
    u64 slot = pos & (capacity_ - 1);
    words_[slot >> 6] |= u64{1} << (slot & 63);
}

bool WalkTrail::contains(u64 pos) const {
    if (pos < lo_ || pos >= lo_ + capacity_) return false;
    u64 slot = pos & (capacity_ - 1);
    return (words_[slot >> 6] >> (slot & 63)) & 1;
}

u64 first_intersection(const StepSet& s, u64 x0, u64 y0, Rng rng) {
    PlainWalk x{&s, rng.substream(1), x0};
    TrailedWalk y(s, y0, rng.substream(2));
    double horizon_d = 1e4 * s.mean_double();
    u64 horizon = horizon_d >= 1e18 ? UINT64_MAX : static_cast<u64>(horizon_d) + 1;
    for (u64 i = 1; i <= horizon; ++i) {
        u64 pos = x.advance();
        y.advance_to(pos);
        if (y.visited(pos)) return i;
    }
    throw HorizonExceeded("no intersection within 10^4 * mean steps");
}

StoppingOutcome run_stopping_time(const StepSet& s, Rng& rng) {
    if (s.base != 2) throw std::invalid_argument("base-2 stopping rule needs a base-2 step set");
    const std::size_t coupons = s.sizes.size() - 1;  // all sizes except s_max
    auto tails = tail_thresholds(s);

    LazyWalk walk{&s, &rng};

    StoppingOutcome out;
    if (coupons == 0) return out;  // empty coupon set: accept at step 0 with probability 1

    std::vector<bool> chosen(coupons, false);
    std::vector<u64> displacement(coupons, 0);
    std::size_t remaining = coupons;

    for (;;) {
        if (walk.steps_taken > kStoppingSafetyAbort)
            throw std::logic_error("stopping construction failed to terminate");
        auto step = walk.advance();
        if (step.index < coupons && !chosen[step.index]) {
            chosen[step.index] = true;
            displacement[step.index] = step.moved ? s.sizes[step.index] : 0;
            --remaining;
        }
        if (remaining == 0) {
            u64 delta = 0;
            for (u64 d : displacement) delta += d;
            if (accept_candidate(s, tails, delta, rng)) {
                out.accepted_step = walk.steps_taken;
                out.delta = delta;
                out.position = walk.pos;
                out.anchor = walk.pos - delta;
                return out;
            }
            ++out.tentative_rounds;
            std::fill(chosen.begin(), chosen.end(), false);
            std::fill(displacement.begin(), displacement.end(), 0);
            remaining = coupons;
        }
    }
}

StoppingOutcome run_stopping_time_base_n(const StepSet& s, Rng& rng) {
    if (s.base > 8) throw std::invalid_argument("block stopping rule supports bases up to 8");
    const u64 n = s.base;
    const std::size_t coupons = s.sizes.size() - 1;
    auto tails = tail_thresholds(s);

    LazyWalk walk{&s, &rng};

    StoppingOutcome out;
    if (coupons == 0) return out;

    std::vector<bool> defined(coupons, false);
    std::vector<u64> moves(coupons, 0);  // m in delta_s = m * s
    std::size_t remaining = coupons;

    for (;;) {
        if (walk.steps_taken > kStoppingSafetyAbort)
            throw std::logic_error("stopping construction failed to terminate");
        // one block of n-1 consecutive lazy steps
        std::size_t block_index = 0;
        bool all_same = true;
        u64 block_moves = 0;
        for (u64 j = 0; j < n - 1; ++j) {
            auto step = walk.advance();
            if (j == 0)
                block_index = step.index;
            else if (step.index != block_index)
                all_same = false;
            if (step.moved) ++block_moves;
        }
        if (all_same && block_index < coupons && !defined[block_index]) {
            u64 c = binomial(n - 1, block_moves);
            bool take = c == 1 || rng.next_u64() < UINT64_MAX / c;
            if (take) {
                defined[block_index] = true;
                moves[block_index] = block_moves;
                --remaining;
            }
        }
        if (remaining == 0) {
            u64 delta = 0;
            for (std::size_t k = 0; k < coupons; ++k) delta += moves[k] * s.sizes[k];
            if (accept_candidate(s, tails, delta, rng)) {
                out.accepted_step = walk.steps_taken;
                out.delta = delta;
                out.position = walk.pos;
                out.anchor = walk.pos - delta;
                return out;
            }
            ++out.tentative_rounds;
            std::fill(defined.begin(), defined.end(), false);
            std::fill(moves.begin(), moves.end(), 0);
            remaining = coupons;
        }
    }
}

std::vector<double> hitting_profile(const StepSet& s, u64 trials, u64 window_len, Rng rng) {
    if (window_len == 0 || window_len > std::max<u64>(64, 8 * s.s_max()))
        throw std::invalid_argument("window length out of range");
    std::vector<u64> hits(window_len, 0);
    for (u64 t = 0; t < trials; ++t) {
        Rng trial_rng = rng.substream(t);
        StoppingOutcome stop = s.base == 2 ? run_stopping_time(s, trial_rng)
                                           : run_stopping_time_base_n(s, trial_rng);
        // the uniformity statement is about the trail from the accepted
        // stopping time onward: the stopping position, then later moves
        u64 end = stop.anchor + window_len;
        if (stop.position < end) ++hits[stop.position - stop.anchor];
        LazyWalk walk{&s, &trial_rng, stop.position};
        while (walk.pos < end) {
            if (walk.advance().moved && walk.pos < end) ++hits[walk.pos - stop.anchor];
        }
    }
    std::vector<double> out(window_len);
    for (u64 i = 0; i < window_len; ++i) out[i] = static_cast<double>(hits[i]) / static_cast<double>(trials);
    return out;
}

std::vector<double> visit_profile(const StepSet& s, u64 trials, u64 offset, u64 window_len,
                                  bool lazy, Rng rng) {
    std::vector<u64> hits(window_len, 0);
    const u64 end = offset + window_len;
    for (u64 t = 0; t < trials; ++t) {
        Rng trial_rng = rng.substream(t);
        if (lazy) {
            LazyWalk walk{&s, &trial_rng};
            if (offset == 0) ++hits[0];
            while (walk.pos < end) {
                if (walk.advance().moved && walk.pos >= offset && walk.pos < end)
                    ++hits[walk.pos - offset];
            }
        } else {
            PlainWalk walk{&s, trial_rng, 0};
            if (offset == 0) ++hits[0];
            while (walk.pos < end) {
                u64 p = walk.advance();
                if (p >= offset && p < end) ++hits[p - offset];
            }
        }
    }
    std::vector<double> out(window_len);
    for (u64 i = 0; i < window_len; ++i) out[i] = static_cast<double>(hits[i]) / static_cast<double>(trials);
    return out;
}

u64 count_compositions(u64 value, u64 tuple_len, const StepSet& s) {
    if (tuple_len == 0) throw std::invalid_argument("tuple length must be positive");
    if (value > tuple_len * s.s_max()) return 0;
    std::vector<u64> ways(value + 1, 0);
    ways[0] = 1;
    for (u64 round = 0; round < tuple_len; ++round) {
        std::vector<u64> next(value + 1, 0);
        for (u64 v = 0; v <= value; ++v) {
            if (ways[v] == 0) continue;
            for (u64 sz : s.sizes) {
                if (v + sz > value) break;
                next[v + sz] += ways[v];
            }
        }
        ways = std::move(next);
    }
    return ways[value];
}

u64 max_composition_count(u64 tuple_len, const StepSet& s) {
    if (tuple_len == 0) throw std::invalid_argument("tuple length must be positive");
    u64 span = tuple_len * s.s_max();
    std::vector<u64> ways(span + 1, 0);
    ways[0] = 1;
    for (u64 round = 0; round < tuple_len; ++round) {
        std::vector<u64> next(span + 1, 0);
        for (u64 v = 0; v <= span; ++v) {
            if (ways[v] == 0) continue;
            for (u64 sz : s.sizes) next[v + sz] += ways[v];
        }
        ways = std::move(next);
    }
    return *std::max_element(ways.begin(), ways.end());
}

double max_transition_prob(const StepSet& s, u64 i) {
    if (i == 0) throw std::invalid_argument("step count must be positive");
    if (i * s.d > 64) throw Intractable("i*d exceeds the tractability guard");
    std::vector<double> p(s.masses.size());
    for (std::size_t k = 0; k < p.size(); ++k) p[k] = s.masses[k].to_double();
    u64 span = i * s.s_max();
    std::vector<double> prob(span + 1, 0.0);
    prob[0] = 1.0;
    for (u64 round = 0; round < i; ++round) {
        std::vector<double> next(span + 1, 0.0);
        for (u64 v = 0; v <= span; ++v) {
            if (prob[v] == 0.0) continue;
            for (std::size_t k = 0; k < s.sizes.size(); ++k) {
                u64 w = v + s.sizes[k];
                if (w <= span) next[w] += prob[v] * p[k];
            }
        }
        prob = std::move(next);
    }
    return *std::max_element(prob.begin(), prob.end());
}

double b_epsilon_upper_bound(std::span<const double> max_probs, u64 m_horizon, double s_max,
                             double s_bar, double eps) {
    if (max_probs.size() != m_horizon)
        throw std::invalid_argument("need one max probability per horizon step");
    double sum = 0;
    for (u64 i = 1; i <= m_horizon; ++i)
        sum += (1.0 + 2.0 * static_cast<double>(i)) * max_probs[i - 1];
    double ratio = s_max / s_bar;
    double m = static_cast<double>(m_horizon);
    return sum + m * (2.0 * ratio * ratio / s_bar * (1.0 + eps) + std::exp(-m));
}

BEpsilonEstimate estimate_b_epsilon(const StepSet& s, u64 m_horizon, u64 trials_per_start,
                                    Rng rng, std::vector<std::vector<u64>>* counts) {
    if (trials_per_start == 0) throw std::invalid_argument("need at least one trial per start");
    const u64 s_max = s.s_max();
    const u64 horizon = m_horizon ? m_horizon : 64 * (s.d + 1);

    BEpsilonEstimate est;
    for (u64 k = 0; k < 16; ++k) {
        u64 y0 = k * s_max / 16;
        if (!est.start_offsets.empty() && est.start_offsets.back() == y0) continue;
        est.start_offsets.push_back(y0);
    }
    if (counts) counts->assign(est.start_offsets.size(), {});

    u64 truncated = 0;
    for (std::size_t si = 0; si < est.start_offsets.size(); ++si) {
        const u64 y0 = est.start_offsets[si];
        const u64 pass_mark = y0 + s_max;
        double count_sum = 0;
        double stop_sum = 0;
        if (counts) (*counts)[si].reserve(trials_per_start);
        for (u64 t = 0; t < trials_per_start; ++t) {
            Rng trial_rng = rng.substream(si, t);
            PlainWalk x{&s, trial_rng.substream(1), 0};
            TrailedWalk y(s, y0, trial_rng.substream(2));
            u64 collisions = 0;
            u64 i = 0;
            for (;;) {
                ++i;
                u64 pos = x.advance();
                y.advance_to(pos);
                if (y.visited(pos)) ++collisions;
                if (pos >= pass_mark) break;  // walk has left the start-dependent window
                if (i >= horizon) {
                    ++truncated;
                    break;
                }
            }
            count_sum += static_cast<double>(collisions);
            stop_sum += static_cast<double>(i);
            if (counts) (*counts)[si].push_back(collisions);
        }
        est.per_start.push_back(count_sum / static_cast<double>(trials_per_start));
        est.mean_stop_steps.push_back(stop_sum / static_cast<double>(trials_per_start));
    }
    est.max_estimate = *std::max_element(est.per_start.begin(), est.per_start.end());
    est.worst_start_mean_stop = est.mean_stop_steps.front();
    est.truncated_share = static_cast<double>(truncated) /
                          static_cast<double>(trials_per_start * est.start_offsets.size());
    return est;
}

std::pair<double, double> birthday_bounds(double s_bar, double t_bar, double b, double eps) {
    if (eps < 0 || eps >= 1) throw std::invalid_argument("eps must lie in [0, 1)");
    double up = std::sqrt(s_bar * (1.0 + b)) + std::sqrt(t_bar);
    double upper = 1.0 + (up / (1.0 - eps)) * (up / (1.0 - eps));
    double clamp = std::max(0.0, 1.0 - std::sqrt(b));
    double lower = 1.0 + s_bar * clamp * clamp / (1.0 + eps);
    return {lower, upper};
}

u64 hoeffding_sample_count(double s_max, double s_bar, double n_blocks, double eps) {
    if (!(s_bar > 0) || s_max < s_bar) throw std::invalid_argument("need 0 < s_bar <= s_max");
    if (!(eps > 0) || eps >= 1) throw std::invalid_argument("eps must lie in (0, 1)");
    double ratio = s_max / s_bar;
    double m = 2.0 * ratio * std::max(ratio * std::log(1.0 / eps), 1.0 + n_blocks);
    return static_cast<u64>(std::ceil(m - 1e-12));
}

}  // namespace kangaroo
