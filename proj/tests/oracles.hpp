// Independent oracles used by the test suites. Everything here recomputes
// expected values by enumeration or small linear algebra, never through the
// library's own code paths.
#pragma once

#include <cmath>
#include <map>
#include <vector>

#include "kangaroo/stepset.hpp"

namespace oracles {

using kangaroo::StepSet;
using kangaroo::u64;

// Expected number of X steps until the X walk lands on a position visited by
// the Y walk, both started at 0, computed exactly on the gap chain
// gap = (next Y-visited position) - (current X position).
//
// advance_from_deficit(r): Y has last visited X - r and must advance to >= X;
// returns the probability of landing exactly on X and the distribution of the
// residual gap otherwise.
inline double first_intersection_mean(const StepSet& s) {
    const std::size_t k = s.sizes.size();
    const u64 smax = s.sizes.back();
    std::vector<double> p(k);
    for (std::size_t i = 0; i < k; ++i) p[i] = s.masses[i].to_double();

    // deficit r in [1, smax]: collide[r] + gap_dist[r][g], g in [1, smax-1]
    std::vector<double> collide(smax + 1, 0.0);
    std::vector<std::vector<double>> gap_dist(smax + 1, std::vector<double>(smax, 0.0));
    for (u64 r = 1; r <= smax; ++r) {
        for (std::size_t i = 0; i < k; ++i) {
            u64 step = s.sizes[i];
            if (step == r) {
                collide[r] += p[i];
            } else if (step > r) {
                gap_dist[r][step - r] += p[i];
            } else {
                collide[r] += p[i] * collide[r - step];
                for (u64 g = 1; g < smax; ++g) gap_dist[r][g] += p[i] * gap_dist[r - step][g];
            }
        }
    }

    if (smax == 1) return 1.0;  // unit walk: first X step lands on a visited state

    // E[g] = 1 + sum_s p_s * (shrunk gap, collision, or Y re-advance)
    const std::size_t n = smax - 1;  // states g = 1..smax-1
    std::vector<std::vector<double>> a(n, std::vector<double>(n + 1, 0.0));
    for (u64 g = 1; g <= n; ++g) {
        std::vector<double>& row = a[g - 1];
        row[g - 1] = 1.0;
        row[n] = 1.0;  // the step itself
        for (std::size_t i = 0; i < k; ++i) {
            u64 step = s.sizes[i];
            if (step < g) {
                row[g - step - 1] -= p[i];
            } else if (step > g) {
                u64 r = step - g;
                for (u64 g2 = 1; g2 <= n; ++g2) row[g2 - 1] -= p[i] * gap_dist[r][g2];
            }
        }
    }
    // Gaussian elimination with partial pivoting
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::fabs(a[r][col]) > std::fabs(a[piv][col])) piv = r;
        std::swap(a[piv], a[col]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || a[r][col] == 0.0) continue;
            double f = a[r][col] / a[col][col];
            for (std::size_t c2 = col; c2 <= n; ++c2) a[r][c2] -= f * a[col][c2];
        }
    }
    std::vector<double> e(n);
    for (std::size_t g = 0; g < n; ++g) e[g] = a[g][n] / a[g][g];

    // first step from X0 = Y0 = 0: Y's last visited position is 0 = X0
    double total = 1.0;
    for (std::size_t i = 0; i < k; ++i) {
        u64 r = s.sizes[i];
        for (u64 g = 1; g <= n; ++g) total += p[i] * gap_dist[r][g] * e[g - 1];
    }
    return total;
}

// Ordered tuple counts by exhaustive enumeration.
inline std::map<u64, u64> composition_counts_by_enumeration(u64 tuple_len, const StepSet& s) {
    std::map<u64, u64> counts;
    std::vector<std::size_t> idx(tuple_len, 0);
    for (;;) {
        u64 sum = 0;
        for (std::size_t j = 0; j < tuple_len; ++j) sum += s.sizes[idx[j]];
        ++counts[sum];
        std::size_t j = 0;
        while (j < tuple_len && ++idx[j] == s.sizes.size()) idx[j++] = 0;
        if (j == tuple_len) break;
    }
    return counts;
}

// Max i-step transition probability by exhaustive enumeration.
inline double max_transition_prob_by_enumeration(u64 tuple_len, const StepSet& s) {
    std::map<u64, double> prob;
    std::vector<std::size_t> idx(tuple_len, 0);
    for (;;) {
        u64 sum = 0;
        double mass = 1.0;
        for (std::size_t j = 0; j < tuple_len; ++j) {
            sum += s.sizes[idx[j]];
            mass *= s.masses[idx[j]].to_double();
        }
        prob[sum] += mass;
        std::size_t j = 0;
        while (j < tuple_len && ++idx[j] == s.sizes.size()) idx[j++] = 0;
        if (j == tuple_len) break;
    }
    double best = 0;
    for (const auto& [v, q] : prob) best = std::max(best, q);
    return best;
}

// Probability that a walk from 0 ever visits v (renewal recursion).
inline double visit_probability(const StepSet& s, u64 v) {
    std::vector<double> h(v + 1, 0.0);
    h[0] = 1.0;
    for (u64 y = 1; y <= v; ++y)
        for (std::size_t i = 0; i < s.sizes.size(); ++i)
            if (s.sizes[i] <= y) h[y] += s.masses[i].to_double() * h[y - s.sizes[i]];
    return h[v];
}

}  // namespace oracles
