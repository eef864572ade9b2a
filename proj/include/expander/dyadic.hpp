#pragma once

#include <cstdint>
#include <vector>

// Tail-bound machinery: dyadic profiles a_1, a_2, a_4, ..., a_s of union
// cardinalities, the large-deviation exponent Psi over those levels, and the
// log-domain tail bound  ln p_max(s,d) + n * Psi.
//
// The set size s is treated as a real number >= 2: levels run over the dyadic
// indices 2^j for j = 0 .. ceil(log2 s) - 1 and the top value sits at index s
// itself (for s an exact power of two this is the usual dyadic ladder).

namespace expander {

struct ProfileLevel {
    double index;  ///< 1, 2, 4, ... and s at the top
    double value;  ///< a_index
};

struct DyadicProfile {
    double s = 0;       ///< top set size (real, >= 2)
    uint32_t d = 0;     ///< column degree; a_1 == d
    uint32_t n = 0;     ///< row count
    bool constrained = false;  ///< produced by the constrained (case 2) solver
    std::vector<ProfileLevel> levels;  ///< ascending index, last entry (s, a_s)

    double top() const { return levels.back().value; }
};

/// E|A_s| closed form n (1 - (1 - d/n)^s); equals the dyadic recursion
/// a_{2i} = a_i (2 - a_i / n) at every dyadic index.
double expected_top(double s, uint32_t d, uint32_t n);

/// Case 1 profile: every level takes its expected value. Requires s >= 2.
DyadicProfile expected_profile(double s, uint32_t d, uint32_t n);

/// Closes the cubic a_{2i}^3 - 2 a_i a_{2i}^2 + 2 a_i^2 a_{2i} - a_i^2 a_{4i} = 0
/// for a_{4i}; evaluated in the cancellation-free form b (1 + (b/a - 1)^2).
/// Requires 0 < a_i <= a_2i <= min(2 a_i, n); throws InfeasibleError when the
/// result would exceed min(2 a_2i, n).
double cubic_forward(double a_i, double a_2i, double n);

/// Case 2 profile: a_1 = d, cubic relation at every consecutive level triple,
/// top level equal to a_s. Solved by bisection shooting on a_2 in [d, a^_2]
/// (the forward map is monotone). Requires d <= a_s <= expected top.
DyadicProfile constrained_profile(double s, uint32_t d, uint32_t n, double a_s);

/// The per-n exponent
///   Psi = (1/n) [ 3 s ln(5d)
///               + sum_levels (s/2i) ( (n-a_i) H((a_2i-a_i)/(n-a_i))
///                                     + a_i H((a_2i-a_i)/a_i) - n H(a_i/n) ) ].
double psi(const DyadicProfile& profile);

struct TailBoundResult {
    double log_bound = 0;  ///< ln p_max(s, d) + n * psi, nats
    double psi = 0;        ///< per-n exponent
    DyadicProfile profile;
    double s = 0;
    uint32_t d = 0;
    uint32_t n = 0;
    double eps = -1;       ///< set by rip1_failure_bound, else -1
};

/// Upper bound on ln Prob(|A_s| <= a_s): constrained profile when a_s is below
/// the expected top, expected profile otherwise.
TailBoundResult tail_bound(double s, uint32_t d, uint32_t n, double a_s);

/// Expansion-slack form with a_s = (1 - eps) d s; bounds the probability
/// that the expansion event fails. Requires 0 < eps < 1/2.
TailBoundResult rip1_failure_bound(double s, uint32_t d, uint32_t n, double eps);

}  // namespace expander
