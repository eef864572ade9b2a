#include "expander/dyadic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "expander/entropy.hpp"
#include "expander/errors.hpp"

namespace expander {

namespace {

constexpr int kMaxBisectIters = 200;

void check_shape(double s, uint32_t d, uint32_t n) {
    if (!(s >= 2.0))
        throw DomainError("set size s must be >= 2 (s = 1 is deterministic: |A_1| = d)");
    if (d == 0) throw DomainError("degree d must be positive");
    if (d > n) throw InfeasibleError("degree d exceeds row count n");
}

int level_count(double s) {
    // dyadic indices strictly below s: 2^j, j = 0 .. ceil(log2 s) - 1
    int j = static_cast<int>(std::ceil(std::log2(s)));
    // guard against log2 rounding at exact powers of two
    while (std::ldexp(1.0, j) < s) ++j;
    while (j > 1 && std::ldexp(1.0, j - 1) >= s) --j;
    return j;
}

/// Top value at real index s on the collision curve with effective size ntil:
/// a(s) = ntil (1 - (1 - d/ntil)^s). Exact fixed point a == d when ntil == d.
double curve_top(double s, double d, double ntil) {
    if (ntil <= d) return d;
    return -ntil * std::expm1(s * std::log1p(-d / ntil));
}

}  // namespace

double expected_top(double s, uint32_t d, uint32_t n) {
    if (!(s >= 1.0)) throw DomainError("expected_top: s must be >= 1");
    if (d == 0 || d > n) throw InfeasibleError("expected_top: requires 1 <= d <= n");
    if (d == n) return static_cast<double>(n);
    return curve_top(s, d, n);
}

DyadicProfile expected_profile(double s, uint32_t d, uint32_t n) {
    check_shape(s, d, n);
    const int nlev = level_count(s);
    const auto nn = static_cast<double>(n);

    DyadicProfile p;
    p.s = s;
    p.d = d;
    p.n = n;
    p.constrained = false;
    p.levels.reserve(nlev + 1);

    double a = d;
    for (int j = 0; j < nlev; ++j) {
        p.levels.push_back({std::ldexp(1.0, j), a});
        a = a * (2.0 - a / nn);
    }
    const double last_index = p.levels.back().index;
    const double top = (s == 2.0 * last_index) ? a : expected_top(s, d, n);
    p.levels.push_back({s, top});
    return p;
}

double cubic_forward(double a_i, double a_2i, double n) {
    if (!(a_i > 0.0)) throw DomainError("cubic_forward: a_i must be positive");
    if (a_2i < a_i * (1.0 - 1e-12) || a_2i > 2.0 * a_i * (1.0 + 1e-12) || a_2i > n * (1.0 + 1e-12))
        throw InfeasibleError("cubic_forward: a_2i outside [a_i, min(2 a_i, n)]");
    const double r = a_2i / a_i - 1.0;
    const double a_4i = a_2i * (1.0 + r * r);
    if (a_4i > std::min(2.0 * a_2i, n) * (1.0 + 1e-9))
        throw InfeasibleError("cubic_forward: output " + std::to_string(a_4i) +
                              " exceeds min(2 a_2i, n)");
    return a_4i;
}

namespace {

/// Propagates a profile upward from the shooting variable a_2 and returns the
/// top value at index s. Full dyadic levels use the cubic relation; a trailing
/// non-doubling step uses the collision curve through (a_1, a_2).
double shoot_top(double s, double d, double nn, int nlev, double a_2,
                 std::vector<double>* out_levels) {
    std::vector<double> vals;
    vals.reserve(nlev);
    vals.push_back(d);
    if (nlev >= 2) vals.push_back(a_2);
    for (int j = 2; j < nlev; ++j)
        vals.push_back(cubic_forward(vals[j - 2], vals[j - 1], nn));

    const double m = std::ldexp(1.0, nlev - 1);
    double top;
    if (nlev == 1) {
        top = a_2;  // s == 2: the shooting variable is the top itself
    } else if (s == 2.0 * m) {
        top = cubic_forward(vals[nlev - 2], vals[nlev - 1], nn);
    } else if (a_2 <= d) {
        top = d;
    } else {
        const double ntil = d * d / (2.0 * d - a_2);
        top = curve_top(s, d, ntil);
    }
    if (out_levels) *out_levels = std::move(vals);
    return top;
}

}  // namespace

DyadicProfile constrained_profile(double s, uint32_t d, uint32_t n, double a_s) {
    check_shape(s, d, n);
    const auto dd = static_cast<double>(d);
    const auto nn = static_cast<double>(n);
    const double ahat_top = expected_top(s, d, n);
    const double top_tol = 1e-10 * nn;

    if (a_s < dd * (1.0 - 1e-12))
        throw InfeasibleError("constrained_profile: target a_s below d");
    if (a_s > ahat_top + top_tol)
        throw DomainError("constrained_profile: target a_s exceeds the expected value; "
                          "use expected_profile");
    const double target = std::min(std::max(a_s, dd), ahat_top);

    const int nlev = level_count(s);
    DyadicProfile p;
    p.s = s;
    p.d = d;
    p.n = n;
    p.constrained = true;

    std::vector<double> vals;
    if (nlev == 1) {
        vals = {dd};
    } else {
        const double ahat_2 = dd * (2.0 - dd / nn);
        double lo = dd, hi = ahat_2;
        double top_lo = shoot_top(s, dd, nn, nlev, lo, nullptr);
        if (!(top_lo <= target + top_tol))
            throw SolverError("constrained_profile: shooting interval does not bracket "
                              "the target (top(" + std::to_string(lo) + ") = " +
                              std::to_string(top_lo) + " > a_s = " + std::to_string(target) + ")");
        for (int it = 0; it < kMaxBisectIters; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (shoot_top(s, dd, nn, nlev, mid, nullptr) < target)
                lo = mid;
            else
                hi = mid;
            if (hi - lo <= 1e-12 * hi) break;
        }
        const double a_2 = 0.5 * (lo + hi);
        const double top = shoot_top(s, dd, nn, nlev, a_2, &vals);
        if (std::abs(top - target) > top_tol)
            throw SolverError("constrained_profile: top residual " +
                              std::to_string(top - target) + " exceeds tolerance " +
                              std::to_string(top_tol) + " (s=" + std::to_string(s) +
                              ", d=" + std::to_string(d) + ", n=" + std::to_string(n) +
                              ", a_s=" + std::to_string(a_s) + ")");
    }

    p.levels.reserve(nlev + 1);
    for (int j = 0; j < nlev; ++j) p.levels.push_back({std::ldexp(1.0, j), vals[j]});
    p.levels.push_back({s, target});
    // Rounding can leave ~1e-12 monotonicity violations near total collision;
    // the profile is monotone (d = a_1 <= a_2 <= ... <= a_s), so snap to it.
    for (size_t j = 1; j + 1 < p.levels.size(); ++j)
        p.levels[j].value = std::min(p.levels[j].value, target);
    for (size_t j = 1; j < p.levels.size(); ++j)
        p.levels[j].value = std::max(p.levels[j].value, p.levels[j - 1].value);
    return p;
}

double psi(const DyadicProfile& profile) {
    const auto nn = static_cast<double>(profile.n);
    const double s = profile.s;
    double total = 3.0 * s * std::log(5.0 * static_cast<double>(profile.d));
    for (size_t j = 0; j + 1 < profile.levels.size(); ++j) {
        const double i = profile.levels[j].index;
        const double a_i = profile.levels[j].value;
        const double a_2i = profile.levels[j + 1].value;
        const double gap = a_2i - a_i;
        const double weight = s / (2.0 * i);
        double term = -nn * shannon_entropy(a_i / nn);
        if (nn - a_i > 0.0) term += (nn - a_i) * shannon_entropy(gap / (nn - a_i));
        term += a_i * shannon_entropy(gap / a_i);
        total += weight * term;
    }
    return total / nn;
}

TailBoundResult tail_bound(double s, uint32_t d, uint32_t n, double a_s) {
    check_shape(s, d, n);
    const auto dd = static_cast<double>(d);
    if (a_s < dd * (1.0 - 1e-12))
        throw InfeasibleError("tail_bound: a_s below d (event impossible)");
    const double cap = std::min(s * dd, static_cast<double>(n));
    if (a_s > cap * (1.0 + 1e-12))
        throw DomainError("tail_bound: a_s exceeds min(s d, n)");

    TailBoundResult r;
    r.s = s;
    r.d = d;
    r.n = n;
    const double ahat_top = expected_top(s, d, n);
    r.profile = (a_s >= ahat_top) ? expected_profile(s, d, n)
                                  : constrained_profile(s, d, n, a_s);
    r.psi = psi(r.profile);
    r.log_bound = log_p_max(s, dd) + static_cast<double>(n) * r.psi;
    return r;
}

TailBoundResult rip1_failure_bound(double s, uint32_t d, uint32_t n, double eps) {
    if (!(eps > 0.0 && eps < 0.5))
        throw DomainError("rip1_failure_bound: eps must lie in (0, 1/2)");
    check_shape(s, d, n);
    const double a_s = (1.0 - eps) * static_cast<double>(d) * s;
    TailBoundResult r = tail_bound(s, d, n, a_s);
    r.eps = eps;
    return r;
}

}  // namespace expander
