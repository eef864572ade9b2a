#include "expander/phase.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "expander/dyadic.hpp"
#include "expander/entropy.hpp"
#include "expander/errors.hpp"

namespace expander {

namespace {

constexpr int kScanPoints = 256;
constexpr double kBisectRelTol = 1e-8;
constexpr double kResidualTol = 1e-6;
constexpr int kMaxBisectIters = 200;

double psi_for_target(double s, uint32_t d, uint32_t n, double a_s) {
    if (a_s >= expected_top(s, d, n)) return psi(expected_profile(s, d, n));
    return psi(constrained_profile(s, d, n, a_s));
}

}  // namespace

double net_exponent(double k, uint32_t n, double N, uint32_t d, double eps) {
    if (!(eps > 0.0 && eps < 0.5))
        throw DomainError("net_exponent: eps must lie in (0, 1/2)");
    if (!(k >= 2.0))
        throw DomainError("net_exponent: k must be >= 2");
    if (!(k <= static_cast<double>(n)) || !(static_cast<double>(n) <= N))
        throw DomainError("net_exponent: requires k <= n <= N");
    const double a_k = (1.0 - eps) * static_cast<double>(d) * k;
    if (a_k > static_cast<double>(n))
        throw InfeasibleError("net_exponent: target cardinality (1-eps) d k exceeds n");
    if (a_k < static_cast<double>(d))
        throw InfeasibleError("net_exponent: target cardinality (1-eps) d k below d");
    return shannon_entropy(k / N) +
           (static_cast<double>(n) / N) * psi_for_target(k, d, n, a_k);
}

RootResult rho_exp(double delta, uint32_t d, double eps, uint32_t n) {
    if (!(delta > 0.0 && delta < 1.0))
        throw DomainError("rho_exp: delta must lie in (0, 1)");
    if (!(eps > 0.0 && eps < 0.5))
        throw DomainError("rho_exp: eps must lie in (0, 1/2)");
    if (d == 0 || d > n) throw InfeasibleError("rho_exp: requires 1 <= d <= n");

    const auto nn = static_cast<double>(n);
    const double N = nn / delta;
    const double k_min = 2.0;
    const double k_max = std::min(nn, nn / ((1.0 - eps) * static_cast<double>(d)));
    if (!(k_max > k_min))
        throw InfeasibleError("rho_exp: feasible k interval is empty (n too small)");

    // Scan grid: evenly spaced points plus straddle points at each dyadic k.
    // The relaxed exponent jumps down across powers of two, so its negative
    // windows can start there and be narrower than the even spacing.
    std::set<double> grid;
    for (int t = 0; t < kScanPoints; ++t)
        grid.insert(k_min + (k_max - k_min) * t / (kScanPoints - 1));
    for (double p = 2.0; p < k_max; p *= 2.0) {
        if (p >= k_min) {
            grid.insert(p);
            grid.insert(p * (1.0 + 1e-9));
            if (p * (1.0 - 1e-9) > k_min) grid.insert(p * (1.0 - 1e-9));
        }
    }
    std::vector<double> ks(grid.begin(), grid.end());

    auto eval = [&](double k) -> double {
        return net_exponent(k, n, N, d, eps);  // scan range keeps it feasible
    };
    std::vector<double> vals(ks.size());
    for (size_t t = 0; t < ks.size(); ++t) vals[t] = eval(ks[t]);

    struct Bracket { double lo, hi, v_lo, v_hi; };
    std::vector<Bracket> brackets;
    for (size_t t = 0; t + 1 < ks.size(); ++t)
        if ((vals[t] > 0.0) != (vals[t + 1] > 0.0))
            brackets.push_back({ks[t], ks[t + 1], vals[t], vals[t + 1]});

    if (brackets.empty())
        throw NoTransitionError(
            "rho_exp: no sign change of the net exponent on the feasible interval",
            ks.front(), ks.back(), vals.front(), vals.back());

    for (auto it = brackets.rbegin(); it != brackets.rend(); ++it) {
        double lo = it->lo, hi = it->hi, v_lo = it->v_lo;
        int iters = 0;
        while (iters < kMaxBisectIters) {
            const double mid = 0.5 * (lo + hi);
            const double v_mid = eval(mid);
            ++iters;
            if ((v_mid > 0.0) == (v_lo > 0.0)) {
                lo = mid;
                v_lo = v_mid;
            } else {
                hi = mid;
            }
            if (hi - lo <= kBisectRelTol * mid) break;
        }
        const double k_star = 0.5 * (lo + hi);
        const double residual = eval(k_star);
        if (std::abs(residual) < kResidualTol)
            return {k_star / nn, residual, iters};
        // Sign change without an attained zero: a jump discontinuity of the
        // relaxed exponent. Fall through to the next crossing below.
    }
    throw SolverError("rho_exp: every sign-change bracket straddles a discontinuity "
                      "(no attained zero with |net| < 1e-6)");
}

namespace {

void solve_point(PhaseCurve& curve, size_t idx) {
    try {
        const RootResult r = rho_exp(curve.delta_grid[idx], curve.d, curve.eps, curve.n);
        curve.rho_values[idx] = r.rho;
        curve.residuals[idx] = r.residual;
        curve.iterations[idx] = r.iterations;
        curve.errors[idx].clear();
    } catch (const std::exception& e) {
        curve.rho_values[idx] = std::nan("");
        curve.residuals[idx] = std::nan("");
        curve.iterations[idx] = 0;
        curve.errors[idx] = e.what();
    }
}

PhaseCurve make_curve(std::span<const double> delta_grid, uint32_t d, double eps,
                      uint32_t n) {
    for (size_t i = 0; i + 1 < delta_grid.size(); ++i)
        if (!(delta_grid[i] < delta_grid[i + 1]))
            throw DomainError("sweep: delta grid must be strictly ascending");
    for (double x : delta_grid)
        if (!(x > 0.0 && x < 1.0)) throw DomainError("sweep: delta outside (0, 1)");

    PhaseCurve curve;
    curve.delta_grid.assign(delta_grid.begin(), delta_grid.end());
    curve.rho_values.resize(delta_grid.size());
    curve.residuals.resize(delta_grid.size());
    curve.iterations.resize(delta_grid.size());
    curve.errors.resize(delta_grid.size());
    curve.d = d;
    curve.eps = eps;
    curve.n = n;
    return curve;
}

}  // namespace

PhaseCurve sweep_serial(std::span<const double> delta_grid, uint32_t d, double eps,
                        uint32_t n) {
    PhaseCurve curve = make_curve(delta_grid, d, eps, n);
    for (size_t i = 0; i < curve.delta_grid.size(); ++i) solve_point(curve, i);
    return curve;
}

PhaseCurve sweep(std::span<const double> delta_grid, uint32_t d, double eps,
                 uint32_t n, int threads) {
    PhaseCurve curve = make_curve(delta_grid, d, eps, n);
#ifdef _OPENMP
    const int nthreads = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(nthreads)
#endif
    for (int64_t i = 0; i < static_cast<int64_t>(curve.delta_grid.size()); ++i)
        solve_point(curve, static_cast<size_t>(i));
    (void)threads;
    return curve;
}

bool PhaseCurve::all_converged() const { return failed_points() == 0; }

size_t PhaseCurve::failed_points() const {
    size_t bad = 0;
    for (double r : rho_values)
        if (std::isnan(r)) ++bad;
    return bad;
}

std::string curve_to_csv(const PhaseCurve& curve,
                         std::span<const std::string> header_comments) {
    std::string out;
    for (const auto& line : header_comments) {
        out += "# ";
        out += line;
        out += '\n';
    }
    out += "delta,rho,residual,iterations\n";
    char buf[128];
    for (size_t i = 0; i < curve.delta_grid.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%d\n", curve.delta_grid[i],
                      curve.rho_values[i], curve.residuals[i], curve.iterations[i]);
        out += buf;
    }
    return out;
}

}  // namespace expander
