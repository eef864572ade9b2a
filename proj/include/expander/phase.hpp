#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

// Existence phase transition rho_exp(delta; d, eps): the largest limiting
// k/n at which H(k/N) + (n/N) Psi(k, d, eps) crosses zero, evaluated at a
// concrete working size n with k treated as a continuous variable.

namespace expander {

struct RootResult {
    double rho = 0;       ///< k* / n
    double residual = 0;  ///< net exponent at the root
    int iterations = 0;   ///< bisection steps
};

struct PhaseCurve {
    std::vector<double> delta_grid;
    std::vector<double> rho_values;  ///< NaN where the point failed
    std::vector<double> residuals;   ///< NaN where the point failed
    std::vector<int> iterations;     ///< 0 where the point failed
    std::vector<std::string> errors; ///< empty string where converged

    uint32_t d = 0;
    double eps = 0;
    uint32_t n = 0;

    bool all_converged() const;
    size_t failed_points() const;
};

/// H(k/N) + (n/N) Psi(k, d, eps) with the profile target a_k = (1-eps) d k.
/// k is continuous, 2 <= k <= n; N may be non-integral. Targets above the
/// expected value use the expected profile; targets above n raise
/// InfeasibleError ("above"), below d raise InfeasibleError ("below").
double net_exponent(double k, uint32_t n, double N, uint32_t d, double eps);

/// Largest zero of the net exponent over the feasible k interval, located by
/// a 256-point scan (plus straddle points at dyadic k, where the relaxed
/// exponent is discontinuous) followed by bisection to 1e-8 relative.
/// Brackets whose bisection limit does not attain |net| < 1e-6 (pure jump
/// discontinuities) are skipped in favor of the next crossing below.
/// Throws NoTransitionError when no sign change exists.
RootResult rho_exp(double delta, uint32_t d, double eps, uint32_t n);

/// Applies rho_exp over an ascending delta grid. Per-point failures are
/// recorded in the curve, not thrown. Deterministic; the parallel version
/// produces output identical to the serial reference.
PhaseCurve sweep(std::span<const double> delta_grid, uint32_t d, double eps,
                 uint32_t n, int threads = 0);
PhaseCurve sweep_serial(std::span<const double> delta_grid, uint32_t d, double eps,
                        uint32_t n);

/// CSV rows "delta,rho,residual,iterations" (17 significant digits; failed
/// points carry nan). `header_comments` lines are emitted first, '#'-prefixed.
std::string curve_to_csv(const PhaseCurve& curve,
                         std::span<const std::string> header_comments = {});

}  // namespace expander
