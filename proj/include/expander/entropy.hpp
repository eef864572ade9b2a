#pragma once

#include <cstdint>

// Scalar special functions shared by all bound computations. All values are
// natural-log scale (nats); probability-scale quantities never leave the log
// domain elsewhere in the library.

namespace expander {

/// Arguments within this band outside [0,1] are clamped; beyond it rejected.
inline constexpr double kEntropyClampBand = 1e-12;

/// Binary Shannon entropy H(p) = -p ln p - (1-p) ln(1-p), with the limit
/// convention 0 ln 0 = 0. Throws DomainError for p outside [0,1] beyond the
/// clamp band.
double shannon_entropy(double p);

/// Tail-bound prefactor 2 / (25 sqrt(2 pi s^3 d^3)). s and d may be real
/// (the phase-transition solver treats the set size as continuous).
double p_max(double s, double d);

/// ln p_max(s, d), computed directly in log scale.
double log_p_max(double s, double d);

/// ln C(n, k) via log-gamma; exact within 1e-10 relative for n <= 1e6.
double log_binomial(int64_t n, int64_t k);

}  // namespace expander
