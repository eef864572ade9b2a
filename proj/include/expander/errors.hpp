#pragma once

#include <stdexcept>
#include <string>

namespace expander {

/// Invalid argument values (out-of-range probabilities, bad sizes, ...).
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

/// Structurally impossible request (d > n, profile value outside [d, n], ...).
struct InfeasibleError : DomainError {
    using DomainError::DomainError;
};

/// Instance too large for exact enumeration.
struct CapacityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Numerical solver did not converge; message carries diagnostics.
struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// No sign change of the net exponent on the scanned feasible interval.
struct NoTransitionError : std::runtime_error {
    NoTransitionError(const std::string& msg, double k_low, double k_high,
                      double net_low, double net_high)
        : std::runtime_error(msg),
          k_low(k_low), k_high(k_high), net_low(net_low), net_high(net_high) {}

    double k_low;
    double k_high;
    double net_low;
    double net_high;
};

}  // namespace expander
