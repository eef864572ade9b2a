#include "expander/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "expander/errors.hpp"

namespace expander {

double shannon_entropy(double p) {
    if (!(p >= -kEntropyClampBand && p <= 1.0 + kEntropyClampBand))
        throw DomainError("shannon_entropy: argument " + std::to_string(p) +
                          " outside [0,1] beyond clamp band");
    if (p <= 0.0 || p >= 1.0) return 0.0;
    return -p * std::log(p) - (1.0 - p) * std::log1p(-p);
}

double p_max(double s, double d) {
    if (!(s >= 1.0) || !(d >= 1.0))
        throw DomainError("p_max: requires s >= 1 and d >= 1");
    const double cube = (s * d) * (s * d) * (s * d);
    return 2.0 / (25.0 * std::sqrt(2.0 * M_PI * cube));
}

double log_p_max(double s, double d) {
    if (!(s >= 1.0) || !(d >= 1.0))
        throw DomainError("log_p_max: requires s >= 1 and d >= 1");
    constexpr double kLn2Pi = 1.8378770664093454836;  // ln(2 pi)
    return std::log(2.0) - std::log(25.0) - 0.5 * (kLn2Pi + 3.0 * (std::log(s) + std::log(d)));
}

double log_binomial(int64_t n, int64_t k) {
    if (n < 0 || k < 0 || k > n)
        throw DomainError("log_binomial: requires 0 <= k <= n");
    if (k == 0 || k == n) return 0.0;
    k = std::min(k, n - k);  // makes the symmetry C(n,k) = C(n,n-k) exact
    return std::lgamma(static_cast<double>(n) + 1.0) -
           std::lgamma(static_cast<double>(k) + 1.0) -
           std::lgamma(static_cast<double>(n - k) + 1.0);
}

}  // namespace expander
