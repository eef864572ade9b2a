#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "expander/matrix.hpp"

// Empirical verification engine: |A_k| sampling against the expected-value
// recursion, tail-frequency estimates against the log-domain bound, exact
// small-instance union distributions, and exhaustive expander verification.

namespace expander {

struct SimulationConfig {
    uint32_t n = 0;
    uint32_t d = 0;
    Ensemble ensemble = Ensemble::SE;
    std::vector<uint32_t> k_grid;
    uint32_t trials = 0;
    uint64_t seed = 0;
};

struct KSummary {
    uint32_t k = 0;
    std::vector<uint32_t> samples;  ///< |A_k| per trial, indexed by trial
    double mean = 0;
    double expected = 0;   ///< a^_k = n (1 - (1 - d/n)^k)
    double rel_error = 0;  ///< |mean - expected| / expected
};

struct SimulationResult {
    SimulationConfig config;
    std::vector<KSummary> per_k;
};

/// Dyadic values up to n/2 plus multiples of floor(n/10): the default grid
/// for cardinality sweeps.
std::vector<uint32_t> default_k_grid(uint32_t n);

/// Draws `trials` independent sets of k fresh columns per grid point and
/// records |A_k|. Trial t at set size k uses substream fold(fold(seed, k), t),
/// so results are identical for any thread count.
SimulationResult simulate_cardinalities(const SimulationConfig& config, int threads = 0);
SimulationResult simulate_cardinalities_serial(const SimulationConfig& config);

struct TailEstimate {
    double frequency = 0;  ///< #{ |A_s| <= floor(a_s) } / trials
    double radius = 0;     ///< 3-sigma normal radius, Wilson-based when rare
    uint64_t hits = 0;
    uint64_t trials = 0;
};

/// Empirical counterpart of Prob(|A_s| <= a_s); the event compares against
/// floor(a_s) since |A_s| is integer.
TailEstimate empirical_tail(uint32_t n, uint32_t d, uint32_t s, double a_s,
                            uint64_t trials, uint64_t seed, int threads = 0);
TailEstimate empirical_tail_serial(uint32_t n, uint32_t d, uint32_t s, double a_s,
                                   uint64_t trials, uint64_t seed);

/// Exact probability mass of |A_s| (index = cardinality, size n+1).
/// s = 2 is the closed hypergeometric-overlap law
///   P(|A_2| = 2d - j) = C(d,j) C(n-d,d-j) / C(n,d);
/// s >= 3 composes exact conditional-overlap steps. Throws CapacityError for
/// instances beyond exact evaluation.
std::vector<double> exact_union_distribution(uint32_t n, uint32_t d, uint32_t s);

/// Mean of a pmf returned by exact_union_distribution.
double distribution_mean(std::span<const double> pmf);

struct ExpanderVerdict {
    bool pass = false;
    std::vector<uint32_t> worst_set;  ///< set with minimum expansion
    uint32_t worst_neighbors = 0;     ///< |Gamma(worst_set)|
    double worst_expansion = 0;       ///< |Gamma| / (d |S|)
    uint64_t sets_checked = 0;
};

/// Checks |Gamma(X)| >= (1 - eps) d |X| for every X with 1 <= |X| <= k.
/// Guard: sum_{j<=k} C(N,j) must not exceed 1e7.
ExpanderVerdict verify_expander_exhaustive(const SparseColumnMatrix& m, uint32_t k,
                                           double eps);

/// CSV exports. Raw: "k,trial,cardinality"; summary:
/// "k,mean,expected,rel_error,trials,seed". Comment lines are '#'-prefixed.
std::string simulation_to_csv_raw(const SimulationResult& result,
                                  std::span<const std::string> header_comments = {});
std::string simulation_to_csv_summary(const SimulationResult& result,
                                      std::span<const std::string> header_comments = {});

}  // namespace expander
