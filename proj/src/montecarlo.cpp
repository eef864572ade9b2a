#include "expander/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "expander/dyadic.hpp"
#include "expander/entropy.hpp"
#include "expander/errors.hpp"
#include "expander/rng.hpp"

namespace expander {

namespace {

int resolve_threads(int threads) {
#ifdef _OPENMP
    return threads > 0 ? threads : omp_get_max_threads();
#else
    (void)threads;
    return 1;
#endif
}

void validate_config(const SimulationConfig& c) {
    if (c.d == 0 || c.d > c.n) throw DomainError("simulate: requires 1 <= d <= n");
    if (c.trials == 0) throw DomainError("simulate: trials must be >= 1");
    if (c.k_grid.empty()) throw DomainError("simulate: k grid is empty");
    for (uint32_t k : c.k_grid)
        if (k == 0) throw DomainError("simulate: k values must be >= 1");
}

/// |A_k| for one trial: k fresh columns from the trial's substream.
uint32_t sample_union(uint32_t d, uint32_t k, uint64_t stream,
                      rng::SubsetSampler& sampler, UnionCounter& counter,
                      std::vector<uint32_t>& buf) {
    rng::Xoshiro256StarStar gen(stream);
    counter.begin();
    for (uint32_t c = 0; c < k; ++c) {
        buf.clear();
        sampler.sample(d, gen, buf);
        counter.add(buf);
    }
    return counter.count();
}

template <bool Parallel>
SimulationResult run_simulation(const SimulationConfig& config, int threads) {
    validate_config(config);
    SimulationResult result;
    result.config = config;
    result.per_k.resize(config.k_grid.size());
    for (size_t i = 0; i < config.k_grid.size(); ++i) {
        result.per_k[i].k = config.k_grid[i];
        result.per_k[i].samples.resize(config.trials);
        result.per_k[i].expected =
            expected_top(static_cast<double>(config.k_grid[i]), config.d, config.n);
    }

    // One job per (k index, trial); every job owns its substream, so the
    // schedule cannot influence the samples.
    const int64_t jobs =
        static_cast<int64_t>(config.k_grid.size()) * static_cast<int64_t>(config.trials);
    const int nthreads = Parallel ? resolve_threads(threads) : 1;
#ifdef _OPENMP
#pragma omp parallel num_threads(nthreads) if (Parallel)
#endif
    {
        rng::SubsetSampler sampler(config.n);
        UnionCounter counter(config.n);
        std::vector<uint32_t> buf;
        buf.reserve(config.d);
        // job costs grow with k; dynamic scheduling balances them and cannot
        // affect the output (each job owns its substream and output slot)
#ifdef _OPENMP
#pragma omp for schedule(dynamic, 16)
#endif
        for (int64_t job = 0; job < jobs; ++job) {
            const auto ki = static_cast<size_t>(job / config.trials);
            const auto trial = static_cast<uint32_t>(job % config.trials);
            const uint32_t k = config.k_grid[ki];
            const uint64_t stream = rng::fold(rng::fold(config.seed, k), trial);
            result.per_k[ki].samples[trial] =
                sample_union(config.d, k, stream, sampler, counter, buf);
        }
    }
    (void)nthreads;

    for (auto& summary : result.per_k) {
        const double sum = std::accumulate(summary.samples.begin(), summary.samples.end(),
                                           0.0);
        summary.mean = sum / static_cast<double>(summary.samples.size());
        summary.rel_error = std::abs(summary.mean - summary.expected) / summary.expected;
    }
    return result;
}

}  // namespace

std::vector<uint32_t> default_k_grid(uint32_t n) {
    std::vector<uint32_t> grid;
    for (uint32_t k = 1; k <= n / 2; k *= 2) grid.push_back(k);
    const uint32_t step = std::max(1u, n / 10);
    for (uint32_t k = step; k <= n / 2; k += step) grid.push_back(k);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    return grid;
}

SimulationResult simulate_cardinalities(const SimulationConfig& config, int threads) {
    return run_simulation<true>(config, threads);
}

SimulationResult simulate_cardinalities_serial(const SimulationConfig& config) {
    return run_simulation<false>(config, 1);
}

namespace {

double tail_radius(uint64_t hits, uint64_t trials) {
    const double t = static_cast<double>(trials);
    const double p = static_cast<double>(hits) / t;
    if (hits >= 10) return 3.0 * std::sqrt(p * (1.0 - p) / t);
    // Rare event: distance from p to the z=3 Wilson upper limit.
    const double z2 = 9.0;
    const double denom = 1.0 + z2 / t;
    const double center = (p + z2 / (2.0 * t)) / denom;
    const double half =
        3.0 * std::sqrt(p * (1.0 - p) / t + z2 / (4.0 * t * t)) / denom;
    return center + half - p;
}

template <bool Parallel>
TailEstimate run_tail(uint32_t n, uint32_t d, uint32_t s, double a_s, uint64_t trials,
                      uint64_t seed, int threads) {
    if (d == 0 || d > n) throw DomainError("empirical_tail: requires 1 <= d <= n");
    if (s == 0) throw DomainError("empirical_tail: s must be >= 1");
    if (trials == 0) throw DomainError("empirical_tail: trials must be >= 1");
    const double threshold = std::floor(a_s);

    uint64_t hits = 0;
    const int nthreads = Parallel ? resolve_threads(threads) : 1;
#ifdef _OPENMP
#pragma omp parallel num_threads(nthreads) if (Parallel) reduction(+ : hits)
#endif
    {
        rng::SubsetSampler sampler(n);
        UnionCounter counter(n);
        std::vector<uint32_t> buf;
        buf.reserve(d);
#ifdef _OPENMP
#pragma omp for schedule(static)
#endif
        for (int64_t trial = 0; trial < static_cast<int64_t>(trials); ++trial) {
            const uint64_t stream =
                rng::fold(rng::fold(seed, s), static_cast<uint64_t>(trial));
            const uint32_t card = sample_union(d, s, stream, sampler, counter, buf);
            if (static_cast<double>(card) <= threshold) ++hits;
        }
    }
    (void)nthreads;

    TailEstimate est;
    est.hits = hits;
    est.trials = trials;
    est.frequency = static_cast<double>(hits) / static_cast<double>(trials);
    est.radius = tail_radius(hits, trials);
    return est;
}

}  // namespace

TailEstimate empirical_tail(uint32_t n, uint32_t d, uint32_t s, double a_s,
                            uint64_t trials, uint64_t seed, int threads) {
    return run_tail<true>(n, d, s, a_s, trials, seed, threads);
}

TailEstimate empirical_tail_serial(uint32_t n, uint32_t d, uint32_t s, double a_s,
                                   uint64_t trials, uint64_t seed) {
    return run_tail<false>(n, d, s, a_s, trials, seed, 1);
}

std::vector<double> exact_union_distribution(uint32_t n, uint32_t d, uint32_t s) {
    if (d == 0 || d > n) throw DomainError("exact_union_distribution: requires 1 <= d <= n");
    if (s == 0) throw DomainError("exact_union_distribution: s must be >= 1");
    if (n > (1u << 16))
        throw CapacityError("exact_union_distribution: n beyond exact evaluation");
    if (s >= 3) {
        const uint64_t work = static_cast<uint64_t>(s) * n * d;  // DP cost
        if (work > 400'000'000ULL)
            throw CapacityError("exact_union_distribution: instance too large");
    }

    const auto nn = static_cast<int64_t>(n);
    const auto dd = static_cast<int64_t>(d);
    const double log_cnd = log_binomial(nn, dd);

    std::vector<double> pmf(n + 1, 0.0);
    if (s == 1) {
        pmf[d] = 1.0;
        return pmf;
    }
    if (s == 2) {
        // overlap j: |A_2| = 2d - j
        for (int64_t j = std::max<int64_t>(0, 2 * dd - nn); j <= dd; ++j) {
            const double logp =
                log_binomial(dd, j) + log_binomial(nn - dd, dd - j) - log_cnd;
            pmf[2 * dd - j] = std::exp(logp);
        }
    } else {
        std::vector<double> cur(n + 1, 0.0), next(n + 1, 0.0);
        cur[d] = 1.0;
        for (uint32_t t = 1; t < s; ++t) {
            std::fill(next.begin(), next.end(), 0.0);
            const int64_t u_max = std::min<int64_t>(static_cast<int64_t>(t) * dd, nn);
            for (int64_t u = dd; u <= u_max; ++u) {
                const double p = cur[u];
                if (p == 0.0) continue;
                // new column hits j rows outside the current union
                const int64_t j_lo = std::max<int64_t>(0, dd - u);
                const int64_t j_hi = std::min(dd, nn - u);
                for (int64_t j = j_lo; j <= j_hi; ++j) {
                    const double logq = log_binomial(u, dd - j) +
                                        log_binomial(nn - u, j) - log_cnd;
                    next[u + j] += p * std::exp(logq);
                }
            }
            cur.swap(next);
        }
        pmf = std::move(cur);
    }

    // lgamma jitter leaves the raw masses off by O(1e-10) at n = 2^16;
    // normalizing removes the common-mode error (the law sums to 1 exactly).
    const double total = std::accumulate(pmf.begin(), pmf.end(), 0.0);
    if (std::abs(total - 1.0) > 1e-9)
        throw SolverError("exact_union_distribution: masses sum to " +
                          std::to_string(total));
    for (double& p : pmf) p /= total;
    return pmf;
}

double distribution_mean(std::span<const double> pmf) {
    double mean = 0.0;
    for (size_t v = 0; v < pmf.size(); ++v) mean += static_cast<double>(v) * pmf[v];
    return mean;
}

ExpanderVerdict verify_expander_exhaustive(const SparseColumnMatrix& m, uint32_t k,
                                           double eps) {
    if (!(eps > 0.0 && eps < 0.5))
        throw DomainError("verify_expander_exhaustive: eps must lie in (0, 1/2)");
    if (k == 0 || k > m.cols)
        throw DomainError("verify_expander_exhaustive: requires 1 <= k <= N");

    // capacity guard: sum_{j<=k} C(N, j) <= 1e7
    double subsets = 0.0;
    for (uint32_t j = 1; j <= k; ++j) {
        subsets += std::exp(log_binomial(m.cols, j));
        if (subsets > 1e7)
            throw CapacityError("verify_expander_exhaustive: more than 1e7 subsets; "
                                "use sampled verification instead");
    }

    ExpanderVerdict verdict;
    verdict.pass = true;
    verdict.worst_expansion = std::numeric_limits<double>::infinity();

    UnionCounter counter(m.n);
    std::vector<uint32_t> set(k);
    const auto dd = static_cast<double>(m.degree);

    for (uint32_t size = 1; size <= k; ++size) {
        for (uint32_t i = 0; i < size; ++i) set[i] = i;
        while (true) {
            counter.begin();
            for (uint32_t i = 0; i < size; ++i) counter.add(m.column(set[i]));
            const uint32_t gamma = counter.count();
            const double expansion = gamma / (dd * size);
            ++verdict.sets_checked;
            if (expansion < verdict.worst_expansion) {
                verdict.worst_expansion = expansion;
                verdict.worst_neighbors = gamma;
                verdict.worst_set.assign(set.begin(), set.begin() + size);
            }
            if (static_cast<double>(gamma) < (1.0 - eps) * dd * size)
                verdict.pass = false;

            // next size-combination of [0, N)
            int32_t pos = static_cast<int32_t>(size) - 1;
            while (pos >= 0 && set[pos] == m.cols - size + pos) --pos;
            if (pos < 0) break;
            ++set[pos];
            for (uint32_t i = pos + 1; i < size; ++i) set[i] = set[i - 1] + 1;
        }
    }
    return verdict;
}

namespace {

void append_comments(std::string& out, std::span<const std::string> comments) {
    for (const auto& line : comments) {
        out += "# ";
        out += line;
        out += '\n';
    }
}

}  // namespace

std::string simulation_to_csv_raw(const SimulationResult& result,
                                  std::span<const std::string> header_comments) {
    std::string out;
    append_comments(out, header_comments);
    out += "k,trial,cardinality\n";
    char buf[96];
    for (const auto& summary : result.per_k)
        for (size_t t = 0; t < summary.samples.size(); ++t) {
            std::snprintf(buf, sizeof buf, "%u,%zu,%u\n", summary.k, t,
                          summary.samples[t]);
            out += buf;
        }
    return out;
}

std::string simulation_to_csv_summary(const SimulationResult& result,
                                      std::span<const std::string> header_comments) {
    std::string out;
    append_comments(out, header_comments);
    out += "k,mean,expected,rel_error,trials,seed\n";
    char buf[192];
    for (const auto& summary : result.per_k) {
        std::snprintf(buf, sizeof buf, "%u,%.17g,%.17g,%.17g,%u,%llu\n", summary.k,
                      summary.mean, summary.expected, summary.rel_error,
                      result.config.trials,
                      static_cast<unsigned long long>(result.config.seed));
        out += buf;
    }
    return out;
}

}  // namespace expander
