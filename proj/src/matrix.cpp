#include "expander/matrix.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "expander/errors.hpp"
#include "expander/rng.hpp"

namespace expander {

namespace {

// n above this uses sort-unique instead of a dense stamp array.
constexpr uint32_t kDenseUnionLimit = 1u << 22;

int resolve_threads(int threads) {
#ifdef _OPENMP
    return threads > 0 ? threads : omp_get_max_threads();
#else
    (void)threads;
    return 1;
#endif
}

}  // namespace

const char* to_string(Ensemble e) { return e == Ensemble::SE ? "SE" : "SSE"; }

Ensemble ensemble_from_string(const std::string& name) {
    if (name == "SE") return Ensemble::SE;
    if (name == "SSE") return Ensemble::SSE;
    throw DomainError("unknown ensemble '" + name + "' (expected SE or SSE)");
}

SparseColumnMatrix generate(uint32_t n, uint32_t N, uint32_t d, Ensemble ensemble,
                            uint64_t seed, int threads) {
    if (d == 0) throw DomainError("generate: degree d must be positive");
    if (d > n) throw InfeasibleError("generate: degree d exceeds row count n");
    if (N == 0) throw DomainError("generate: column count N must be positive");

    SparseColumnMatrix m;
    m.n = n;
    m.cols = N;
    m.degree = d;
    m.ensemble = ensemble;
    m.seed = seed;
    m.supports.resize(static_cast<size_t>(N) * d);
    if (ensemble == Ensemble::SSE) m.signs.resize(static_cast<size_t>(N) * d);

    const int nthreads = resolve_threads(threads);
#ifdef _OPENMP
#pragma omp parallel num_threads(nthreads)
#endif
    {
        rng::SubsetSampler sampler(n);
        std::vector<uint32_t> buf;
        buf.reserve(d);
#ifdef _OPENMP
#pragma omp for schedule(static)
#endif
        for (int64_t j = 0; j < static_cast<int64_t>(N); ++j) {
            rng::Xoshiro256StarStar gen(rng::fold(seed, static_cast<uint64_t>(j)));
            buf.clear();
            sampler.sample(d, gen, buf);
            std::copy(buf.begin(), buf.end(),
                      m.supports.begin() + static_cast<size_t>(j) * d);
            if (ensemble == Ensemble::SSE) {
                for (uint32_t t = 0; t < d; ++t)
                    m.signs[static_cast<size_t>(j) * d + t] =
                        (gen() >> 63) ? int8_t{1} : int8_t{-1};
            }
        }
    }
    (void)nthreads;
    return m;
}

namespace {

void check_column_set(const SparseColumnMatrix& m, std::span<const uint32_t> S) {
    if (S.empty()) throw DomainError("column set S must be nonempty");
    for (uint32_t j : S)
        if (j >= m.cols) throw DomainError("column index out of range");
}

}  // namespace

uint32_t neighbor_count(const SparseColumnMatrix& m, std::span<const uint32_t> S) {
    check_column_set(m, S);
    if (m.n <= kDenseUnionLimit) {
        UnionCounter counter(m.n);
        counter.begin();
        for (uint32_t j : S) counter.add(m.column(j));
        return counter.count();
    }
    std::vector<uint32_t> rows;
    rows.reserve(S.size() * m.degree);
    for (uint32_t j : S) {
        auto col = m.column(j);
        rows.insert(rows.end(), col.begin(), col.end());
    }
    std::sort(rows.begin(), rows.end());
    return static_cast<uint32_t>(std::unique(rows.begin(), rows.end()) - rows.begin());
}

bool expansion_event(const SparseColumnMatrix& m, std::span<const uint32_t> S, double eps) {
    if (!(eps > 0.0 && eps < 0.5))
        throw DomainError("expansion_event: eps must lie in (0, 1/2)");
    const uint32_t count = neighbor_count(m, S);
    return static_cast<double>(count) >=
           (1.0 - eps) * static_cast<double>(m.degree) * static_cast<double>(S.size());
}

std::vector<double> apply(const SparseColumnMatrix& m, std::span<const double> x) {
    if (x.size() != m.cols) throw DomainError("apply: x length must equal column count");
    std::vector<double> y(m.n, 0.0);
    for (uint32_t j = 0; j < m.cols; ++j) {
        const double xj = x[j];
        if (xj == 0.0) continue;
        auto col = m.column(j);
        if (m.ensemble == Ensemble::SSE) {
            auto sg = m.column_signs(j);
            for (uint32_t t = 0; t < m.degree; ++t) y[col[t]] += sg[t] * xj;
        } else {
            for (uint32_t t = 0; t < m.degree; ++t) y[col[t]] += xj;
        }
    }
    return y;
}

void save(const SparseColumnMatrix& m, std::ostream& out) {
    out << m.n << ' ' << m.cols << ' ' << m.degree << ' ' << to_string(m.ensemble)
        << ' ' << m.seed << '\n';
    for (uint32_t j = 0; j < m.cols; ++j) {
        auto col = m.column(j);
        for (uint32_t t = 0; t < m.degree; ++t) {
            if (t) out << ' ';
            if (m.ensemble == Ensemble::SSE)
                out << (m.column_signs(j)[t] > 0 ? '+' : '-');
            out << col[t];
        }
        out << '\n';
    }
}

SparseColumnMatrix load(std::istream& in) {
    std::string line;
    // header, skipping '#' comment lines
    while (std::getline(in, line)) {
        if (!line.empty() && line[0] != '#') break;
    }
    std::istringstream header(line);
    SparseColumnMatrix m;
    std::string ens;
    if (!(header >> m.n >> m.cols >> m.degree >> ens >> m.seed))
        throw DomainError("load: malformed matrix header");
    m.ensemble = ensemble_from_string(ens);
    if (m.degree == 0 || m.degree > m.n || m.cols == 0)
        throw DomainError("load: invalid matrix dimensions in header");

    m.supports.resize(static_cast<size_t>(m.cols) * m.degree);
    if (m.ensemble == Ensemble::SSE)
        m.signs.resize(static_cast<size_t>(m.cols) * m.degree);

    for (uint32_t j = 0; j < m.cols; ++j) {
        if (!std::getline(in, line))
            throw DomainError("load: unexpected end of file at column " + std::to_string(j));
        std::istringstream row(line);
        uint32_t prev = 0;
        for (uint32_t t = 0; t < m.degree; ++t) {
            std::string tok;
            if (!(row >> tok)) throw DomainError("load: short column line");
            size_t off = 0;
            int8_t sign = 1;
            if (tok[0] == '+' || tok[0] == '-') {
                if (m.ensemble != Ensemble::SSE)
                    throw DomainError("load: sign character in SE matrix");
                sign = tok[0] == '+' ? int8_t{1} : int8_t{-1};
                off = 1;
            } else if (m.ensemble == Ensemble::SSE) {
                throw DomainError("load: missing sign character in SSE matrix");
            }
            const unsigned long v = std::stoul(tok.substr(off));
            if (v >= m.n) throw DomainError("load: row index out of range");
            const auto r = static_cast<uint32_t>(v);
            if (t > 0 && r <= prev)
                throw DomainError("load: column support not strictly increasing");
            prev = r;
            m.supports[static_cast<size_t>(j) * m.degree + t] = r;
            if (m.ensemble == Ensemble::SSE)
                m.signs[static_cast<size_t>(j) * m.degree + t] = sign;
        }
        std::string extra;
        if (row >> extra) throw DomainError("load: trailing tokens on column line");
    }
    return m;
}

}  // namespace expander
