#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

// SE/SSE random matrices: n x N, exactly d nonzeros per column, supports drawn
// uniformly without replacement and independently per column. Equivalently the
// adjacency structure of a random left-d-regular bipartite graph.

namespace expander {

enum class Ensemble : uint8_t {
    SE,   ///< every nonzero is +1
    SSE,  ///< nonzeros are independent fair draws from {-1, +1}
};

const char* to_string(Ensemble e);
Ensemble ensemble_from_string(const std::string& name);

struct SparseColumnMatrix {
    uint32_t n = 0;       ///< rows (right vertices)
    uint32_t cols = 0;    ///< columns N (left vertices)
    uint32_t degree = 0;  ///< nonzeros per column d (left degree)
    Ensemble ensemble = Ensemble::SE;
    uint64_t seed = 0;

    /// Column-major, cols*degree entries, each column sorted ascending.
    std::vector<uint32_t> supports;
    /// Empty for SE; otherwise cols*degree values in {-1, +1}.
    std::vector<int8_t> signs;

    std::span<const uint32_t> column(uint32_t j) const {
        return {supports.data() + static_cast<size_t>(j) * degree, degree};
    }
    std::span<const int8_t> column_signs(uint32_t j) const {
        return {signs.data() + static_cast<size_t>(j) * degree, degree};
    }
};

/// Draws a fresh matrix. Column j is generated from the substream
/// rng::fold(seed, j); SSE signs are drawn after the support from the same
/// substream, so SE and SSE with equal seeds share supports. Bit-identical
/// output for identical arguments regardless of `threads`.
SparseColumnMatrix generate(uint32_t n, uint32_t N, uint32_t d, Ensemble ensemble,
                            uint64_t seed, int threads = 0);

/// |A_S|: cardinality of the union of the supports of the columns in S.
uint32_t neighbor_count(const SparseColumnMatrix& m, std::span<const uint32_t> S);

/// True iff |A_S| >= (1 - eps) d |S|. Requires 0 < eps < 1/2.
bool expansion_event(const SparseColumnMatrix& m, std::span<const uint32_t> S, double eps);

/// y = A x (SE entries act as +1, SSE entries as their signs).
std::vector<double> apply(const SparseColumnMatrix& m, std::span<const double> x);

/// Text serialization: optional '#' comment lines, then a header
/// "n N d ensemble seed", then one line per column (row indices; SSE entries
/// carry a sign prefix, e.g. "+3 -17 +42").
void save(const SparseColumnMatrix& m, std::ostream& out);
SparseColumnMatrix load(std::istream& in);

/// Incremental union-cardinality counter with O(1) reset, reusable across
/// many queries (the Monte Carlo hot path).
class UnionCounter {
public:
    explicit UnionCounter(uint32_t n) : stamp_(n, 0) {}

    void begin() {
        if (++epoch_ == 0) {  // wrapped: invalidate all stamps
            std::fill(stamp_.begin(), stamp_.end(), 0u);
            epoch_ = 1;
        }
        count_ = 0;
    }

    void add(std::span<const uint32_t> rows) {
        for (uint32_t r : rows) {
            if (stamp_[r] != epoch_) {
                stamp_[r] = epoch_;
                ++count_;
            }
        }
    }

    uint32_t count() const { return count_; }

private:
    std::vector<uint32_t> stamp_;
    uint32_t epoch_ = 0;
    uint32_t count_ = 0;
};

}  // namespace expander
