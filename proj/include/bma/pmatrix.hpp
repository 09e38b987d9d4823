#pragma once

#include <optional>
#include <vector>

#include "bma/matrix.hpp"
#include "bma/run_control.hpp"

namespace bma {

// A realized P-matrix: row and column partitions of b such that block
// (i, j) is constant with value pattern(i, j).
struct PMatrixWitness {
    IndexPartition row_parts; // exactly pattern.rows() parts
    IndexPartition col_parts; // exactly pattern.cols() parts
    BinaryMatrix b;
    std::size_t cost = 0;

    bool is_witness(const BinaryMatrix& a, const BinaryMatrix& pattern,
                    std::size_t k) const;
};

// Decides whether a itself is a P-matrix; on success returns realizing
// partitions (exhaustive search over block-partition permutations).
std::optional<PMatrixWitness> is_p_matrix(const BinaryMatrix& a,
                                          const BinaryMatrix& pattern);

// Branching solver: flip one representative entry per block pair of the
// block partition, recursing with k-1.
std::optional<PMatrixWitness> branch_pmatrix(const BinaryMatrix& a,
                                             const BinaryMatrix& pattern,
                                             std::size_t k, RunControl* rc = nullptr);

// Extendable variant: B must keep the X-columns of a verbatim, both B and
// B[., X u Y] must be P-matrices, and d_H(a, B) <= k.
struct ExtendablePInstance {
    BinaryMatrix a;
    BinaryMatrix pattern;
    std::vector<std::size_t> x, y, z; // disjoint, x+y+z = columns, |x|+|y| = q
    std::size_t k = 0;
};

std::optional<PMatrixWitness> solve_extendable(const ExtendablePInstance& ep,
                                               RunControl* rc = nullptr);

// Subexponential Extend-P-Solution recursion.
std::optional<PMatrixWitness> extend_p_solution(const BinaryMatrix& a,
                                                const BinaryMatrix& pattern,
                                                std::size_t k, RunControl* rc = nullptr);

// Exact minimum-edit search over all surjective row and column labelings.
// Desk scale. nullopt when the pattern cannot fit (p > m or q > n).
std::optional<PMatrixWitness> oracle_pmatrix_best(const BinaryMatrix& a,
                                                  const BinaryMatrix& pattern);

std::optional<PMatrixWitness> oracle_pmatrix(const BinaryMatrix& a,
                                             const BinaryMatrix& pattern,
                                             std::size_t k);

} // namespace bma
