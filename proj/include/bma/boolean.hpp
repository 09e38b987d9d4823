#pragma once

#include <optional>
#include <vector>

#include "bma/matrix.hpp"
#include "bma/run_control.hpp"

namespace bma {

// Boolean factorization witness: b = u AND-OR v is within k edits of a.
struct BoolSolution {
    BinaryMatrix u; // m x r'
    BinaryMatrix v; // r' x n
    std::size_t cost = 0;

    BinaryMatrix implied() const;
    bool is_witness(const BinaryMatrix& a, std::size_t r, std::size_t k) const;
};

// A 2^r x 2^r pattern of Boolean rank <= r together with factors that
// realize it. Patterns are deduplicated up to row/column permutation.
struct BoolPattern {
    BinaryMatrix p;
    BinaryMatrix u; // p.rows() x r
    BinaryMatrix v; // r x p.cols()
};

// Lexicographically minimal representative of p under row and column
// permutations (exact; intended for patterns up to 8x8).
BinaryMatrix pattern_canonical_form(const BinaryMatrix& p);

// All 2^r x 2^r Boolean products U AND V, deduplicated exactly and up to
// permutation. Supported for r <= 2; the factor space doubles
// exponentially with r and is guarded beyond that.
std::vector<BoolPattern> enumerate_patterns(std::size_t r);

// Low Boolean-Rank Approximation by trying every pattern (and every
// row/column-deleted sub-pattern) through the P-matrix solver.
std::optional<BoolSolution> solve_boolean(const BinaryMatrix& a, std::size_t r,
                                          std::size_t k, RunControl* rc = nullptr);

// Exact minimum-edit factorization; U enumerated over the row classes of a,
// V optimized column by column. Desk scale.
BoolSolution oracle_boolean_best(const BinaryMatrix& a, std::size_t r);

std::optional<BoolSolution> oracle_boolean(const BinaryMatrix& a, std::size_t r,
                                           std::size_t k);

// Smallest r admitting an exact factorization; the zero matrix has rank 0.
std::size_t boolean_rank_exact(const BinaryMatrix& a);

} // namespace bma
