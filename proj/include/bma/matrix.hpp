#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bma/bitvec.hpp"

namespace bma {

// Dense binary matrix, bit-packed along both axes so that row and column
// extraction are word operations. Both planes are kept in sync by set/flip;
// solvers treat instances as immutable and edit private copies.
class BinaryMatrix {
public:
    BinaryMatrix() = default;
    BinaryMatrix(std::size_t m, std::size_t n);
    static BinaryMatrix from_rows(const std::vector<std::string>& rows);
    static BinaryMatrix from_row_vectors(const std::vector<BitVector>& rows);
    static BinaryMatrix from_columns(const std::vector<BitVector>& cols);

    std::size_t rows() const { return m_; }
    std::size_t cols() const { return n_; }

    bool get(std::size_t i, std::size_t j) const {
        return (row_bits_[i * row_words_ + (j >> 6)] >> (j & 63)) & 1u;
    }
    void set(std::size_t i, std::size_t j, bool v);
    void flip(std::size_t i, std::size_t j);

    BitVector row(std::size_t i) const;
    BitVector column(std::size_t j) const;
    std::vector<BitVector> columns() const;

    BinaryMatrix transpose() const;
    BinaryMatrix submatrix(const std::vector<std::size_t>& row_idx,
                           const std::vector<std::size_t>& col_idx) const;
    BinaryMatrix select_columns(const std::vector<std::size_t>& col_idx) const;
    BinaryMatrix select_rows(const std::vector<std::size_t>& row_idx) const;

    std::size_t count_ones() const;

    bool operator==(const BinaryMatrix& other) const;
    bool operator!=(const BinaryMatrix& other) const { return !(*this == other); }

private:
    std::size_t m_ = 0, n_ = 0;
    std::size_t row_words_ = 0, col_words_ = 0;
    std::vector<std::uint64_t> row_bits_; // m_ * row_words_
    std::vector<std::uint64_t> col_bits_; // n_ * col_words_
};

// Partition of {0,...,universe-1} into disjoint nonempty parts. Parts are
// ordered by smallest member and each part is sorted ascending.
struct IndexPartition {
    std::size_t universe = 0;
    std::vector<std::vector<std::size_t>> parts;

    std::size_t size() const { return parts.size(); }
    bool is_valid() const;
};

// d_H(A,B): number of positions with different entries. Throws on shape
// mismatch.
std::size_t hamming(const BinaryMatrix& a, const BinaryMatrix& b);

// Rank over GF(2); works on a scratch copy, the input is never mutated.
std::size_t gf2_rank(const BinaryMatrix& a);

// If gf2_rank(a) > r, returns row and column index sets of size r+1 whose
// induced submatrix has rank r+1 (the pivot rows/columns of elimination).
std::optional<std::pair<std::vector<std::size_t>, std::vector<std::size_t>>>
find_full_rank_submatrix(const BinaryMatrix& a, std::size_t r);

// Boolean product over the (AND, OR) semiring; u is m x r, v is r x n.
BinaryMatrix boolean_product(const BinaryMatrix& u, const BinaryMatrix& v);

// Maximal equal-column / equal-row classes ("initial clusters" on columns).
IndexPartition column_groups(const BinaryMatrix& a);
IndexPartition row_groups(const BinaryMatrix& a);
std::pair<IndexPartition, IndexPartition> block_partition(const BinaryMatrix& a);

// True iff c is constant on every maximal equal-row class of a.
bool agrees_with(const BitVector& c, const BinaryMatrix& a);

// All vectors b agreeing with a's row structure with d_H(base, b) <= h,
// obtained by flipping whole row groups of base. base must itself agree
// with a (e.g. a column of a). Deterministic order; includes base itself.
std::vector<BitVector> enumerate_agreeing_within(const BinaryMatrix& a,
                                                 const BitVector& base,
                                                 std::size_t h);

// Number of pairwise-distinct columns / rows.
std::size_t distinct_column_count(const BinaryMatrix& a);
std::size_t distinct_row_count(const BinaryMatrix& a);

} // namespace bma
