#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "bma/matrix.hpp"
#include "bma/run_control.hpp"

namespace bma {

// Low GF(2)-Rank Approximation instance: find B with rank(B) <= r over
// GF(2) and d_H(a, B) <= k.
struct Gf2Instance {
    BinaryMatrix a;
    std::size_t r = 1;
    std::size_t k = 0;
};

// A rank-bounded approximation expressed by a linearly independent basis
// and, per column, the subset of basis vectors that XOR to its B-column.
struct Gf2Solution {
    std::vector<BitVector> basis;
    std::vector<std::uint32_t> assignment; // one mask per column of a
    std::size_t cost = 0;

    BinaryMatrix implied(std::size_t rows) const;
    bool is_witness(const Gf2Instance& inst) const;
};

// Basis (pivot columns) and per-column representation of a matrix over
// GF(2); every column of b must lie in the span of its pivot columns.
Gf2Solution solution_from_matrix(const BinaryMatrix& b);

// Re-expresses b against a: basis from b, cost measured against a.
Gf2Solution solution_between(const BinaryMatrix& a, const BinaryMatrix& b);

// Rejects instances whose distinct column or row count exceeds 2^r + k;
// otherwise returns the instance unchanged.
std::optional<Gf2Instance> preprocess_gf2(const Gf2Instance& inst);

// (r+1)^2-way branching on a full-rank (r+1)x(r+1) submatrix.
std::optional<Gf2Solution> branch_gf2(const Gf2Instance& inst, RunControl* rc = nullptr);

// Subexponential Extend-Solution recursion.
std::optional<Gf2Solution> extend_solution_gf2(const Gf2Instance& inst,
                                               RunControl* rc = nullptr);

// Exact minimum-edit solution by enumerating candidate bases drawn from the
// vectors agreeing with a. Desk scale; throws ResourceLimitError beyond it.
Gf2Solution oracle_gf2_best(const BinaryMatrix& a, std::size_t r);

std::optional<Gf2Solution> oracle_gf2(const Gf2Instance& inst);

} // namespace bma
