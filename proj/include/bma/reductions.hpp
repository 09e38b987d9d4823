#pragma once

#include <optional>
#include <vector>

#include "bma/means.hpp"

namespace bma {

// Consensus String with Outliers: choose r of the n strings and a center
// string with total Hamming distance at most d.
struct CsoInstance {
    std::vector<BitVector> strings; // n strings, all of length len
    std::size_t len = 0;
    std::size_t r = 1;
    std::size_t d = 0;

    void validate() const;
};

struct CsoWitness {
    BitVector center;
    std::vector<std::size_t> chosen; // r string indices
    std::size_t cost = 0;

    bool is_witness(const CsoInstance& inst) const;
};

// OR-composition: appends a per-instance marker suffix of t blocks of
// length d+1 (block i all ones, the rest zeros). The output is a
// yes-instance iff some input is.
CsoInstance compose_cso(const std::vector<CsoInstance>& instances);

// Reduction to Binary r-Means with r' = n-r+1 and k = (d+1)r + d; only
// proven for r <= d.
MeansInstance reduce_cso_to_means(const CsoInstance& cso);

// Exact desk-scale solver: for r >= d+1 the center must be an input string
// and greedy selection is optimal; otherwise all 2^len centers are tried.
std::optional<CsoWitness> oracle_cso(const CsoInstance& inst);

} // namespace bma
