#pragma once

#include <optional>
#include <vector>

#include "bma/matrix.hpp"
#include "bma/run_control.hpp"

namespace bma {

// Binary r-Means instance: partition the columns of a into at most r
// clusters with binary means so the total Hamming cost is at most k.
struct MeansInstance {
    BinaryMatrix a;
    std::size_t r = 1; // cluster budget, >= 1
    std::size_t k = 0; // cost budget
};

struct Clustering {
    std::vector<std::vector<std::size_t>> clusters; // disjoint column index sets
    std::vector<BitVector> means;                   // one per cluster
    std::size_t cost = 0;

    bool is_witness(const MeansInstance& inst) const;
};

// Recomputes the cost of a clustering against a; throws if malformed.
std::size_t clustering_cost(const BinaryMatrix& a, const Clustering& c);

// Per-coordinate majority over the selected columns, ties to 0. The result
// agrees with a and minimizes the within-cluster cost.
BitVector majority_mean(const BinaryMatrix& a, const std::vector<std::size_t>& idx);

// Assigns every column to a nearest mean (ties to the lowest mean index)
// and drops empty clusters.
Clustering assign_to_means(const BinaryMatrix& a, const std::vector<BitVector>& means);

// Minimum-cost clustering into at most r clusters, by brute force over the
// regular partitions of the initial clusters. Exact; desk scale.
Clustering oracle_means_best(const BinaryMatrix& a, std::size_t r);

// Decision form of the oracle: a witness iff the optimum is within k.
std::optional<Clustering> oracle_means(const MeansInstance& inst);

struct KernelOutcome {
    enum class Kind { SolvedYes, SolvedNo, Reduced };
    Kind kind;
    // Only for Reduced:
    std::optional<MeansInstance> reduced;
    // Original indices of the columns that survived the duplicate trim; the
    // reduced matrix columns are aligned with this list.
    std::vector<std::size_t> kept_columns;
};

// Greedy partition of the columns, chaining Hamming distance <= k. Every
// cluster of a within-budget solution lies inside a single part.
std::vector<std::vector<std::size_t>> greedy_distance_partition(const BinaryMatrix& a,
                                                                std::size_t k);

// Polynomial kernel for parameter k+r: either decides the instance or emits
// an equivalent one with at most k+r distinct columns, at most
// (k+1)(k+r) columns and at most ((k+1)(k+r)-1)k + ceil((k+1)/2)r rows.
KernelOutcome kernelize_means(const MeansInstance& inst);

// Subexponential decision solver (kernelize, then the Extend-Means
// recursion). Returns a verified witness for the original instance.
std::optional<Clustering> extend_means(const MeansInstance& inst, RunControl* rc = nullptr);

// Lifts a partition of the kernel's kept columns to a full-instance
// clustering: regularize, recompute majority means, reattach trimmed
// duplicates. Cost never increases.
Clustering lift_kernel_clustering(const BinaryMatrix& original,
                                  const std::vector<std::size_t>& kept_columns,
                                  const std::vector<std::vector<std::size_t>>& kept_clusters);

} // namespace bma
