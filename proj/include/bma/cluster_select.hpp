#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bma/means.hpp"
#include "bma/run_control.hpp"

namespace bma {

// Cluster Selection: pick one initial cluster from each group of a regular
// partition plus a common mean c with total distance at most d.
struct ClusterSelectionInstance {
    BinaryMatrix a;
    std::vector<std::vector<std::size_t>> groups; // regular partition of columns
    std::size_t d = 0;

    // Each group must be a union of whole initial clusters.
    void validate() const;
    // Initial clusters inside one group, ordered by lowest column index.
    std::vector<std::vector<std::size_t>> clusters_of_group(std::size_t g) const;
};

struct ClusterSelectionWitness {
    std::vector<std::vector<std::size_t>> chosen; // one initial cluster per group
    BitVector mean;
    std::size_t cost = 0;

    bool is_witness(const ClusterSelectionInstance& inst) const;
};

// Consensus Patterns over the alphabet {0, 1, a, b}: a length-t pattern and
// one length-t window per string with total Hamming distance at most d.
struct ConsensusInstance {
    std::vector<std::string> strings; // multiset; equal lengths
    std::size_t t = 0;
    std::size_t d = 0;
};

struct ConsensusWitness {
    std::string pattern;
    std::vector<std::size_t> offsets; // one per input string
    std::size_t cost = 0;
};

// String reduction from a pruned Cluster Selection instance: every initial
// cluster of group i must have size lengths[i]. Strings are emitted
// group-major, lengths[i] identical copies per group.
ConsensusInstance build_consensus_instance(const ClusterSelectionInstance& inst,
                                           const std::vector<std::size_t>& lengths);

// Exact desk-scale Consensus Patterns solver: enumerates offset tuples with
// per-position plurality and branch-and-bound. Resource-guarded.
std::optional<ConsensusWitness> solve_consensus_desk(const ConsensusInstance& cp,
                                                     RunControl* rc = nullptr);

// Brute force over candidate means (agreeing vectors within distance d of
// some column) and every per-group cluster choice. Minimum cost.
std::optional<ClusterSelectionWitness>
oracle_cluster_selection(const ClusterSelectionInstance& inst);

// Three-phase solver: column means first, then the p > d cutoff, then the
// Consensus Patterns reduction per cluster-size tuple.
std::optional<ClusterSelectionWitness>
solve_cluster_selection(const ClusterSelectionInstance& inst, RunControl* rc = nullptr);

// Color-coding driver for Binary r-Means. Deterministic exhaustive-coloring
// mode up to 8 initial clusters; otherwise `trials` seeded random colorings
// (0 means the ceil(e^(2k)) default). One-sided: a returned clustering is
// always a valid witness.
std::optional<Clustering> color_coding_means(const MeansInstance& inst,
                                             std::uint64_t seed = 1,
                                             std::size_t trials = 0,
                                             RunControl* rc = nullptr);

} // namespace bma
