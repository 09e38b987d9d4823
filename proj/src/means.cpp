#include "bma/means.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <functional>
#include <limits>
#include <set>

#include "bma/errors.hpp"

namespace bma {

namespace {
constexpr std::size_t kInf = std::numeric_limits<std::size_t>::max() / 2;
} // namespace

bool Clustering::is_witness(const MeansInstance& inst) const {
    if (clusters.size() > inst.r || clusters.size() != means.size()) return false;
    return clustering_cost(inst.a, *this) <= inst.k;
}

std::size_t clustering_cost(const BinaryMatrix& a, const Clustering& c) {
    if (c.clusters.size() != c.means.size())
        throw UsageError("clustering has a mean count different from its cluster count");
    std::vector<char> seen(a.cols(), 0);
    std::size_t total = 0;
    for (std::size_t i = 0; i < c.clusters.size(); ++i) {
        if (c.clusters[i].empty()) throw UsageError("clustering contains an empty cluster");
        for (std::size_t j : c.clusters[i]) {
            if (j >= a.cols() || seen[j])
                throw UsageError("clustering is not a partition of the columns");
            seen[j] = 1;
            total += hamming(c.means[i], a.column(j));
        }
    }
    for (char s : seen)
        if (!s) throw UsageError("clustering does not cover every column");
    return total;
}

BitVector majority_mean(const BinaryMatrix& a, const std::vector<std::size_t>& idx) {
    if (idx.empty()) throw UsageError("majority mean of an empty cluster");
    BitVector mean(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        std::size_t ones = 0;
        for (std::size_t j : idx)
            if (a.get(i, j)) ++ones;
        // Ties go to 0: a coordinate is 1 only on a strict majority.
        if (2 * ones > idx.size()) mean.set(i, true);
    }
    return mean;
}

Clustering assign_to_means(const BinaryMatrix& a, const std::vector<BitVector>& means) {
    if (means.empty()) throw UsageError("assignment needs at least one mean");
    for (const auto& c : means)
        if (c.size() != a.rows())
            throw DimensionError("mean length differs from the matrix row count");

    std::vector<std::vector<std::size_t>> buckets(means.size());
    std::size_t cost = 0;
    for (std::size_t j = 0; j < a.cols(); ++j) {
        BitVector col = a.column(j);
        std::size_t best = 0, best_d = hamming(means[0], col);
        for (std::size_t i = 1; i < means.size(); ++i) {
            std::size_t d = hamming(means[i], col);
            if (d < best_d) {
                best = i;
                best_d = d;
            }
        }
        buckets[best].push_back(j);
        cost += best_d;
    }

    Clustering out;
    for (std::size_t i = 0; i < means.size(); ++i) {
        if (buckets[i].empty()) continue;
        out.clusters.push_back(std::move(buckets[i]));
        out.means.push_back(means[i]);
    }
    out.cost = cost;
    return out;
}

namespace {

// Enumerates partitions of {0..count-1} into at most max_parts nonempty
// parts via restricted growth strings; calls visit(labels, used) per
// partition. visit returning true stops the enumeration.
bool for_each_partition(std::size_t count, std::size_t max_parts,
                        const std::function<bool(const std::vector<std::size_t>&, std::size_t)>& visit) {
    std::vector<std::size_t> labels(count, 0);
    bool stopped = false;
    auto walk = [&](auto&& self, std::size_t pos, std::size_t used) -> void {
        if (stopped) return;
        if (pos == count) {
            stopped = visit(labels, used);
            return;
        }
        std::size_t cap = std::min(used + 1, max_parts);
        for (std::size_t l = 0; l < cap && !stopped; ++l) {
            labels[pos] = l;
            self(self, pos + 1, std::max(used, l + 1));
        }
    };
    if (count == 0) return visit(labels, 0);
    if (max_parts == 0) return false;
    walk(walk, 0, 0);
    return stopped;
}

} // namespace

Clustering oracle_means_best(const BinaryMatrix& a, std::size_t r) {
    if (r == 0) throw UsageError("cluster budget must be positive");
    Clustering best;
    if (a.cols() == 0) return best;

    IndexPartition initial = column_groups(a);
    std::size_t g = initial.size();
    best.cost = kInf;

    // A regular optimum exists, so partitioning whole initial clusters and
    // applying the majority rule reaches the global minimum.
    for_each_partition(g, std::min(r, g), [&](const std::vector<std::size_t>& labels,
                                              std::size_t used) {
        std::vector<std::vector<std::size_t>> clusters(used);
        for (std::size_t gi = 0; gi < g; ++gi)
            for (std::size_t j : initial.parts[gi]) clusters[labels[gi]].push_back(j);
        std::size_t cost = 0;
        std::vector<BitVector> means;
        means.reserve(used);
        for (auto& cl : clusters) {
            std::sort(cl.begin(), cl.end());
            BitVector mean = majority_mean(a, cl);
            for (std::size_t j : cl) cost += hamming(mean, a.column(j));
            means.push_back(std::move(mean));
            if (cost >= best.cost) break;
        }
        if (cost < best.cost)
            best = Clustering{std::move(clusters), std::move(means), cost};
        return false;
    });
    return best;
}

std::optional<Clustering> oracle_means(const MeansInstance& inst) {
    Clustering best = oracle_means_best(inst.a, inst.r);
    if (best.cost <= inst.k) return best;
    return std::nullopt;
}

std::vector<std::vector<std::size_t>> greedy_distance_partition(const BinaryMatrix& a,
                                                                std::size_t k) {
    std::size_t n = a.cols();
    std::vector<BitVector> cols = a.columns();
    std::vector<std::size_t> part_of(n, kInf);
    std::vector<std::vector<std::size_t>> parts;
    for (std::size_t seed = 0; seed < n; ++seed) {
        if (part_of[seed] != kInf) continue;
        std::vector<std::size_t> members{seed};
        part_of[seed] = parts.size();
        bool grew = true;
        while (grew) {
            grew = false;
            for (std::size_t j = 0; j < n; ++j) {
                if (part_of[j] != kInf) continue;
                for (std::size_t h : members) {
                    if (hamming(cols[j], cols[h]) <= k) {
                        members.push_back(j);
                        part_of[j] = parts.size();
                        grew = true;
                        break;
                    }
                }
            }
        }
        std::sort(members.begin(), members.end());
        parts.push_back(std::move(members));
    }
    return parts;
}

KernelOutcome kernelize_means(const MeansInstance& inst) {
    const BinaryMatrix& a = inst.a;
    const std::size_t r = inst.r, k = inst.k;

    IndexPartition initial = column_groups(a);
    if (initial.size() <= r) return {KernelOutcome::Kind::SolvedYes, std::nullopt, {}};
    if (initial.size() >= k + r + 1) return {KernelOutcome::Kind::SolvedNo, std::nullopt, {}};

    // Trim every initial cluster to at most k+1 columns.
    std::vector<std::size_t> kept;
    for (const auto& part : initial.parts)
        for (std::size_t i = 0; i < std::min(part.size(), k + 1); ++i)
            kept.push_back(part[i]);
    std::sort(kept.begin(), kept.end());
    BinaryMatrix trimmed = a.select_columns(kept);
    std::size_t n = trimmed.cols();

    std::vector<std::vector<std::size_t>> parts = greedy_distance_partition(trimmed, k);
    std::size_t s = parts.size();
    if (s > r) return {KernelOutcome::Kind::SolvedNo, std::nullopt, {}};

    // Per part, collect the rows that are nonuniform on that part; all parts
    // are padded to the same height.
    std::vector<std::vector<std::size_t>> picked_rows(s);
    std::size_t height = 0;
    for (std::size_t p = 0; p < s; ++p) {
        for (std::size_t i = 0; i < trimmed.rows(); ++i) {
            bool first = trimmed.get(i, parts[p][0]);
            for (std::size_t j : parts[p]) {
                if (trimmed.get(i, j) != first) {
                    picked_rows[p].push_back(i);
                    break;
                }
            }
        }
        height = std::max(height, picked_rows[p].size());
    }
    for (std::size_t p = 0; p < s; ++p)
        for (std::size_t i = 0; picked_rows[p].size() < height; ++i)
            if (std::find(picked_rows[p].begin(), picked_rows[p].end(), i) ==
                picked_rows[p].end())
                picked_rows[p].push_back(i);

    std::size_t band = (k + 2) / 2; // ceil((k+1)/2)
    BinaryMatrix d(height + s * band, n);
    for (std::size_t p = 0; p < s; ++p) {
        for (std::size_t j : parts[p]) {
            for (std::size_t i = 0; i < height; ++i)
                if (trimmed.get(picked_rows[p][i], j)) d.set(i, j, true);
            for (std::size_t i = 0; i < band; ++i) d.set(height + p * band + i, j, true);
        }
    }

    KernelOutcome out{KernelOutcome::Kind::Reduced,
                      MeansInstance{std::move(d), r, k}, std::move(kept)};
    return out;
}

Clustering lift_kernel_clustering(const BinaryMatrix& original,
                                  const std::vector<std::size_t>& kept_columns,
                                  const std::vector<std::vector<std::size_t>>& kept_clusters) {
    // Majority means of the given clusters, on the original matrix.
    std::vector<BitVector> means;
    for (const auto& cl : kept_clusters) {
        std::vector<std::size_t> orig;
        for (std::size_t j : cl) orig.push_back(kept_columns[j]);
        means.push_back(majority_mean(original, orig));
    }

    // Regularize over the kept columns only, then recompute the means; the
    // trimmed duplicates rejoin the cluster of their surviving copies, whose
    // mean equals them whenever the cost stays within budget.
    std::vector<std::vector<std::size_t>> buckets(means.size());
    for (std::size_t j : kept_columns) {
        BitVector col = original.column(j);
        std::size_t best = 0, best_d = hamming(means[0], col);
        for (std::size_t i = 1; i < means.size(); ++i) {
            std::size_t di = hamming(means[i], col);
            if (di < best_d) {
                best = i;
                best_d = di;
            }
        }
        buckets[best].push_back(j);
    }

    Clustering out;
    std::vector<std::size_t> home(original.cols(), kInf);
    for (auto& b : buckets) {
        if (b.empty()) continue;
        for (std::size_t j : b) home[j] = out.clusters.size();
        out.means.push_back(majority_mean(original, b));
        out.clusters.push_back(std::move(b));
    }

    std::vector<char> kept_mark(original.cols(), 0);
    for (std::size_t j : kept_columns) kept_mark[j] = 1;
    std::vector<BitVector> cols = original.columns();
    for (std::size_t j = 0; j < original.cols(); ++j) {
        if (kept_mark[j]) continue;
        for (std::size_t h : kept_columns) {
            if (cols[h] == cols[j]) {
                out.clusters[home[h]].push_back(j);
                break;
            }
        }
    }
    for (auto& cl : out.clusters) std::sort(cl.begin(), cl.end());
    out.cost = clustering_cost(original, out);
    return out;
}

namespace {

// State of the Extend-Means recursion on the kernelized instance.
struct MeansSearch {
    const BinaryMatrix& a;
    std::vector<BitVector> cols;
    std::size_t r;
    double log_w;
    RunControl* rc;

    std::size_t min_to(const std::vector<BitVector>& s, std::size_t col) const {
        std::size_t best = kInf;
        for (const auto& v : s) best = std::min(best, hamming(v, cols[col]));
        return best;
    }

    // Label 0 marks columns left with the existing means; labels 1..p are
    // new clusters in restricted-growth order, p <= min(|idx|, r - |s|).
    std::optional<std::vector<BitVector>> brute_force_partitions(
        const std::vector<std::size_t>& idx, const std::vector<BitVector>& s,
        std::size_t d) {
        std::size_t max_new = std::min(idx.size(), r - s.size());
        std::vector<std::size_t> labels(idx.size(), 0);
        std::optional<std::vector<BitVector>> found;

        auto evaluate = [&](std::size_t used_new) {
            tick(rc);
            std::vector<std::vector<std::size_t>> groups(used_new);
            for (std::size_t pos = 0; pos < labels.size(); ++pos)
                if (labels[pos] > 0) groups[labels[pos] - 1].push_back(idx[pos]);
            std::vector<BitVector> cand = s;
            for (const auto& gr : groups) cand.push_back(majority_mean(a, gr));
            std::size_t total = 0;
            for (std::size_t i : idx) {
                total += min_to(cand, i);
                if (total > d) return false;
            }
            found = std::move(cand);
            return true;
        };

        auto walk = [&](auto&& self, std::size_t pos, std::size_t used_new) -> bool {
            if (pos == idx.size()) return evaluate(used_new);
            labels[pos] = 0;
            if (self(self, pos + 1, used_new)) return true;
            std::size_t cap = std::min(used_new + 1, max_new);
            for (std::size_t l = 1; l <= cap; ++l) {
                labels[pos] = l;
                if (self(self, pos + 1, std::max(used_new, l))) return true;
            }
            return false;
        };
        walk(walk, 0, 0);
        return found;
    }

    std::optional<std::vector<BitVector>> run(std::vector<std::size_t> idx,
                                              std::vector<BitVector> s,
                                              std::size_t d) {
        tick(rc);

        // Step 1: the current means may already cover the open columns.
        std::size_t covered = 0;
        for (std::size_t i : idx) {
            covered += min_to(s, i);
            if (covered > d) break;
        }
        if (covered <= d) return s;

        // Step 2: no room to extend.
        if (s.size() == r) return std::nullopt;

        // Step 3: the open set and the budget shrink cumulatively over h.
        for (std::size_t h = 0; h <= d; ++h) {
            if (h > 0) {
                std::vector<std::size_t> keep;
                for (std::size_t i : idx) {
                    std::size_t l = min_to(s, i);
                    if (l <= h - 1) {
                        if (l > d) return std::nullopt;
                        d -= l;
                    } else {
                        keep.push_back(i);
                    }
                }
                idx.swap(keep);
            }

            // (ii) Few open columns: brute-force every partition of them
            // into new clusters plus one possibly-empty part left with the
            // existing means. Decides this call.
            if (double(idx.size()) * double(idx.size()) <= double(d) * log_w)
                return brute_force_partitions(idx, s, d);

            // (iii) Guess one new mean at distance exactly h from an open
            // column.
            if (!idx.empty() && h * idx.size() <= d) {
                std::set<BitVector> cands;
                std::set<BitVector> seen_cols;
                for (std::size_t i : idx) {
                    if (!seen_cols.insert(cols[i]).second) continue;
                    for (auto& v : enumerate_agreeing_within(a, cols[i], h))
                        if (hamming(v, cols[i]) == h) cands.insert(std::move(v));
                }
                for (const auto& v : cands) {
                    std::vector<BitVector> next = s;
                    next.push_back(v);
                    if (auto res = run(idx, std::move(next), d)) return res;
                }
            }
        }
        return std::nullopt;
    }
};

} // namespace

std::optional<Clustering> extend_means(const MeansInstance& inst, RunControl* rc) {
    const BinaryMatrix& a = inst.a;
    if (inst.r == 0) throw UsageError("cluster budget must be positive");

    // Fewer initial clusters than the budget: the initial clusters are a
    // zero-cost solution, no recursion needed.
    IndexPartition initial = column_groups(a);
    if (initial.size() <= inst.r) {
        Clustering out;
        for (const auto& part : initial.parts) {
            out.means.push_back(a.column(part.front()));
            out.clusters.push_back(part);
        }
        out.cost = 0;
        return out;
    }

    KernelOutcome kernel = kernelize_means(inst);
    if (kernel.kind == KernelOutcome::Kind::SolvedYes) {
        Clustering out;
        for (const auto& part : initial.parts) {
            out.means.push_back(a.column(part.front()));
            out.clusters.push_back(part);
        }
        out.cost = 0;
        return out;
    }
    if (kernel.kind == KernelOutcome::Kind::SolvedNo) return std::nullopt;

    const MeansInstance& red = *kernel.reduced;
    std::size_t w = distinct_row_count(red.a);
    MeansSearch search{red.a, red.a.columns(), red.r,
                       std::log2(double(std::max<std::size_t>(w, 1))), rc};
    std::vector<std::size_t> all(red.a.cols());
    for (std::size_t j = 0; j < all.size(); ++j) all[j] = j;

    auto means = search.run(std::move(all), {}, red.k);
    if (!means) return std::nullopt;

    // Means found on the kernel matrix induce a column partition there;
    // the partition transfers to the original instance.
    Clustering on_kernel = assign_to_means(red.a, *means);
    Clustering lifted = lift_kernel_clustering(a, kernel.kept_columns, on_kernel.clusters);
    assert(lifted.cost <= inst.k);
    return lifted;
}

} // namespace bma
