#include "bma/cluster_select.hpp"

#include <algorithm>
#include <array>
#include <cassert>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <set>

#include "bma/errors.hpp"

namespace bma {

namespace {
constexpr std::size_t kInf = std::numeric_limits<std::size_t>::max() / 2;
} // namespace

void ClusterSelectionInstance::validate() const {
    std::vector<char> seen(a.cols(), 0);
    for (const auto& g : groups) {
        if (g.empty()) throw UsageError("cluster selection groups must be nonempty");
        for (std::size_t j : g) {
            if (j >= a.cols() || seen[j])
                throw UsageError("groups must be disjoint column sets");
            seen[j] = 1;
        }
    }
    for (char c : seen)
        if (!c) throw UsageError("groups must cover every column");

    // Regularity: no initial cluster may straddle two groups.
    IndexPartition initial = column_groups(a);
    std::vector<std::size_t> group_of(a.cols(), 0);
    for (std::size_t g = 0; g < groups.size(); ++g)
        for (std::size_t j : groups[g]) group_of[j] = g;
    for (const auto& cl : initial.parts)
        for (std::size_t j : cl)
            if (group_of[j] != group_of[cl[0]])
                throw UsageError("partition is not regular");
}

std::vector<std::vector<std::size_t>>
ClusterSelectionInstance::clusters_of_group(std::size_t g) const {
    IndexPartition initial = column_groups(a);
    std::vector<char> in_group(a.cols(), 0);
    for (std::size_t j : groups[g]) in_group[j] = 1;
    std::vector<std::vector<std::size_t>> out;
    for (const auto& cl : initial.parts)
        if (in_group[cl[0]]) out.push_back(cl);
    return out;
}

bool ClusterSelectionWitness::is_witness(const ClusterSelectionInstance& inst) const {
    if (chosen.size() != inst.groups.size()) return false;
    std::size_t total = 0;
    for (std::size_t g = 0; g < chosen.size(); ++g) {
        if (chosen[g].empty()) return false;
        std::vector<char> in_group(inst.a.cols(), 0);
        for (std::size_t j : inst.groups[g]) in_group[j] = 1;
        for (std::size_t j : chosen[g]) {
            if (!in_group[j]) return false;
            total += hamming(mean, inst.a.column(j));
        }
    }
    return total <= inst.d;
}

ConsensusInstance build_consensus_instance(const ClusterSelectionInstance& inst,
                                           const std::vector<std::size_t>& lengths) {
    inst.validate();
    std::size_t p = inst.groups.size();
    if (lengths.size() != p)
        throw UsageError("one cluster size per group required");
    std::size_t total = 0;
    for (std::size_t l : lengths) {
        if (l == 0) throw UsageError("cluster sizes must be positive");
        total += l;
    }
    if (total > inst.d) throw UsageError("cluster sizes exceed the budget");
    if (p > inst.d) throw UsageError("more groups than budget");

    std::size_t m = inst.a.rows(), d = inst.d;
    std::string x;
    for (std::size_t copy = 0; copy < d + 1; ++copy) {
        x.append(m + d, 'a');
        x.append(m + d, 'b');
    }
    std::string zeros(d, '0');

    ConsensusInstance cp;
    cp.t = (m + d) * (2 * d + 3);
    cp.d = d;
    for (std::size_t g = 0; g < p; ++g) {
        auto clusters = inst.clusters_of_group(g);
        std::string s = x;
        bool any = false;
        for (const auto& cl : clusters) {
            if (cl.size() != lengths[g])
                throw UsageError("group contains a cluster of the wrong size");
            s += inst.a.column(cl[0]).to_string();
            s += zeros;
            s += x;
            any = true;
        }
        if (!any) throw UsageError("group has no cluster of the requested size");
        for (std::size_t copy = 0; copy < lengths[g]; ++copy) cp.strings.push_back(s);
    }
    return cp;
}

std::optional<ConsensusWitness> solve_consensus_desk(const ConsensusInstance& cp,
                                                     RunControl* rc) {
    if (cp.strings.empty()) throw UsageError("consensus instance needs strings");
    if (cp.t == 0) throw UsageError("pattern length must be positive");
    for (const auto& s : cp.strings)
        if (s.size() < cp.t)
            throw UsageError("every string must be at least the pattern length");

    // Identical strings share an optimal window; work on distinct strings
    // with multiplicities. Lengths may differ across distinct strings.
    std::map<std::string, std::size_t> mult;
    for (const auto& s : cp.strings) ++mult[s];
    std::vector<std::string> str;
    std::vector<std::size_t> weight;
    std::vector<std::size_t> offs;
    for (auto& [s, w] : mult) {
        str.push_back(s);
        weight.push_back(w);
        offs.push_back(s.size() - cp.t + 1);
    }
    std::size_t groups = str.size();

    auto finish = [&](const std::string& pattern,
                      const std::vector<std::size_t>& group_offset,
                      std::size_t cost) {
        ConsensusWitness w;
        w.pattern = pattern;
        w.cost = cost;
        for (const auto& s : cp.strings) {
            std::size_t g = std::size_t(
                std::find(str.begin(), str.end(), s) - str.begin());
            w.offsets.push_back(group_offset[g]);
        }
        return w;
    };

    if (groups == 1)
        return finish(str[0].substr(0, cp.t), {0}, 0);

    if (groups == 2) {
        // Per position the plurality symbol costs min(w1, w2) on mismatch.
        std::size_t unit = std::min(weight[0], weight[1]);
        std::size_t best = kInf, b0 = 0, b1 = 0;
        for (std::size_t o0 = 0; o0 < offs[0] && best > 0; ++o0)
            for (std::size_t o1 = 0; o1 < offs[1]; ++o1) {
                tick(rc);
                std::size_t diff = 0;
                for (std::size_t i = 0; i < cp.t; ++i) {
                    if (str[0][o0 + i] != str[1][o1 + i]) ++diff;
                    if (diff * unit >= best) break;
                }
                if (diff * unit < best) {
                    best = diff * unit;
                    b0 = o0;
                    b1 = o1;
                }
            }
        if (best > cp.d) return std::nullopt;
        std::string pattern = str[0].substr(b0, cp.t);
        if (weight[1] > weight[0]) pattern = str[1].substr(b1, cp.t);
        return finish(pattern, {b0, b1}, best);
    }

    // General case: enumerate offset tuples, keeping per-position symbol
    // weights incrementally; the best completion of a prefix is bounded
    // below by the plurality cost of the fixed strings. Work is metered by
    // visited nodes so pruning gets full credit before the guard fires.
    std::size_t nodes = 0;
    const std::size_t node_limit = 4'000'000;
    std::vector<std::array<std::size_t, 4>> counts(cp.t, {0, 0, 0, 0});
    auto sym = [](char c) -> std::size_t {
        switch (c) {
        case '0': return 0;
        case '1': return 1;
        case 'a': return 2;
        default: return 3;
        }
    };
    std::vector<std::size_t> offset(groups, 0);
    std::size_t placed_weight = 0;
    std::size_t best = kInf;
    std::vector<std::size_t> best_offsets;

    auto lower_bound_cost = [&]() {
        std::size_t lb = 0;
        for (std::size_t i = 0; i < cp.t; ++i) {
            std::size_t mx = std::max(std::max(counts[i][0], counts[i][1]),
                                      std::max(counts[i][2], counts[i][3]));
            lb += placed_weight - mx;
        }
        return lb;
    };

    auto walk = [&](auto&& self, std::size_t g) -> void {
        tick(rc);
        if (g == groups) {
            std::size_t total = lower_bound_cost();
            if (total < best) {
                best = total;
                best_offsets = offset;
            }
            return;
        }
        for (std::size_t o = 0; o < offs[g]; ++o) {
            if (++nodes > node_limit)
                throw ResourceLimitError("consensus offset search too large");
            offset[g] = o;
            for (std::size_t i = 0; i < cp.t; ++i)
                counts[i][sym(str[g][o + i])] += weight[g];
            placed_weight += weight[g];
            if (lower_bound_cost() <= std::min(best == 0 ? 0 : best - 1, cp.d))
                self(self, g + 1);
            placed_weight -= weight[g];
            for (std::size_t i = 0; i < cp.t; ++i)
                counts[i][sym(str[g][o + i])] -= weight[g];
        }
    };
    walk(walk, 0);

    if (best > cp.d) return std::nullopt;

    // Rebuild the plurality pattern for the winning offsets.
    static const char kSyms[4] = {'0', '1', 'a', 'b'};
    std::string pattern(cp.t, '0');
    for (std::size_t i = 0; i < cp.t; ++i) {
        std::array<std::size_t, 4> c{0, 0, 0, 0};
        for (std::size_t g = 0; g < groups; ++g)
            c[sym(str[g][best_offsets[g] + i])] += weight[g];
        pattern[i] = kSyms[std::size_t(
            std::max_element(c.begin(), c.end()) - c.begin())];
    }
    return finish(pattern, best_offsets, best);
}

std::optional<ClusterSelectionWitness>
oracle_cluster_selection(const ClusterSelectionInstance& inst) {
    inst.validate();
    std::size_t p = inst.groups.size();
    if (p == 0) return ClusterSelectionWitness{{}, BitVector(inst.a.rows()), 0};

    std::vector<std::vector<std::vector<std::size_t>>> clusters(p);
    for (std::size_t g = 0; g < p; ++g) clusters[g] = inst.clusters_of_group(g);

    // Candidate means: agreeing vectors within distance d of some column.
    // Any feasible mean is within d of every chosen column, and the optimal
    // one (per-coordinate majority over the chosen columns) agrees with a.
    std::set<BitVector> candidates;
    std::set<BitVector> seen_cols;
    for (std::size_t j = 0; j < inst.a.cols(); ++j) {
        BitVector col = inst.a.column(j);
        if (!seen_cols.insert(col).second) continue;
        for (auto& v : enumerate_agreeing_within(inst.a, col, inst.d))
            candidates.insert(std::move(v));
    }

    std::optional<ClusterSelectionWitness> best;
    for (const auto& c : candidates) {
        std::size_t total = 0;
        std::vector<std::vector<std::size_t>> chosen(p);
        for (std::size_t g = 0; g < p && total <= inst.d; ++g) {
            std::size_t gbest = kInf;
            for (const auto& cl : clusters[g]) {
                std::size_t cost = 0;
                for (std::size_t j : cl) cost += hamming(c, inst.a.column(j));
                if (cost < gbest) {
                    gbest = cost;
                    chosen[g] = cl;
                }
            }
            total += gbest;
        }
        if (total <= inst.d && (!best || total < best->cost))
            best = ClusterSelectionWitness{std::move(chosen), c, total};
    }
    return best;
}

namespace {

// Witness recovery per the reduction: read candidate means out of the
// pattern wherever a length-m window is purely binary, then re-check them
// against the pruned instance directly.
std::optional<ClusterSelectionWitness>
recover_from_pattern(const ClusterSelectionInstance& pruned, const std::string& pattern) {
    std::size_t m = pruned.a.rows();
    if (pattern.size() < m) return std::nullopt;
    for (std::size_t alpha = 0; alpha + m <= pattern.size(); ++alpha) {
        bool binary = true;
        for (std::size_t i = 0; i < m && binary; ++i)
            if (pattern[alpha + i] != '0' && pattern[alpha + i] != '1') binary = false;
        if (!binary) continue;
        BitVector c = BitVector::from_string(pattern.substr(alpha, m));

        std::size_t total = 0;
        std::vector<std::vector<std::size_t>> chosen(pruned.groups.size());
        bool ok = true;
        for (std::size_t g = 0; g < pruned.groups.size() && ok; ++g) {
            std::size_t gbest = kInf;
            for (const auto& cl : pruned.clusters_of_group(g)) {
                std::size_t cost = 0;
                for (std::size_t j : cl) cost += hamming(c, pruned.a.column(j));
                if (cost < gbest) {
                    gbest = cost;
                    chosen[g] = cl;
                }
            }
            total += gbest;
            if (total > pruned.d) ok = false;
        }
        if (ok) return ClusterSelectionWitness{std::move(chosen), c, total};
    }
    return std::nullopt;
}

} // namespace

std::optional<ClusterSelectionWitness>
solve_cluster_selection(const ClusterSelectionInstance& inst, RunControl* rc) {
    inst.validate();
    std::size_t p = inst.groups.size();
    if (p == 0) return ClusterSelectionWitness{{}, BitVector(inst.a.rows()), 0};

    std::vector<std::vector<std::vector<std::size_t>>> clusters(p);
    for (std::size_t g = 0; g < p; ++g) clusters[g] = inst.clusters_of_group(g);

    // Phase 1: means equal to a column of a.
    std::set<BitVector> tried;
    for (std::size_t j = 0; j < inst.a.cols(); ++j) {
        BitVector c = inst.a.column(j);
        if (!tried.insert(c).second) continue;
        std::size_t total = 0;
        std::vector<std::vector<std::size_t>> chosen(p);
        bool ok = true;
        for (std::size_t g = 0; g < p && ok; ++g) {
            std::size_t gbest = kInf;
            for (const auto& cl : clusters[g]) {
                std::size_t cost = 0;
                for (std::size_t t : cl) cost += hamming(c, inst.a.column(t));
                if (cost < gbest) {
                    gbest = cost;
                    chosen[g] = cl;
                }
            }
            total += gbest;
            if (total > inst.d) ok = false;
        }
        if (ok) return ClusterSelectionWitness{std::move(chosen), c, total};
    }

    // Phase 2: any remaining solution pays at least 1 per chosen column.
    if (p > inst.d) return std::nullopt;

    // Phase 3: cluster-size tuples, each reduced to Consensus Patterns.
    std::vector<std::size_t> lengths(p, 1);
    std::size_t tuple_count = 0;
    std::optional<ClusterSelectionWitness> found;
    auto tuples = [&](auto&& self, std::size_t g, std::size_t used) -> bool {
        if (g == p) {
            ++tuple_count;
            // Prune groups to clusters of the requested size.
            ClusterSelectionInstance pruned;
            pruned.a = inst.a;
            pruned.d = inst.d;
            std::vector<std::vector<std::size_t>> kept_groups;
            for (std::size_t gi = 0; gi < p; ++gi) {
                std::vector<std::size_t> cols;
                for (const auto& cl : clusters[gi])
                    if (cl.size() == lengths[gi])
                        cols.insert(cols.end(), cl.begin(), cl.end());
                if (cols.empty()) return false; // no cluster of this size
                kept_groups.push_back(std::move(cols));
            }
            // Restrict the matrix to the kept columns.
            std::vector<std::size_t> keep;
            for (const auto& g2 : kept_groups)
                keep.insert(keep.end(), g2.begin(), g2.end());
            std::sort(keep.begin(), keep.end());
            std::vector<std::size_t> local(inst.a.cols(), kInf);
            for (std::size_t i = 0; i < keep.size(); ++i) local[keep[i]] = i;
            pruned.a = inst.a.select_columns(keep);
            pruned.groups.clear();
            for (auto& g2 : kept_groups) {
                std::vector<std::size_t> lg;
                for (std::size_t j : g2) lg.push_back(local[j]);
                std::sort(lg.begin(), lg.end());
                pruned.groups.push_back(std::move(lg));
            }

            ConsensusInstance cp = build_consensus_instance(pruned, lengths);
            auto cw = solve_consensus_desk(cp, rc);
            if (!cw) return false;
            auto witness = recover_from_pattern(pruned, cw->pattern);
            if (!witness) return false;
            // Map chosen clusters back to original column indices.
            for (auto& cl : witness->chosen)
                for (auto& j : cl) j = keep[j];
            found = std::move(witness);
            return true;
        }
        for (std::size_t l = 1; used + l + (p - g - 1) <= inst.d; ++l) {
            lengths[g] = l;
            if (self(self, g + 1, used + l)) return true;
        }
        return false;
    };
    tuples(tuples, 0, 0);
    assert(double(tuple_count) <=
           std::pow(2.0, double(inst.d + p)) + 0.5);
    return found;
}

std::optional<Clustering> color_coding_means(const MeansInstance& inst,
                                             std::uint64_t seed, std::size_t trials,
                                             RunControl* rc) {
    const BinaryMatrix& a = inst.a;
    if (inst.r == 0) throw UsageError("cluster budget must be positive");
    IndexPartition initial = column_groups(a);
    std::size_t s = initial.size();

    if (s <= inst.r) {
        Clustering out;
        for (const auto& cl : initial.parts) {
            out.means.push_back(a.column(cl[0]));
            out.clusters.push_back(cl);
        }
        out.cost = 0;
        return out;
    }
    if (s > inst.r + inst.k) return std::nullopt;

    // Evaluate one coloring, given as the partition of the initial clusters
    // into same-color classes.
    auto try_coloring =
        [&](const std::vector<std::vector<std::size_t>>& classes) -> std::optional<Clustering> {
        tick(rc);
        std::size_t c = classes.size();

        // Families of disjoint parts (each a set of >= 2 color classes).
        std::vector<std::vector<std::size_t>> parts;
        std::optional<Clustering> result;

        auto evaluate = [&]() -> bool {
            tick(rc);
            std::size_t merged = 0;
            for (const auto& part : parts) merged += part.size();
            if (parts.empty()) return false;
            if (s - merged + parts.size() > inst.r) return false;

            std::size_t budget = inst.k;
            std::vector<std::vector<std::size_t>> composite_cols;
            std::vector<BitVector> composite_means;
            std::vector<char> cluster_used(s, 0);

            for (const auto& part : parts) {
                // Build the Cluster Selection instance on the part's columns.
                std::vector<std::size_t> cols;
                for (std::size_t cls : part)
                    for (std::size_t cl : classes[cls])
                        cols.insert(cols.end(), initial.parts[cl].begin(),
                                    initial.parts[cl].end());
                std::sort(cols.begin(), cols.end());
                std::vector<std::size_t> local(a.cols(), kInf);
                for (std::size_t i = 0; i < cols.size(); ++i) local[cols[i]] = i;

                ClusterSelectionInstance csi;
                csi.a = a.select_columns(cols);
                for (std::size_t cls : part) {
                    std::vector<std::size_t> grp;
                    for (std::size_t cl : classes[cls])
                        for (std::size_t j : initial.parts[cl]) grp.push_back(local[j]);
                    std::sort(grp.begin(), grp.end());
                    csi.groups.push_back(std::move(grp));
                }

                // Minimum d_i for this part, within the remaining budget.
                std::optional<ClusterSelectionWitness> w;
                std::size_t di = 0;
                for (; di <= budget; ++di) {
                    csi.d = di;
                    w = solve_cluster_selection(csi, rc);
                    if (w) break;
                }
                if (!w) return false;
                budget -= di;

                std::vector<std::size_t> merged_cols;
                for (const auto& cl : w->chosen)
                    for (std::size_t j : cl) merged_cols.push_back(cols[j]);
                std::sort(merged_cols.begin(), merged_cols.end());
                composite_cols.push_back(std::move(merged_cols));
                composite_means.push_back(w->mean);
            }

            // Chosen initial clusters become composite; everything else is
            // a simple cluster.
            Clustering out;
            std::vector<char> col_used(a.cols(), 0);
            for (std::size_t i = 0; i < composite_cols.size(); ++i) {
                for (std::size_t j : composite_cols[i]) col_used[j] = 1;
                out.clusters.push_back(composite_cols[i]);
                out.means.push_back(composite_means[i]);
            }
            for (const auto& cl : initial.parts) {
                if (col_used[cl[0]]) continue;
                out.clusters.push_back(cl);
                out.means.push_back(a.column(cl[0]));
            }
            if (out.clusters.size() > inst.r) return false;
            out.cost = clustering_cost(a, out);
            if (out.cost > inst.k) return false;
            result = std::move(out);
            return true;
        };

        // Enumerate families: the lowest unassigned class is either skipped
        // or grouped with a nonempty subset of the later classes.
        std::vector<char> taken(c, 0);
        auto families = [&](auto&& self, std::size_t first) -> bool {
            while (first < c && taken[first]) ++first;
            if (first == c) return evaluate();
            // Option 1: class `first` stays out of every composite part.
            taken[first] = 1;
            if (self(self, first + 1)) return true;
            taken[first] = 0;
            // Option 2: group it with a nonempty subset of later classes.
            std::vector<std::size_t> free;
            for (std::size_t i = first + 1; i < c; ++i)
                if (!taken[i]) free.push_back(i);
            for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << free.size());
                 ++mask) {
                std::vector<std::size_t> part{first};
                for (std::size_t i = 0; i < free.size(); ++i)
                    if ((mask >> i) & 1u) part.push_back(free[i]);
                taken[first] = 1;
                for (std::size_t i : part) taken[i] = 1;
                parts.push_back(part);
                if (self(self, first + 1)) return true;
                parts.pop_back();
                for (std::size_t i : part) taken[i] = 0;
            }
            return false;
        };
        families(families, 0);
        return result;
    };

    std::size_t colors = 2 * inst.k;
    if (s <= 8) {
        // Exhaustive mode: only the induced partition of the initial
        // clusters matters, so enumerate set partitions into <= 2k classes.
        std::optional<Clustering> found;
        std::vector<std::size_t> label(s, 0);
        auto walk = [&](auto&& self, std::size_t i, std::size_t used) -> bool {
            if (i == s) {
                std::vector<std::vector<std::size_t>> classes(used);
                for (std::size_t j = 0; j < s; ++j) classes[label[j]].push_back(j);
                if (auto res = try_coloring(classes)) {
                    found = std::move(res);
                    return true;
                }
                return false;
            }
            std::size_t cap = std::min(used + 1, std::max<std::size_t>(colors, 1));
            for (std::size_t l = 0; l < cap; ++l) {
                label[i] = l;
                if (self(self, i + 1, std::max(used, l + 1))) return true;
            }
            return false;
        };
        walk(walk, 0, 0);
        return found;
    }

    if (colors == 0) return std::nullopt; // k = 0 and s > r was decided above
    if (trials == 0)
        trials = std::size_t(std::ceil(std::exp(2.0 * double(inst.k))));
    std::mt19937_64 rng(seed);
    for (std::size_t trial = 0; trial < trials; ++trial) {
        std::vector<std::vector<std::size_t>> classes(colors);
        for (std::size_t i = 0; i < s; ++i) classes[rng() % colors].push_back(i);
        std::vector<std::vector<std::size_t>> nonempty;
        for (auto& cls : classes)
            if (!cls.empty()) nonempty.push_back(std::move(cls));
        if (auto res = try_coloring(nonempty)) return res;
    }
    return std::nullopt;
}

} // namespace bma
