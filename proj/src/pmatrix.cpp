#include "bma/pmatrix.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include "bma/errors.hpp"

namespace bma {

namespace {
constexpr std::size_t kInf = std::numeric_limits<std::size_t>::max() / 2;

double factorial(std::size_t n) {
    double f = 1;
    for (std::size_t i = 2; i <= n; ++i) f *= double(i);
    return f;
}
} // namespace

bool PMatrixWitness::is_witness(const BinaryMatrix& a, const BinaryMatrix& pattern,
                                std::size_t k) const {
    if (row_parts.parts.size() != pattern.rows()) return false;
    if (col_parts.parts.size() != pattern.cols()) return false;
    if (row_parts.universe != a.rows() || col_parts.universe != a.cols()) return false;
    if (!row_parts.is_valid() || !col_parts.is_valid()) return false;
    if (b.rows() != a.rows() || b.cols() != a.cols()) return false;
    for (std::size_t i = 0; i < pattern.rows(); ++i)
        for (std::size_t j = 0; j < pattern.cols(); ++j)
            for (std::size_t s : row_parts.parts[i])
                for (std::size_t t : col_parts.parts[j])
                    if (b.get(s, t) != pattern.get(i, j)) return false;
    return hamming(a, b) <= k;
}

std::optional<PMatrixWitness> is_p_matrix(const BinaryMatrix& a,
                                          const BinaryMatrix& pattern) {
    if (pattern.rows() == 0 || pattern.cols() == 0)
        throw UsageError("pattern must be nonempty");
    auto [arows, acols] = block_partition(a);
    auto [prows, pcols] = block_partition(pattern);
    std::size_t s = arows.size(), t = acols.size();
    if (s != prows.size() || t != pcols.size()) return std::nullopt;
    if (s == 0 || t == 0) return std::nullopt;
    if (factorial(s) * factorial(t) > 1e8)
        throw ResourceLimitError("pattern block permutation space too large");

    auto a_val = [&](std::size_t i, std::size_t j) {
        return a.get(arows.parts[i][0], acols.parts[j][0]);
    };
    auto p_val = [&](std::size_t i, std::size_t j) {
        return pattern.get(prows.parts[i][0], pcols.parts[j][0]);
    };

    std::vector<std::size_t> alpha(s), beta(t);
    std::iota(alpha.begin(), alpha.end(), 0);
    do {
        bool rows_fit = true;
        for (std::size_t i = 0; i < s; ++i)
            if (arows.parts[i].size() < prows.parts[alpha[i]].size()) {
                rows_fit = false;
                break;
            }
        if (!rows_fit) continue;
        std::iota(beta.begin(), beta.end(), 0);
        do {
            bool ok = true;
            for (std::size_t j = 0; j < t && ok; ++j) {
                if (acols.parts[j].size() < pcols.parts[beta[j]].size()) {
                    ok = false;
                    break;
                }
                for (std::size_t i = 0; i < s; ++i)
                    if (a_val(i, j) != p_val(alpha[i], beta[j])) {
                        ok = false;
                        break;
                    }
            }
            if (!ok) continue;

            // Split each block of a into one part per matching pattern
            // row/column; sizes permit it by the checks above.
            PMatrixWitness w;
            w.row_parts.universe = a.rows();
            w.row_parts.parts.assign(pattern.rows(), {});
            for (std::size_t i = 0; i < s; ++i) {
                const auto& rows_of_block = arows.parts[i];
                const auto& targets = prows.parts[alpha[i]];
                std::size_t pos = 0;
                for (std::size_t x = 0; x < targets.size(); ++x) {
                    std::size_t take = (x + 1 == targets.size())
                                           ? rows_of_block.size() - pos
                                           : 1;
                    for (std::size_t c = 0; c < take; ++c)
                        w.row_parts.parts[targets[x]].push_back(rows_of_block[pos++]);
                }
            }
            w.col_parts.universe = a.cols();
            w.col_parts.parts.assign(pattern.cols(), {});
            for (std::size_t j = 0; j < t; ++j) {
                const auto& cols_of_block = acols.parts[j];
                const auto& targets = pcols.parts[beta[j]];
                std::size_t pos = 0;
                for (std::size_t y = 0; y < targets.size(); ++y) {
                    std::size_t take = (y + 1 == targets.size())
                                           ? cols_of_block.size() - pos
                                           : 1;
                    for (std::size_t c = 0; c < take; ++c)
                        w.col_parts.parts[targets[y]].push_back(cols_of_block[pos++]);
                }
            }
            for (auto& part : w.row_parts.parts) std::sort(part.begin(), part.end());
            for (auto& part : w.col_parts.parts) std::sort(part.begin(), part.end());
            w.b = a;
            w.cost = 0;
            return w;
        } while (std::next_permutation(beta.begin(), beta.end()));
    } while (std::next_permutation(alpha.begin(), alpha.end()));
    return std::nullopt;
}

namespace {

std::optional<BinaryMatrix> branch_rec(BinaryMatrix a, const BinaryMatrix& pattern,
                                       std::size_t k, RunControl* rc) {
    tick(rc);
    if (is_p_matrix(a, pattern)) return a;
    if (k == 0) return std::nullopt;
    auto [arows, acols] = block_partition(a);
    // A solution within budget k keeps at most p+k distinct rows and q+k
    // distinct columns, so an edited matrix beyond those bounds is dead.
    if (arows.size() > pattern.rows() + k) return std::nullopt;
    if (acols.size() > pattern.cols() + k) return std::nullopt;
    // One representative flip per block pair; flips within a block produce
    // isomorphic matrices. Restricting to the first p+1 and q+1 blocks is
    // not sound: a solution may agree with a on all of them while differing
    // in a later block, so every block pair is branched.
    for (const auto& rows : arows.parts) {
        for (const auto& cols : acols.parts) {
            a.flip(rows[0], cols[0]);
            if (auto res = branch_rec(a, pattern, k - 1, rc)) return res;
            a.flip(rows[0], cols[0]);
        }
    }
    return std::nullopt;
}

} // namespace

std::optional<PMatrixWitness> branch_pmatrix(const BinaryMatrix& a,
                                             const BinaryMatrix& pattern,
                                             std::size_t k, RunControl* rc) {
    if (pattern.rows() > a.rows() || pattern.cols() > a.cols()) return std::nullopt;
    auto b = branch_rec(a, pattern, k, rc);
    if (!b) return std::nullopt;
    auto w = is_p_matrix(*b, pattern);
    assert(w.has_value());
    w->cost = hamming(a, *b);
    assert(w->cost <= k);
    return w;
}

namespace {

// Multisets of row classes of total size `want`, multiplicity bounded by
// the class size; each multiset is materialized as concrete indices.
void for_each_representative_set(const IndexPartition& classes, std::size_t want,
                                 const std::function<bool(const std::vector<std::size_t>&)>& visit) {
    std::vector<std::size_t> take(classes.size(), 0);
    bool stop = false;
    auto walk = [&](auto&& self, std::size_t cls, std::size_t left) -> void {
        if (stop) return;
        if (cls == classes.size()) {
            if (left) return;
            std::vector<std::size_t> idx;
            for (std::size_t c = 0; c < classes.size(); ++c)
                for (std::size_t i = 0; i < take[c]; ++i)
                    idx.push_back(classes.parts[c][i]);
            std::sort(idx.begin(), idx.end());
            stop = visit(idx);
            return;
        }
        std::size_t cap = std::min(left, classes.parts[cls].size());
        for (std::size_t c = 0; c <= cap && !stop; ++c) {
            take[cls] = c;
            self(self, cls + 1, left - c);
        }
        take[cls] = 0;
    };
    walk(walk, 0, want);
}

} // namespace

std::optional<PMatrixWitness> solve_extendable(const ExtendablePInstance& ep,
                                               RunControl* rc) {
    const BinaryMatrix& a = ep.a;
    const BinaryMatrix& pattern = ep.pattern;
    std::size_t m = a.rows(), n = a.cols();
    std::size_t p = pattern.rows(), q = pattern.cols();

    if (ep.x.size() + ep.y.size() != q)
        throw UsageError("|X| + |Y| must equal the pattern column count");
    {
        std::vector<char> seen(n, 0);
        for (const auto* set : {&ep.x, &ep.y, &ep.z})
            for (std::size_t j : *set) {
                if (j >= n || seen[j])
                    throw UsageError("X, Y, Z must be disjoint column sets");
                seen[j] = 1;
            }
        for (char c : seen)
            if (!c) throw UsageError("X, Y, Z must cover every column");
    }

    if (m < p || n < q) return std::nullopt;
    if (distinct_row_count(a) > p + ep.k || distinct_column_count(a) > q + ep.k)
        return std::nullopt;

    std::size_t free_cols = ep.y.size() + ep.z.size();
    if (free_cols * p > 24)
        throw ResourceLimitError("extendable fill space too large");

    std::vector<std::size_t> free_idx = ep.y;
    free_idx.insert(free_idx.end(), ep.z.begin(), ep.z.end());
    std::sort(free_idx.begin(), free_idx.end());

    std::vector<std::size_t> xy = ep.x;
    xy.insert(xy.end(), ep.y.begin(), ep.y.end());
    std::sort(xy.begin(), xy.end());

    std::vector<BitVector> arow(m);
    for (std::size_t i = 0; i < m; ++i) arow[i] = a.row(i);

    IndexPartition rclasses = row_groups(a);
    std::optional<PMatrixWitness> found;

    for_each_representative_set(rclasses, p, [&](const std::vector<std::size_t>& rep) {
        tick(rc);
        // Candidate top rows: X entries pinned to a, the rest enumerated.
        std::vector<BitVector> brow(p);
        std::uint64_t fills = std::uint64_t{1} << (free_cols * p);
        for (std::uint64_t code = 0; code < fills; ++code) {
            tick(rc);
            for (std::size_t i = 0; i < p; ++i) {
                brow[i] = arow[rep[i]];
                for (std::size_t f = 0; f < free_cols; ++f) {
                    bool bit = (code >> (i * free_cols + f)) & 1u;
                    brow[i].set(free_idx[f], bit);
                }
            }
            BinaryMatrix top = BinaryMatrix::from_row_vectors(brow);
            if (!is_p_matrix(top, pattern)) continue;
            if (!is_p_matrix(top.select_columns(xy), pattern)) continue;

            // Extend by copying a top row into every remaining row; a copy
            // is admissible only if it matches the row on the X-columns.
            std::size_t total = 0;
            for (std::size_t i = 0; i < p; ++i) total += hamming(brow[i], arow[rep[i]]);
            std::vector<std::size_t> choice(m, kInf);
            bool feasible = total <= ep.k;
            for (std::size_t i = 0; i < m && feasible; ++i) {
                if (std::find(rep.begin(), rep.end(), i) != rep.end()) continue;
                std::size_t best = kInf, arg = kInf;
                for (std::size_t t = 0; t < p; ++t) {
                    bool x_match = true;
                    for (std::size_t j : ep.x)
                        if (brow[t].get(j) != a.get(i, j)) {
                            x_match = false;
                            break;
                        }
                    if (!x_match) continue;
                    std::size_t d = hamming(brow[t], arow[i]);
                    if (d < best) {
                        best = d;
                        arg = t;
                    }
                }
                if (arg == kInf) {
                    feasible = false;
                    break;
                }
                choice[i] = arg;
                total += best;
                if (total > ep.k) feasible = false;
            }
            if (!feasible) continue;

            std::vector<BitVector> full(m);
            for (std::size_t i = 0; i < p; ++i) full[rep[i]] = brow[i];
            for (std::size_t i = 0; i < m; ++i)
                if (choice[i] != kInf) full[i] = brow[choice[i]];
            BinaryMatrix b = BinaryMatrix::from_row_vectors(full);
            auto w = is_p_matrix(b, pattern);
            assert(w.has_value());
            w->cost = hamming(a, b);
            assert(w->cost <= ep.k);
            found = std::move(*w);
            return true;
        }
        return false;
    });
    return found;
}

namespace {

// Column assignments produced by the Extend-P-Solution recursion: for each
// column of the working universe, its column in the solution matrix.
using ColAssign = std::vector<std::pair<std::size_t, BitVector>>;

struct ExtendPSearch {
    const BinaryMatrix& pattern;
    RunControl* rc;

    std::optional<ColAssign> run(const BinaryMatrix& cur, std::vector<std::size_t> x,
                                 std::vector<std::size_t> y, std::vector<std::size_t> z,
                                 std::size_t k) {
        tick(rc);
        std::size_t m = cur.rows();

        if (y.empty()) {
            if (!is_p_matrix(cur.select_columns(x), pattern)) return std::nullopt;
            ColAssign out;
            for (std::size_t j : x) out.emplace_back(j, cur.column(j));
            if (z.empty()) return out;
            std::size_t total = 0;
            for (std::size_t i : z) {
                std::size_t best = kInf, arg = 0;
                for (std::size_t j : x) {
                    std::size_t d = hamming(cur.column(i), cur.column(j));
                    if (d < best) {
                        best = d;
                        arg = j;
                    }
                }
                total += best;
                if (total > k) return std::nullopt;
                out.emplace_back(i, cur.column(arg));
            }
            return out;
        }

        ColAssign removed;
        for (std::size_t h = 0; h <= k; ++h) {
            // (i) Z-columns within h of an X-column join that column.
            if (!x.empty()) {
                std::vector<std::size_t> keep;
                for (std::size_t i : z) {
                    std::size_t best = kInf, arg = 0;
                    for (std::size_t j : x) {
                        std::size_t d = hamming(cur.column(i), cur.column(j));
                        if (d < best) {
                            best = d;
                            arg = j;
                        }
                    }
                    if (best <= h) {
                        if (best > k) return std::nullopt;
                        k -= best;
                        removed.emplace_back(i, cur.column(arg));
                    } else {
                        keep.push_back(i);
                    }
                }
                z.swap(keep);
            }

            // (ii) Few undecided columns: solve the extendable instance
            // exactly. Terminal for this call.
            double yz = double(y.size() + z.size());
            if (yz * yz <= double(k) * std::log2(double(pattern.rows() + k))) {
                std::vector<std::size_t> universe = x;
                universe.insert(universe.end(), y.begin(), y.end());
                universe.insert(universe.end(), z.begin(), z.end());
                std::sort(universe.begin(), universe.end());
                std::vector<std::size_t> map_back = universe;
                auto local = [&](const std::vector<std::size_t>& src) {
                    std::vector<std::size_t> out;
                    for (std::size_t j : src)
                        out.push_back(std::size_t(
                            std::lower_bound(universe.begin(), universe.end(), j) -
                            universe.begin()));
                    return out;
                };
                ExtendablePInstance ep{cur.select_columns(universe), pattern,
                                       local(x), local(y), local(z), k};
                auto w = solve_extendable(ep, rc);
                if (!w) return std::nullopt;
                ColAssign out = removed;
                for (std::size_t j = 0; j < universe.size(); ++j)
                    out.emplace_back(map_back[j], w->b.column(j));
                return out;
            }

            // (iii) Move one Y-column into X after editing it by exactly h.
            if (!y.empty() && h * (y.size() + z.size()) <= k) {
                for (std::size_t yi = 0; yi < y.size(); ++yi) {
                    std::size_t i = y[yi];
                    std::vector<std::size_t> y2 = y;
                    y2.erase(y2.begin() + yi);
                    std::vector<std::size_t> x2 = x;
                    x2.push_back(i);
                    std::sort(x2.begin(), x2.end());

                    // All vectors at distance exactly h from column i.
                    std::vector<std::size_t> flip_rows(h);
                    std::iota(flip_rows.begin(), flip_rows.end(), 0);
                    auto try_edit = [&]() -> std::optional<ColAssign> {
                        BinaryMatrix next = cur;
                        for (std::size_t fr : flip_rows) next.flip(fr, i);
                        return run(next, x2, y2, z, k - h);
                    };
                    if (h == 0) {
                        if (auto res = run(cur, x2, y2, z, k)) {
                            res->insert(res->end(), removed.begin(), removed.end());
                            return res;
                        }
                        continue;
                    }
                    if (h > m) continue;
                    // Lexicographic combinations of h row positions.
                    while (true) {
                        if (auto res = try_edit()) {
                            res->insert(res->end(), removed.begin(), removed.end());
                            return res;
                        }
                        std::size_t pos = h;
                        while (pos > 0 && flip_rows[pos - 1] == m - (h - pos) - 1) --pos;
                        if (pos == 0) break;
                        ++flip_rows[pos - 1];
                        for (std::size_t t = pos; t < h; ++t)
                            flip_rows[t] = flip_rows[t - 1] + 1;
                    }
                }
            }
        }
        return std::nullopt;
    }
};

} // namespace

std::optional<PMatrixWitness> extend_p_solution(const BinaryMatrix& a,
                                                const BinaryMatrix& pattern,
                                                std::size_t k, RunControl* rc) {
    std::size_t p = pattern.rows(), q = pattern.cols();
    if (p == 0 || q == 0) throw UsageError("pattern must be nonempty");
    if (p > a.rows() || q > a.cols()) return std::nullopt;
    if (distinct_row_count(a) > p + k || distinct_column_count(a) > q + k)
        return std::nullopt;

    // Cap duplicate-row multiplicity at p+k; a witness lifts back by copying
    // an untouched surviving duplicate.
    IndexPartition rclasses = row_groups(a);
    std::vector<std::size_t> kept_rows;
    for (const auto& cls : rclasses.parts)
        for (std::size_t i = 0; i < std::min(cls.size(), p + k); ++i)
            kept_rows.push_back(cls[i]);
    std::sort(kept_rows.begin(), kept_rows.end());
    BinaryMatrix red = a.select_rows(kept_rows);
    std::size_t n = red.cols();

    ExtendPSearch search{pattern, rc};
    IndexPartition cclasses = column_groups(red);
    std::optional<BinaryMatrix> solution;

    for_each_representative_set(cclasses, q, [&](const std::vector<std::size_t>& j_set) {
        std::vector<std::size_t> rest;
        for (std::size_t j = 0, t = 0; j < n; ++j) {
            if (t < j_set.size() && j_set[t] == j) {
                ++t;
                continue;
            }
            rest.push_back(j);
        }
        auto assign = search.run(red, {}, j_set, rest, k);
        if (!assign) return false;
        std::vector<BitVector> cols(n);
        for (auto& [j, col] : *assign) cols[j] = std::move(col);
        solution = BinaryMatrix::from_columns(cols);
        return true;
    });
    if (!solution) return std::nullopt;

    // Lift trimmed duplicate rows: copy the solution row of an untouched
    // surviving duplicate.
    std::vector<char> kept_mark(a.rows(), 0);
    for (std::size_t i : kept_rows) kept_mark[i] = 1;
    std::vector<std::size_t> red_pos(a.rows(), kInf);
    for (std::size_t i = 0; i < kept_rows.size(); ++i) red_pos[kept_rows[i]] = i;

    std::vector<BitVector> full_rows(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        if (kept_mark[i]) full_rows[i] = solution->row(red_pos[i]);
    for (const auto& cls : rclasses.parts) {
        std::size_t untouched = kInf;
        for (std::size_t i : cls)
            if (kept_mark[i] && solution->row(red_pos[i]) == red.row(red_pos[i])) {
                untouched = i;
                break;
            }
        for (std::size_t i : cls) {
            if (kept_mark[i]) continue;
            assert(untouched != kInf);
            full_rows[i] = full_rows[untouched];
        }
    }
    BinaryMatrix b = BinaryMatrix::from_row_vectors(full_rows);

    auto w = is_p_matrix(b, pattern);
    assert(w.has_value());
    w->cost = hamming(a, b);
    assert(w->cost <= k);
    return w;
}

std::optional<PMatrixWitness> oracle_pmatrix_best(const BinaryMatrix& a,
                                                  const BinaryMatrix& pattern) {
    std::size_t m = a.rows(), n = a.cols();
    std::size_t p = pattern.rows(), q = pattern.cols();
    if (p == 0 || q == 0) throw UsageError("pattern must be nonempty");
    if (p > m || q > n) return std::nullopt;

    double labelings = std::pow(double(p), double(m));
    if (labelings * double(n) * double(q) * double(std::size_t{1} << q) > 2e8)
        throw ResourceLimitError("P-matrix oracle labeling space too large");

    std::vector<std::size_t> row_label(m, 0);
    std::size_t best_cost = kInf;
    std::vector<std::size_t> best_rows, best_cols;

    // Per fixed row labeling, columns are assigned by a DP over the set of
    // pattern columns already used, which enforces surjectivity.
    std::vector<std::size_t> col_cost(n * q);
    auto assign_columns = [&]() {
        for (std::size_t t = 0; t < n; ++t)
            for (std::size_t j = 0; j < q; ++j) {
                std::size_t c = 0;
                for (std::size_t s = 0; s < m; ++s)
                    if (a.get(s, t) != pattern.get(row_label[s], j)) ++c;
                col_cost[t * q + j] = c;
            }
        std::size_t full = (std::size_t{1} << q) - 1;
        std::vector<std::vector<std::size_t>> dp(n + 1,
            std::vector<std::size_t>(full + 1, kInf));
        std::vector<std::vector<std::size_t>> from(n,
            std::vector<std::size_t>(full + 1, 0));
        dp[0][0] = 0;
        for (std::size_t t = 0; t < n; ++t)
            for (std::size_t mask = 0; mask <= full; ++mask) {
                if (dp[t][mask] == kInf) continue;
                for (std::size_t j = 0; j < q; ++j) {
                    std::size_t nmask = mask | (std::size_t{1} << j);
                    std::size_t cost = dp[t][mask] + col_cost[t * q + j];
                    if (cost < dp[t + 1][nmask]) {
                        dp[t + 1][nmask] = cost;
                        from[t][nmask] = j | (mask << 8);
                    }
                }
            }
        if (dp[n][full] >= best_cost) return;
        best_cost = dp[n][full];
        best_rows = row_label;
        best_cols.assign(n, 0);
        std::size_t mask = full;
        for (std::size_t t = n; t-- > 0;) {
            std::size_t enc = from[t][mask];
            best_cols[t] = enc & 0xff;
            mask = enc >> 8;
        }
    };

    // Row labelings, pruned when surjectivity is already unreachable.
    auto walk = [&](auto&& self, std::size_t i, std::size_t used_mask,
                    std::size_t used_count) -> void {
        if (i == m) {
            if (used_count == p) assign_columns();
            return;
        }
        if (used_count + (m - i) < p) return;
        for (std::size_t l = 0; l < p; ++l) {
            row_label[i] = l;
            bool is_new = !((used_mask >> l) & 1u);
            self(self, i + 1, used_mask | (std::size_t{1} << l),
                 used_count + (is_new ? 1 : 0));
        }
    };
    walk(walk, 0, 0, 0);

    if (best_cost == kInf) return std::nullopt;

    PMatrixWitness w;
    w.row_parts.universe = m;
    w.row_parts.parts.assign(p, {});
    for (std::size_t i = 0; i < m; ++i) w.row_parts.parts[best_rows[i]].push_back(i);
    w.col_parts.universe = n;
    w.col_parts.parts.assign(q, {});
    for (std::size_t t = 0; t < n; ++t) w.col_parts.parts[best_cols[t]].push_back(t);
    w.b = BinaryMatrix(m, n);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t t = 0; t < n; ++t)
            if (pattern.get(best_rows[i], best_cols[t])) w.b.set(i, t, true);
    w.cost = best_cost;
    return w;
}

std::optional<PMatrixWitness> oracle_pmatrix(const BinaryMatrix& a,
                                             const BinaryMatrix& pattern,
                                             std::size_t k) {
    auto best = oracle_pmatrix_best(a, pattern);
    if (!best || best->cost > k) return std::nullopt;
    return best;
}

} // namespace bma
