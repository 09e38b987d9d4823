#include "bma/gf2.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "bma/errors.hpp"

namespace bma {

namespace {

constexpr std::size_t kInf = std::numeric_limits<std::size_t>::max() / 2;

// Incremental GF(2) representation solver: reduce(v) returns the mask of
// original vectors XOR-ing to v, or nullopt if v is outside the span.
class SpanSolver {
public:
    explicit SpanSolver(const std::vector<BitVector>& vectors) {
        for (std::size_t i = 0; i < vectors.size(); ++i) {
            BitVector v = vectors[i];
            std::uint32_t mask = std::uint32_t{1} << i;
            reduce_in_place(v, mask);
            if (!v.any())
                throw UsageError("span basis is linearly dependent");
            std::size_t pivot = 0;
            while (!v.get(pivot)) ++pivot;
            rows_.push_back({pivot, std::move(v), mask});
        }
    }

    std::optional<std::uint32_t> solve(BitVector v) const {
        std::uint32_t mask = 0;
        reduce_in_place(v, mask);
        if (v.any()) return std::nullopt;
        return mask;
    }

    bool contains(const BitVector& v) const { return solve(v).has_value(); }

private:
    struct Row {
        std::size_t pivot;
        BitVector vec;
        std::uint32_t mask;
    };
    std::vector<Row> rows_;

    void reduce_in_place(BitVector& v, std::uint32_t& mask) const {
        for (const Row& row : rows_) {
            if (v.get(row.pivot)) {
                v.xor_with(row.vec);
                mask ^= row.mask;
            }
        }
    }
};

std::vector<BitVector> subset_sums(const std::vector<BitVector>& vectors, std::size_t len) {
    std::vector<BitVector> sums;
    sums.reserve(std::size_t{1} << vectors.size());
    sums.emplace_back(len);
    for (const auto& v : vectors) {
        std::size_t count = sums.size();
        for (std::size_t i = 0; i < count; ++i) sums.push_back(sums[i] ^ v);
    }
    return sums;
}

std::size_t rank_cap(std::size_t r) { return r >= 40 ? kInf : (std::size_t{1} << r); }

} // namespace

BinaryMatrix Gf2Solution::implied(std::size_t rows) const {
    std::vector<BitVector> cols;
    cols.reserve(assignment.size());
    for (std::uint32_t mask : assignment) {
        BitVector col(rows);
        for (std::size_t i = 0; i < basis.size(); ++i)
            if ((mask >> i) & 1u) col.xor_with(basis[i]);
        cols.push_back(std::move(col));
    }
    return BinaryMatrix::from_columns(cols);
}

bool Gf2Solution::is_witness(const Gf2Instance& inst) const {
    if (basis.size() > inst.r) return false;
    if (assignment.size() != inst.a.cols()) return false;
    if (!basis.empty() &&
        gf2_rank(BinaryMatrix::from_columns(basis)) != basis.size())
        return false;
    BinaryMatrix b = implied(inst.a.rows());
    return gf2_rank(b) <= inst.r && hamming(inst.a, b) <= inst.k;
}

Gf2Solution solution_from_matrix(const BinaryMatrix& b) {
    Gf2Solution sol;
    auto pivots = find_full_rank_submatrix(b, gf2_rank(b) == 0 ? 0 : gf2_rank(b) - 1);
    // Pivot columns of the elimination form a column-space basis.
    std::vector<std::size_t> pivot_cols;
    if (pivots) pivot_cols = pivots->second;
    for (std::size_t j : pivot_cols) sol.basis.push_back(b.column(j));

    if (sol.basis.empty()) {
        sol.assignment.assign(b.cols(), 0);
        return sol;
    }
    SpanSolver solver(sol.basis);
    for (std::size_t j = 0; j < b.cols(); ++j) {
        auto mask = solver.solve(b.column(j));
        if (!mask) throw UsageError("matrix column outside its own pivot span");
        sol.assignment.push_back(*mask);
    }
    return sol;
}

Gf2Solution solution_between(const BinaryMatrix& a, const BinaryMatrix& b) {
    Gf2Solution sol = solution_from_matrix(b);
    sol.cost = hamming(a, b);
    return sol;
}

std::optional<Gf2Instance> preprocess_gf2(const Gf2Instance& inst) {
    std::size_t bound = rank_cap(inst.r) == kInf ? kInf : rank_cap(inst.r) + inst.k;
    if (distinct_column_count(inst.a) > bound) return std::nullopt;
    if (distinct_row_count(inst.a) > bound) return std::nullopt;
    return inst;
}

namespace {

std::optional<BinaryMatrix> branch_rec(BinaryMatrix a, std::size_t r, std::size_t k,
                                       RunControl* rc) {
    tick(rc);
    auto sub = find_full_rank_submatrix(a, r);
    if (!sub) return a; // rank <= r, nothing left to edit
    if (k == 0) return std::nullopt;
    assert(gf2_rank(a.submatrix(sub->first, sub->second)) == r + 1);
    // Any rank-<=r matrix differs from a inside this submatrix, so one of
    // its (r+1)^2 cells must flip.
    for (std::size_t i : sub->first) {
        for (std::size_t j : sub->second) {
            a.flip(i, j);
            if (auto res = branch_rec(a, r, k - 1, rc)) return res;
            a.flip(i, j);
        }
    }
    return std::nullopt;
}

} // namespace

std::optional<Gf2Solution> branch_gf2(const Gf2Instance& inst, RunControl* rc) {
    if (inst.r == 0) throw UsageError("rank budget must be positive");
    auto b = branch_rec(inst.a, inst.r, inst.k, rc);
    if (!b) return std::nullopt;
    Gf2Solution sol = solution_between(inst.a, *b);
    assert(sol.is_witness(inst));
    return sol;
}

Gf2Solution oracle_gf2_best(const BinaryMatrix& a, std::size_t r) {
    std::size_t m = a.rows(), n = a.cols();
    Gf2Solution best;
    best.assignment.assign(n, 0);
    best.cost = a.count_ones(); // B = 0 baseline
    if (n == 0 || m == 0) {
        best.cost = 0;
        return best;
    }

    // Candidate basis vectors: everything agreeing with a. A minimum-cost
    // solution drawn from agreeing vectors always exists.
    IndexPartition groups = row_groups(a);
    std::size_t t = groups.size();
    if (t > 20) throw ResourceLimitError("too many distinct rows for the GF(2) oracle");
    std::vector<BitVector> candidates;
    candidates.reserve(std::size_t{1} << t);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << t); ++mask) {
        BitVector v(m);
        for (std::size_t g = 0; g < t; ++g)
            if ((mask >> g) & 1u)
                for (std::size_t i : groups.parts[g]) v.set(i, true);
        candidates.push_back(std::move(v));
    }

    double work = 1;
    for (std::size_t i = 0; i < r; ++i) work *= double(candidates.size());
    if (work > 4e9) throw ResourceLimitError("GF(2) oracle basis space too large");

    // Distinct columns with multiplicities; the cost is additive over them.
    std::map<BitVector, std::size_t> col_mult;
    for (std::size_t j = 0; j < n; ++j) ++col_mult[a.column(j)];
    std::vector<std::pair<BitVector, std::size_t>> cols(col_mult.begin(), col_mult.end());

    std::vector<BitVector> chosen;
    auto evaluate = [&]() {
        std::vector<BitVector> sums = subset_sums(chosen, m);
        std::size_t cost = 0;
        for (const auto& [col, mult] : cols) {
            std::size_t d = kInf;
            for (const auto& sum : sums) d = std::min(d, hamming(sum, col));
            cost += d * mult;
            if (cost >= best.cost) return;
        }
        // Strictly better: rebuild the per-column assignment.
        best.basis = chosen;
        best.cost = cost;
        best.assignment.clear();
        for (std::size_t j = 0; j < n; ++j) {
            BitVector col = a.column(j);
            std::size_t arg = 0, d = kInf;
            for (std::size_t s = 0; s < sums.size(); ++s) {
                std::size_t ds = hamming(sums[s], col);
                if (ds < d) {
                    d = ds;
                    arg = s;
                }
            }
            best.assignment.push_back(std::uint32_t(arg));
        }
    };

    auto walk = [&](auto&& self, std::size_t from) -> void {
        if (best.cost == 0) return;
        if (chosen.size() == r) return;
        for (std::size_t i = from; i < candidates.size(); ++i) {
            if (!candidates[i].any()) continue;
            // Keep the chosen set linearly independent.
            bool independent = true;
            if (!chosen.empty()) {
                SpanSolver solver(chosen);
                independent = !solver.contains(candidates[i]);
            }
            if (!independent) continue;
            chosen.push_back(candidates[i]);
            evaluate();
            self(self, i + 1);
            chosen.pop_back();
        }
    };
    walk(walk, 0);
    return best;
}

std::optional<Gf2Solution> oracle_gf2(const Gf2Instance& inst) {
    if (inst.r == 0) throw UsageError("rank budget must be positive");
    Gf2Solution best = oracle_gf2_best(inst.a, inst.r);
    if (best.cost <= inst.k) return best;
    return std::nullopt;
}

namespace {

// Extend-Solution recursion state. S stays linearly independent; every
// vector of S agrees with the matrix.
struct Gf2Search {
    const BinaryMatrix& a;
    std::vector<BitVector> cols;
    std::size_t r;
    RunControl* rc;

    std::optional<std::vector<BitVector>> run(std::vector<std::size_t> idx,
                                              std::vector<BitVector> s,
                                              std::size_t d) {
        tick(rc);
        std::vector<BitVector> sums = subset_sums(s, a.rows());
        auto min_to = [&](std::size_t col) {
            std::size_t b = kInf;
            for (const auto& sum : sums) b = std::min(b, hamming(sum, cols[col]));
            return b;
        };

        // Step 1: spans of S may already cover the open columns.
        std::size_t covered = 0;
        for (std::size_t i : idx) {
            covered += min_to(i);
            if (covered > d) break;
        }
        if (covered <= d) return s;

        // Step 2.
        if (s.size() == r) return std::nullopt;

        // Step 3.
        for (std::size_t h = 0; h <= d; ++h) {
            if (h > 0) {
                std::vector<std::size_t> keep;
                for (std::size_t i : idx) {
                    std::size_t l = min_to(i);
                    if (l <= h - 1) {
                        if (l > d) return std::nullopt;
                        d -= l;
                    } else {
                        keep.push_back(i);
                    }
                }
                idx.swap(keep);
            }

            double log_arg = std::log2(double(rank_cap(r) == kInf
                                                   ? std::numeric_limits<double>::max()
                                                   : rank_cap(r) + d));
            if (double(idx.size()) * double(idx.size()) <= double(d) * log_arg)
                return decide_by_tuples(idx, s, d);

            if (!idx.empty() && h * idx.size() <= d) {
                std::set<BitVector> cands;
                std::set<BitVector> seen;
                for (std::size_t i : idx) {
                    if (!seen.insert(cols[i]).second) continue;
                    for (auto& v : enumerate_agreeing_within(a, cols[i], h))
                        if (hamming(v, cols[i]) == h) cands.insert(std::move(v));
                }
                for (const auto& v : cands) {
                    bool independent = s.empty() || !SpanSolver(s).contains(v);
                    if (!independent || !v.any()) continue;
                    std::vector<BitVector> next = s;
                    next.push_back(v);
                    if (auto res = run(idx, std::move(next), d)) return res;
                }
            }
        }
        return std::nullopt;
    }

    // Step 3 (ii): decide the state exactly by enumerating tuples of
    // (x, y) vectors, x over the S-coordinates, y over the open columns.
    // Accepting builds a basis for S augmented by the implied columns.
    std::optional<std::vector<BitVector>> decide_by_tuples(
        const std::vector<std::size_t>& idx, const std::vector<BitVector>& s,
        std::size_t d) {
        std::size_t p = s.size(), q = idx.size(), m = a.rows();

        // Row masks of S (p bits) and of the open columns (q bits).
        std::vector<std::uint32_t> s_rows(m, 0), a_rows(m, 0);
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < p; ++j)
                if (s[j].get(i)) s_rows[i] |= std::uint32_t{1} << j;
            for (std::size_t j = 0; j < q; ++j)
                if (a.get(i, idx[j])) a_rows[i] |= std::uint32_t{1} << j;
        }

        std::size_t codes = std::size_t{1} << (p + q);
        std::vector<std::uint32_t> tuple; // pair codes, strictly increasing
        std::vector<std::uint32_t> best_rows;

        auto evaluate = [&]() -> bool {
            tick(rc);
            std::size_t count = tuple.size();
            std::size_t total = 0;
            std::vector<std::uint32_t> row_choice(m, 0);
            for (std::size_t i = 0; i < m && total <= d; ++i) {
                std::size_t bestd = kInf;
                std::uint32_t besty = 0;
                for (std::uint32_t sub = 0; sub < (std::uint32_t{1} << count); ++sub) {
                    std::uint32_t xsum = 0, ysum = 0;
                    for (std::size_t t = 0; t < count; ++t)
                        if ((sub >> t) & 1u) {
                            xsum ^= tuple[t] >> q;
                            ysum ^= tuple[t] & ((std::uint32_t{1} << q) - 1);
                        }
                    if (xsum != s_rows[i]) continue;
                    std::size_t dist = std::popcount(ysum ^ a_rows[i]);
                    if (dist < bestd) {
                        bestd = dist;
                        besty = ysum;
                    }
                }
                if (bestd == kInf) return false;
                total += bestd;
                row_choice[i] = besty;
            }
            if (total > d) return false;
            best_rows = std::move(row_choice);
            return true;
        };

        auto walk = [&](auto&& self, std::size_t from) -> bool {
            if (evaluate()) return true;
            if (tuple.size() == r) return false;
            for (std::size_t c = from; c < codes; ++c) {
                tuple.push_back(std::uint32_t(c));
                if (self(self, c + 1)) return true;
                tuple.pop_back();
            }
            return false;
        };
        if (!walk(walk, 0)) return std::nullopt;

        // Assemble (S | implied open columns) and extract an independent
        // basis of its column space.
        std::vector<BitVector> all = s;
        for (std::size_t j = 0; j < q; ++j) {
            BitVector col(m);
            for (std::size_t i = 0; i < m; ++i)
                if ((best_rows[i] >> j) & 1u) col.set(i, true);
            all.push_back(std::move(col));
        }
        BinaryMatrix stacked = BinaryMatrix::from_columns(all);
        Gf2Solution basis_only = solution_from_matrix(stacked);
        assert(basis_only.basis.size() <= r);
        return basis_only.basis;
    }
};

} // namespace

std::optional<Gf2Solution> extend_solution_gf2(const Gf2Instance& inst, RunControl* rc) {
    if (inst.r == 0) throw UsageError("rank budget must be positive");
    auto pre = preprocess_gf2(inst);
    if (!pre) return std::nullopt;

    Gf2Search search{inst.a, inst.a.columns(), inst.r, rc};
    std::vector<std::size_t> all(inst.a.cols());
    for (std::size_t j = 0; j < all.size(); ++j) all[j] = j;
    auto basis = search.run(std::move(all), {}, inst.k);
    if (!basis) return std::nullopt;

    // Assign every column its best subset sum over the accepted basis.
    Gf2Solution sol;
    sol.basis = *basis;
    std::vector<BitVector> sums = subset_sums(sol.basis, inst.a.rows());
    for (std::size_t j = 0; j < inst.a.cols(); ++j) {
        BitVector col = inst.a.column(j);
        std::size_t arg = 0, d = kInf;
        for (std::size_t sidx = 0; sidx < sums.size(); ++sidx) {
            std::size_t ds = hamming(sums[sidx], col);
            if (ds < d) {
                d = ds;
                arg = sidx;
            }
        }
        sol.assignment.push_back(std::uint32_t(arg));
        sol.cost += d;
    }
    assert(sol.cost <= inst.k);
    assert(sol.is_witness(inst));
    return sol;
}

} // namespace bma
