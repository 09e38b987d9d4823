#include "bma/boolean.hpp"

#include <algorithm>
#include <cassert>
#include <limits>
#include <map>
#include <mutex>
#include <set>
#include <numeric>

#include "bma/errors.hpp"
#include "bma/pmatrix.hpp"

namespace bma {

namespace {
constexpr std::size_t kInf = std::numeric_limits<std::size_t>::max() / 2;

BinaryMatrix matrix_from_code(std::size_t m, std::size_t n, std::uint64_t code) {
    BinaryMatrix a(m, n);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if ((code >> (i * n + j)) & 1u) a.set(i, j, true);
    return a;
}

std::uint64_t code_of(const BinaryMatrix& a) {
    std::uint64_t code = 0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (a.get(i, j)) code |= std::uint64_t{1} << (i * a.cols() + j);
    return code;
}

} // namespace

BinaryMatrix BoolSolution::implied() const { return boolean_product(u, v); }

bool BoolSolution::is_witness(const BinaryMatrix& a, std::size_t r, std::size_t k) const {
    if (u.cols() != v.rows() || u.cols() > r) return false;
    if (u.rows() != a.rows() || v.cols() != a.cols()) return false;
    return hamming(a, implied()) <= k;
}

BinaryMatrix pattern_canonical_form(const BinaryMatrix& p) {
    std::size_t m = p.rows(), n = p.cols();
    if (m > 8 || n > 8)
        throw ResourceLimitError("canonical form supported up to 8x8 patterns");
    std::vector<std::size_t> rows(m);
    std::iota(rows.begin(), rows.end(), 0);
    std::optional<BinaryMatrix> best;
    do {
        // Sorting the columns removes the column permutation, so minimizing
        // over row permutations alone yields a canonical representative.
        std::vector<BitVector> cols;
        for (std::size_t j = 0; j < n; ++j) {
            BitVector c(m);
            for (std::size_t i = 0; i < m; ++i)
                if (p.get(rows[i], j)) c.set(i, true);
            cols.push_back(std::move(c));
        }
        std::sort(cols.begin(), cols.end());
        BinaryMatrix cand = BinaryMatrix::from_columns(cols);
        if (!best || code_of(cand) < code_of(*best)) best = std::move(cand);
    } while (std::next_permutation(rows.begin(), rows.end()));
    return *best;
}

std::vector<BoolPattern> enumerate_patterns(std::size_t r) {
    if (r == 0 || r > 4) throw UsageError("rank budget must be between 1 and 4");
    if (r > 2)
        throw ResourceLimitError(
            "pattern enumeration beyond r=2 exceeds the factor-space guard");

    static std::mutex cache_mutex;
    static std::map<std::size_t, std::vector<BoolPattern>> cache;
    {
        std::lock_guard<std::mutex> lock(cache_mutex);
        auto it = cache.find(r);
        if (it != cache.end()) return it->second;
    }

    std::size_t side = std::size_t{1} << r;
    std::size_t ubits = side * r, vbits = r * side;
    std::set<std::uint64_t> raw;                // exact duplicates
    std::map<std::uint64_t, BoolPattern> seen;  // canonical code -> pattern

    for (std::uint64_t ucode = 0; ucode < (std::uint64_t{1} << ubits); ++ucode) {
        BinaryMatrix u = matrix_from_code(side, r, ucode);
        for (std::uint64_t vcode = 0; vcode < (std::uint64_t{1} << vbits); ++vcode) {
            BinaryMatrix v = matrix_from_code(r, side, vcode);
            BinaryMatrix p = boolean_product(u, v);
            if (!raw.insert(code_of(p)).second) continue;
            std::uint64_t canon = code_of(pattern_canonical_form(p));
            if (seen.count(canon)) continue;
            seen.emplace(canon, BoolPattern{std::move(p), u, std::move(v)});
        }
    }

    std::vector<BoolPattern> out;
    out.reserve(seen.size());
    for (auto& [code, pat] : seen) out.push_back(pat);
    std::lock_guard<std::mutex> lock(cache_mutex);
    cache.emplace(r, out);
    return out;
}

namespace {

// Sub-patterns: every nonempty row/column selection of every full pattern,
// with the factors cut down alongside. Deduplicated up to permutation.
const std::vector<BoolPattern>& all_subpatterns(std::size_t r) {
    static std::mutex cache_mutex;
    static std::map<std::size_t, std::vector<BoolPattern>> cache;
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto it = cache.find(r);
    if (it != cache.end()) return it->second;

    std::vector<BoolPattern> full = enumerate_patterns(r);
    std::map<std::pair<std::uint64_t, std::pair<std::size_t, std::size_t>>, BoolPattern>
        seen;
    for (const auto& pat : full) {
        std::size_t side_r = pat.p.rows(), side_c = pat.p.cols();
        for (std::uint64_t rmask = 1; rmask < (std::uint64_t{1} << side_r); ++rmask) {
            std::vector<std::size_t> rsel;
            for (std::size_t i = 0; i < side_r; ++i)
                if ((rmask >> i) & 1u) rsel.push_back(i);
            for (std::uint64_t cmask = 1; cmask < (std::uint64_t{1} << side_c); ++cmask) {
                std::vector<std::size_t> csel;
                for (std::size_t j = 0; j < side_c; ++j)
                    if ((cmask >> j) & 1u) csel.push_back(j);

                BinaryMatrix sub = pat.p.submatrix(rsel, csel);
                auto key = std::make_pair(code_of(pattern_canonical_form(sub)),
                                          std::make_pair(sub.rows(), sub.cols()));
                if (seen.count(key)) continue;
                BoolPattern entry;
                entry.p = std::move(sub);
                entry.u = pat.u.select_rows(rsel);
                entry.v = pat.v.select_columns(csel);
                seen.emplace(std::move(key), std::move(entry));
            }
        }
    }
    std::vector<BoolPattern> out;
    out.reserve(seen.size());
    for (auto& [key, pat] : seen) out.push_back(std::move(pat));
    return cache.emplace(r, std::move(out)).first->second;
}

} // namespace

std::optional<BoolSolution> solve_boolean(const BinaryMatrix& a, std::size_t r,
                                          std::size_t k, RunControl* rc) {
    for (const auto& pat : all_subpatterns(r)) {
        if (pat.p.rows() > a.rows() || pat.p.cols() > a.cols()) continue;
        auto w = extend_p_solution(a, pat.p, k, rc);
        if (!w) continue;

        // Expand the pattern factors along the witness partitions.
        BinaryMatrix u(a.rows(), r), v(r, a.cols());
        for (std::size_t i = 0; i < pat.p.rows(); ++i)
            for (std::size_t s : w->row_parts.parts[i])
                for (std::size_t h = 0; h < r; ++h)
                    if (pat.u.get(i, h)) u.set(s, h, true);
        for (std::size_t j = 0; j < pat.p.cols(); ++j)
            for (std::size_t t : w->col_parts.parts[j])
                for (std::size_t h = 0; h < r; ++h)
                    if (pat.v.get(h, j)) v.set(h, t, true);

        BoolSolution sol{std::move(u), std::move(v), w->cost};
        assert(sol.implied() == w->b);
        assert(sol.is_witness(a, r, k));
        return sol;
    }
    return std::nullopt;
}

BoolSolution oracle_boolean_best(const BinaryMatrix& a, std::size_t r) {
    if (r == 0 || r > 8) throw UsageError("rank budget must be between 1 and 8");
    std::size_t m = a.rows(), n = a.cols();
    BoolSolution best{BinaryMatrix(m, r), BinaryMatrix(r, n), a.count_ones()};
    if (m == 0 || n == 0) {
        best.cost = 0;
        return best;
    }

    // U may be taken constant on the row classes of a: copying the cheaper
    // row of two equal rows never increases the cost.
    IndexPartition rclasses = row_groups(a);
    std::size_t w = rclasses.size();
    if (w * r > 22) throw ResourceLimitError("Boolean oracle factor space too large");

    std::vector<std::size_t> class_of(m, 0);
    for (std::size_t c = 0; c < w; ++c)
        for (std::size_t i : rclasses.parts[c]) class_of[i] = c;

    IndexPartition cclasses = column_groups(a);
    std::vector<BitVector> col_value;
    std::vector<std::size_t> col_mult;
    for (const auto& cls : cclasses.parts) {
        col_value.push_back(a.column(cls[0]));
        col_mult.push_back(cls.size());
    }

    for (std::uint64_t ucode = 0; ucode < (std::uint64_t{1} << (w * r)); ++ucode) {
        // Row-class h-th factor bit: ucode bit (class * r + h).
        // Candidate B-columns: 2^r products of U with a V-column.
        std::vector<BitVector> products;
        products.reserve(std::size_t{1} << r);
        for (std::uint64_t v = 0; v < (std::uint64_t{1} << r); ++v) {
            BitVector prod(m);
            for (std::size_t i = 0; i < m; ++i) {
                std::uint64_t urow = (ucode >> (class_of[i] * r)) & ((1u << r) - 1);
                if (urow & v) prod.set(i, true);
            }
            products.push_back(std::move(prod));
        }

        std::size_t cost = 0;
        std::vector<std::uint64_t> vchoice(col_value.size(), 0);
        for (std::size_t c = 0; c < col_value.size() && cost < best.cost; ++c) {
            std::size_t bd = kInf;
            for (std::uint64_t v = 0; v < products.size(); ++v) {
                std::size_t d = hamming(products[v], col_value[c]);
                if (d < bd) {
                    bd = d;
                    vchoice[c] = v;
                }
            }
            cost += bd * col_mult[c];
        }
        if (cost >= best.cost) continue;

        best.cost = cost;
        best.u = BinaryMatrix(m, r);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t h = 0; h < r; ++h)
                if ((ucode >> (class_of[i] * r + h)) & 1u) best.u.set(i, h, true);
        best.v = BinaryMatrix(r, n);
        for (std::size_t c = 0; c < cclasses.size(); ++c)
            for (std::size_t t : cclasses.parts[c])
                for (std::size_t h = 0; h < r; ++h)
                    if ((vchoice[c] >> h) & 1u) best.v.set(h, t, true);
    }
    return best;
}

std::optional<BoolSolution> oracle_boolean(const BinaryMatrix& a, std::size_t r,
                                           std::size_t k) {
    BoolSolution best = oracle_boolean_best(a, r);
    if (best.cost <= k) return best;
    return std::nullopt;
}

std::size_t boolean_rank_exact(const BinaryMatrix& a) {
    if (a.count_ones() == 0) return 0;

    // Work on the distinct-row/column reduction; exact factorization is
    // invariant under duplicating rows or columns.
    IndexPartition rcl = row_groups(a), ccl = column_groups(a);
    std::vector<std::size_t> rrep, crep;
    for (const auto& cls : rcl.parts) rrep.push_back(cls[0]);
    for (const auto& cls : ccl.parts) crep.push_back(cls[0]);
    BinaryMatrix red = a.submatrix(rrep, crep);

    std::size_t cap = std::min(red.rows(), red.cols());
    for (std::size_t r = 1; r <= cap; ++r) {
        if (red.rows() * r > 24)
            throw ResourceLimitError("exact Boolean rank beyond the desk-scale guard");
        // Maximal V trick: given U, the best chance to cover column j sets
        // v_hj = 1 iff every row with u_ih = 1 has a_ij = 1.
        std::size_t m = red.rows(), n = red.cols();
        bool found = false;
        for (std::uint64_t ucode = 0;
             ucode < (std::uint64_t{1} << (m * r)) && !found; ++ucode) {
            BinaryMatrix u = matrix_from_code(m, r, ucode);
            BinaryMatrix v(r, n);
            for (std::size_t h = 0; h < r; ++h)
                for (std::size_t j = 0; j < n; ++j) {
                    bool ok = true;
                    for (std::size_t i = 0; i < m && ok; ++i)
                        if (u.get(i, h) && !red.get(i, j)) ok = false;
                    if (ok) v.set(h, j, true);
                }
            if (boolean_product(u, v) == red) found = true;
        }
        if (found) return r;
    }
    return cap;
}

} // namespace bma
