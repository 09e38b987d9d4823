// Acceptance suite: each criterion prints one PASS/FAIL line; the process
// exits nonzero if any criterion fails. Every tolerance is pinned here.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <vector>

#include "bma/boolean.hpp"
#include "bma/cluster_select.hpp"
#include "bma/generate.hpp"
#include "bma/gf2.hpp"
#include "bma/io.hpp"
#include "bma/means.hpp"
#include "bma/pmatrix.hpp"
#include "bma/reductions.hpp"

using namespace bma;

namespace {

std::uint64_t below(std::mt19937_64& rng, std::uint64_t bound) { return rng() % bound; }

BinaryMatrix random_matrix(std::mt19937_64& rng, std::size_t m, std::size_t n) {
    BinaryMatrix a(m, n);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (below(rng, 2)) a.set(i, j, true);
    return a;
}

BinaryMatrix nth_matrix(std::size_t m, std::size_t n, std::uint64_t code) {
    BinaryMatrix a(m, n);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if ((code >> (i * n + j)) & 1u) a.set(i, j, true);
    return a;
}

BitVector nth_vector(std::size_t len, std::uint64_t code) {
    BitVector v(len);
    for (std::size_t i = 0; i < len; ++i)
        if ((code >> i) & 1u) v.set(i, true);
    return v;
}

struct Failure {
    std::ostringstream what;
    bool failed = false;
};

#define EXPECT(cond, msg)                                                     \
    do {                                                                      \
        if (!(cond)) {                                                        \
            if (!fail.failed) fail.what << msg;                               \
            fail.failed = true;                                               \
            return;                                                           \
        }                                                                     \
    } while (0)

// ---------------------------------------------------------------- criterion 1
void criterion1(Failure& fail) {
    // Exhaustive 3x3 suite.
    for (std::uint64_t code = 0; code < (std::uint64_t{1} << 9); ++code) {
        BinaryMatrix a = nth_matrix(3, 3, code);
        for (std::size_t r = 1; r <= 3; ++r) {
            std::size_t opt = oracle_means_best(a, r).cost;
            for (std::size_t k = 0; k <= 4; ++k) {
                MeansInstance inst{a, r, k};
                bool expect = opt <= k;
                auto we = extend_means(inst);
                EXPECT(we.has_value() == expect,
                       "extend_means disagrees on 3x3 code " << code << " r=" << r
                                                             << " k=" << k);
                if (we) EXPECT(we->is_witness(inst), "invalid extend_means witness");
                auto wc = color_coding_means(inst, 17);
                EXPECT(wc.has_value() == expect,
                       "color_coding disagrees on 3x3 code " << code << " r=" << r
                                                             << " k=" << k);
                if (wc) EXPECT(wc->is_witness(inst), "invalid color_coding witness");
            }
        }
    }
    // 200 seeded random 5x5 instances.
    std::mt19937_64 rng(101);
    for (int trial = 0; trial < 200; ++trial) {
        BinaryMatrix a = random_matrix(rng, 5, 5);
        std::size_t r = 1 + below(rng, 3);
        std::size_t k = below(rng, 5);
        MeansInstance inst{a, r, k};
        bool expect = oracle_means_best(a, r).cost <= k;
        auto we = extend_means(inst);
        EXPECT(we.has_value() == expect, "extend_means disagrees on 5x5 trial " << trial);
        auto wc = color_coding_means(inst, 1000 + trial);
        EXPECT(wc.has_value() == expect, "color_coding disagrees on 5x5 trial " << trial);
    }
}

// ---------------------------------------------------------------- criterion 2
void criterion2(Failure& fail) {
    auto run_suite = [&](const BinaryMatrix& a, std::size_t r, std::size_t k,
                         const char* tag) {
        MeansInstance inst{a, r, k};
        bool expect = oracle_means_best(a, r).cost <= k;
        KernelOutcome out = kernelize_means(inst);
        switch (out.kind) {
        case KernelOutcome::Kind::SolvedYes:
            EXPECT(expect, "kernel says YES on a no-instance (" << tag << ")");
            break;
        case KernelOutcome::Kind::SolvedNo:
            EXPECT(!expect, "kernel says NO on a yes-instance (" << tag << ")");
            break;
        case KernelOutcome::Kind::Reduced: {
            const BinaryMatrix& d = out.reduced->a;
            EXPECT(distinct_column_count(d) <= k + r,
                   "kernel exceeds the distinct-column bound (" << tag << ")");
            EXPECT(d.cols() <= (k + 1) * (k + r),
                   "kernel exceeds the column bound (" << tag << ")");
            EXPECT(d.rows() <= ((k + 1) * (k + r) - 1) * k + ((k + 2) / 2) * r,
                   "kernel exceeds the row bound (" << tag << ")");
            EXPECT((oracle_means_best(d, r).cost <= k) == expect,
                   "kernel is not decision-equivalent (" << tag << ")");
            break;
        }
        }
    };
    for (std::uint64_t code = 0; code < (std::uint64_t{1} << 9); ++code) {
        BinaryMatrix a = nth_matrix(3, 3, code);
        for (std::size_t r = 1; r <= 3 && !fail.failed; ++r)
            for (std::size_t k = 0; k <= 4 && !fail.failed; ++k)
                run_suite(a, r, k, "3x3");
        if (fail.failed) return;
    }
    std::mt19937_64 rng(102);
    for (int trial = 0; trial < 200 && !fail.failed; ++trial)
        run_suite(random_matrix(rng, 5, 5), 1 + below(rng, 3), below(rng, 5), "5x5");
}

// ---------------------------------------------------------------- criterion 3
void criterion3(Failure& fail) {
    auto min_within = [](const std::function<bool(std::size_t)>& yes_at,
                         std::size_t cap) -> std::size_t {
        for (std::size_t k = 0; k <= cap; ++k)
            if (yes_at(k)) return k;
        return cap + 1; // sentinel: no success within the cap
    };

    auto run_suite = [&](const BinaryMatrix& a, std::size_t r, const char* tag) {
        std::size_t opt = oracle_gf2_best(a, r).cost;
        std::size_t oracle_min = opt <= 3 ? opt : 4;
        std::size_t branch_min = min_within(
            [&](std::size_t k) { return branch_gf2({a, r, k}).has_value(); }, 3);
        std::size_t extend_min = min_within(
            [&](std::size_t k) { return extend_solution_gf2({a, r, k}).has_value(); },
            3);
        EXPECT(branch_min == oracle_min,
               "branch_gf2 minimum k mismatch (" << tag << ", r=" << r << ")");
        EXPECT(extend_min == oracle_min,
               "extend_solution_gf2 minimum k mismatch (" << tag << ", r=" << r << ")");
        for (std::size_t k = 0; k <= 3; ++k) {
            Gf2Instance inst{a, r, k};
            bool expect = opt <= k;
            auto wb = branch_gf2(inst);
            auto we = extend_solution_gf2(inst);
            EXPECT(wb.has_value() == expect, "branch_gf2 decision mismatch (" << tag
                                                                              << ")");
            EXPECT(we.has_value() == expect,
                   "extend_solution_gf2 decision mismatch (" << tag << ")");
            if (wb) EXPECT(wb->is_witness(inst), "invalid branch_gf2 witness");
            if (we) EXPECT(we->is_witness(inst), "invalid extend witness");
        }
    };

    for (std::uint64_t code = 0; code < (std::uint64_t{1} << 9) && !fail.failed; ++code)
        for (std::size_t r = 1; r <= 2 && !fail.failed; ++r)
            run_suite(nth_matrix(3, 3, code), r, "3x3");
    std::mt19937_64 rng(103);
    for (int trial = 0; trial < 200 && !fail.failed; ++trial)
        run_suite(random_matrix(rng, 5, 5), 1 + below(rng, 2), "5x5");
}

// ---------------------------------------------------------------- criterion 4
void criterion4(Failure& fail) {
    // All binary patterns with 1 <= p, q <= 2.
    std::vector<BinaryMatrix> patterns;
    for (std::size_t pr = 1; pr <= 2; ++pr)
        for (std::size_t pc = 1; pc <= 2; ++pc)
            for (std::uint64_t code = 0; code < (std::uint64_t{1} << (pr * pc)); ++code)
                patterns.push_back(nth_matrix(pr, pc, code));

    std::mt19937_64 rng(104);
    for (std::uint64_t code = 0; code < (std::uint64_t{1} << 9); ++code) {
        BinaryMatrix a = nth_matrix(3, 3, code);
        for (const auto& p : patterns) {
            auto best = oracle_pmatrix_best(a, p);
            std::size_t opt = best ? best->cost : std::size_t(-1);

            // Transpose duality and permutation invariance of the optimum.
            auto bestT = oracle_pmatrix_best(a.transpose(), p.transpose());
            EXPECT(bestT.has_value() == best.has_value() &&
                       (!best || bestT->cost == opt),
                   "transpose duality fails on 3x3 code " << code);
            std::vector<std::size_t> rp{0, 1, 2}, cp{0, 1, 2};
            for (std::size_t i = 3; i > 1; --i) {
                std::swap(rp[i - 1], rp[below(rng, i)]);
                std::swap(cp[i - 1], cp[below(rng, i)]);
            }
            auto bestP = oracle_pmatrix_best(a.submatrix(rp, cp), p);
            EXPECT(bestP.has_value() == best.has_value() &&
                       (!best || bestP->cost == opt),
                   "permutation invariance fails on 3x3 code " << code);

            for (std::size_t k = 0; k <= 3; ++k) {
                bool expect = best.has_value() && opt <= k;
                auto wb = branch_pmatrix(a, p, k);
                auto we = extend_p_solution(a, p, k);
                EXPECT(wb.has_value() == expect,
                       "branch_pmatrix mismatch on 3x3 code " << code << " k=" << k);
                EXPECT(we.has_value() == expect,
                       "extend_p_solution mismatch on 3x3 code " << code << " k=" << k);
                if (wb) EXPECT(wb->is_witness(a, p, k), "invalid branch witness");
                if (we) EXPECT(we->is_witness(a, p, k), "invalid extend witness");
            }
            if (fail.failed) return;
        }
    }
}

// ---------------------------------------------------------------- criterion 5
void criterion5(Failure& fail) {
    for (std::uint64_t code = 0; code < (std::uint64_t{1} << 9); ++code) {
        BinaryMatrix a = nth_matrix(3, 3, code);
        std::size_t gf2_min = oracle_gf2_best(a, 1).cost;
        std::size_t bool_min = std::size_t(-1);
        for (std::size_t k = 0; k <= 9; ++k)
            if (solve_boolean(a, 1, k).has_value()) {
                bool_min = k;
                break;
            }
        EXPECT(bool_min == gf2_min,
               "boolean/gf2 r=1 minima differ on 3x3 code "
                   << code << " (boolean " << bool_min << ", gf2 " << gf2_min << ")");
    }
}

// ---------------------------------------------------------------- criterion 6
void criterion6(Failure& fail) {
    // Exhaustive multisets of n strings of length l, as sorted code tuples.
    auto for_each_multiset = [](std::size_t l, std::size_t n,
                                const std::function<void(const std::vector<std::uint64_t>&)>& fn) {
        std::vector<std::uint64_t> codes(n, 0);
        auto walk = [&](auto&& self, std::size_t pos, std::uint64_t from) -> void {
            if (pos == n) {
                fn(codes);
                return;
            }
            for (std::uint64_t c = from; c < (std::uint64_t{1} << l); ++c) {
                codes[pos] = c;
                self(self, pos + 1, c);
            }
        };
        walk(walk, 0, 0);
    };

    std::size_t checked = 0;
    for (std::size_t l = 1; l <= 4 && !fail.failed; ++l)
        for (std::size_t n = 1; n <= 4 && !fail.failed; ++n)
            for (std::size_t d = 1; d <= 2 && !fail.failed; ++d)
                for (std::size_t r = 1; r <= std::min(d, n) && !fail.failed; ++r)
                    for_each_multiset(l, n, [&](const std::vector<std::uint64_t>& codes) {
                        if (fail.failed) return;
                        CsoInstance inst;
                        inst.len = l;
                        inst.r = r;
                        inst.d = d;
                        for (std::uint64_t c : codes)
                            inst.strings.push_back(nth_vector(l, c));
                        bool cso_yes = oracle_cso(inst).has_value();
                        MeansInstance means = reduce_cso_to_means(inst);
                        bool means_yes = oracle_means(means).has_value();
                        EXPECT(cso_yes == means_yes,
                               "reduction not decision-equivalent at l=" << l << " n="
                                                                         << n);
                        // Marker separation inside the reduced matrix.
                        for (std::size_t i = 0; i < inst.strings.size(); ++i)
                            for (std::size_t j = i + 1; j < inst.strings.size(); ++j) {
                                std::size_t dist = 0;
                                for (std::size_t row = l; row < means.a.rows(); ++row)
                                    if (means.a.get(row, i) != means.a.get(row, j))
                                        ++dist;
                                EXPECT(dist >= 2 * (d + 1), "marker separation too small");
                            }
                        ++checked;
                    });
    EXPECT(checked > 0, "no reduction cases ran");

    // Composition OR-semantics over seeded pairs plus the fixed truth table.
    std::mt19937_64 rng(106);
    std::size_t pairs = 0;
    for (int trial = 0; trial < 200 && !fail.failed; ++trial) {
        std::size_t l = 1 + below(rng, 4);
        std::size_t n = 1 + below(rng, 4);
        std::size_t d = 1 + below(rng, 2);
        std::size_t r = 1 + below(rng, std::min(d, n));
        auto draw = [&]() {
            CsoInstance inst;
            inst.len = l;
            inst.r = r;
            inst.d = d;
            for (std::size_t i = 0; i < n; ++i)
                inst.strings.push_back(nth_vector(l, rng()));
            return inst;
        };
        CsoInstance x = draw(), y = draw();
        bool xy = oracle_cso(x).has_value(), yy = oracle_cso(y).has_value();
        CsoInstance both = compose_cso({x, y});
        bool by = oracle_cso(both).has_value();
        EXPECT(by == (xy || yy), "composition breaks OR-semantics");
        // Structural marker separation across slots.
        for (std::size_t i = 0; i < n && !fail.failed; ++i)
            for (std::size_t j = n; j < 2 * n; ++j)
                EXPECT(hamming(both.strings[i], both.strings[j]) >= 2 * (d + 1),
                       "composed marker separation too small");
        ++pairs;
    }
    EXPECT(pairs == 200, "composition sweep incomplete");
}

// ---------------------------------------------------------------- criterion 7
void criterion7(Failure& fail) {
    std::mt19937_64 rng(107);
    std::size_t checked = 0;
    while (checked < 150) {
        std::size_t m = 1 + below(rng, 4);
        std::size_t n = 2 + below(rng, 7);
        std::size_t p = 1 + below(rng, 2);
        std::size_t d = below(rng, 4);
        BinaryMatrix a = random_matrix(rng, m, n);
        IndexPartition initial = column_groups(a);
        if (initial.size() < p) continue;
        ClusterSelectionInstance inst;
        inst.a = a;
        inst.d = d;
        inst.groups.assign(p, {});
        for (std::size_t c = 0; c < initial.size(); ++c) {
            std::size_t g = c < p ? c : below(rng, p);
            for (std::size_t j : initial.parts[c]) inst.groups[g].push_back(j);
        }
        for (auto& g : inst.groups) std::sort(g.begin(), g.end());

        auto expect = oracle_cluster_selection(inst);
        auto got = solve_cluster_selection(inst);
        EXPECT(got.has_value() == expect.has_value(),
               "cluster selection disagrees with the oracle at case " << checked);
        if (got) EXPECT(got->is_witness(inst), "invalid cluster selection witness");
        ++checked;
    }
}

// ---------------------------------------------------------------- criterion 8
void criterion8(Failure& fail) {
    std::mt19937_64 rng(108);
    for (int trial = 0; trial < 3; ++trial) {
        std::uint64_t seed = rng();
        std::size_t k = 1 + below(rng, 5);

        {   // Binary r-Means.
            auto planted = generate_means(30, 30, 3, k, seed);
            MeansInstance inst{planted.a, 3, k};
            auto w = extend_means(inst);
            EXPECT(w && w->is_witness(inst), "extend_means misses a planted instance");
            auto wo = oracle_means(inst);
            EXPECT(wo.has_value(), "means oracle misses a planted instance");
        }
        {   // Color coding on a smaller plant.
            auto planted = generate_means(12, 12, 2, std::min<std::size_t>(k, 3), seed);
            MeansInstance inst{planted.a, 2, std::min<std::size_t>(k, 3)};
            auto w = color_coding_means(inst, seed);
            EXPECT(w && w->is_witness(inst), "color coding misses a planted instance");
        }
        {   // GF(2).
            auto planted = generate_gf2(25, 25, 2, k, seed);
            Gf2Instance inst{planted.a, 2, k};
            auto wb = branch_gf2(inst);
            EXPECT(wb && wb->is_witness(inst), "branch_gf2 misses a planted instance");
            auto we = extend_solution_gf2(inst);
            EXPECT(we && we->is_witness(inst), "extend gf2 misses a planted instance");
        }
        {   // P-matrix.
            auto planted = generate_pmatrix(20, 20, 2, 2, k, seed);
            BinaryMatrix pattern = pattern_from_text(planted.meta.at("pattern"));
            auto wb = branch_pmatrix(planted.a, pattern, k);
            EXPECT(wb && wb->is_witness(planted.a, pattern, k),
                   "branch_pmatrix misses a planted instance");
            auto we = extend_p_solution(planted.a, pattern, k);
            EXPECT(we && we->is_witness(planted.a, pattern, k),
                   "extend_p_solution misses a planted instance");
        }
        {   // Boolean.
            std::size_t bk = std::min<std::size_t>(k, 3);
            auto planted = generate_boolean(12, 12, 2, bk, seed);
            auto w = solve_boolean(planted.a, 2, bk);
            EXPECT(w && w->is_witness(planted.a, 2, bk),
                   "solve_boolean misses a planted instance");
        }
    }
}

// ---------------------------------------------------------------- criterion 9
void criterion9(Failure& fail) {
    std::mt19937_64 rng(109);

    // Triangle inequality, 10^4 random triples.
    for (int trial = 0; trial < 10000; ++trial) {
        std::size_t len = 1 + below(rng, 48);
        BitVector x = nth_vector(len, rng()), y = nth_vector(len, rng()),
                  z = nth_vector(len, rng());
        EXPECT(hamming(x, z) <= hamming(x, y) + hamming(y, z),
               "triangle inequality violated");
    }

    // Majority-mean optimality vs full 2^m enumeration, m <= 10.
    for (int trial = 0; trial < 30; ++trial) {
        std::size_t m = 1 + below(rng, 10);
        std::size_t n = 1 + below(rng, 6);
        BinaryMatrix a = random_matrix(rng, m, n);
        std::vector<std::size_t> idx;
        for (std::size_t j = 0; j < n; ++j)
            if (below(rng, 2)) idx.push_back(j);
        if (idx.empty()) idx.push_back(0);
        BitVector mean = majority_mean(a, idx);
        std::size_t got = 0;
        for (std::size_t j : idx) got += hamming(mean, a.column(j));
        for (std::uint64_t code = 0; code < (std::uint64_t{1} << m); ++code) {
            BitVector c = nth_vector(m, code);
            std::size_t cost = 0;
            for (std::size_t j : idx) cost += hamming(c, a.column(j));
            EXPECT(got <= cost, "majority mean is not optimal");
        }
    }

    // Rank bound on distinct columns/rows, exhaustive 4x4.
    for (std::uint64_t code = 0; code < (std::uint64_t{1} << 16); ++code) {
        BinaryMatrix a = nth_matrix(4, 4, code);
        std::size_t r = gf2_rank(a);
        EXPECT(distinct_column_count(a) <= (std::size_t{1} << r),
               "rank/distinct-column bound violated");
        EXPECT(distinct_row_count(a) <= (std::size_t{1} << r),
               "rank/distinct-row bound violated");
    }

    // Agreeing-vector enumeration vs the 2^m filter, m <= 12.
    for (int trial = 0; trial < 12; ++trial) {
        std::size_t m = 1 + below(rng, 12);
        BinaryMatrix a = random_matrix(rng, m, 4);
        BitVector base = a.column(below(rng, 4));
        std::size_t h = below(rng, m + 1);
        auto got = enumerate_agreeing_within(a, base, h);
        std::set<BitVector> got_set(got.begin(), got.end());
        std::set<BitVector> expect;
        for (std::uint64_t code = 0; code < (std::uint64_t{1} << m); ++code) {
            BitVector v = nth_vector(m, code);
            if (agrees_with(v, a) && hamming(v, base) <= h) expect.insert(v);
        }
        EXPECT(got_set == expect, "agreeing enumeration differs from the 2^m filter");
    }
}

} // namespace

int main() {
    struct Entry {
        int id;
        const char* name;
        void (*run)(Failure&);
    };
    const Entry entries[] = {
        {1, "r-means oracle equivalence (extend + color coding)", criterion1},
        {2, "kernel correctness and size bounds", criterion2},
        {3, "GF(2) oracle equivalence and minimum k", criterion3},
        {4, "P-matrix oracle equivalence, duality, permutation invariance",
         criterion4},
        {5, "Boolean/GF(2) coincidence at r=1", criterion5},
        {6, "CSO composition and reduction suite", criterion6},
        {7, "cluster selection vs oracle", criterion7},
        {8, "planted recovery across all solvers", criterion8},
        {9, "numeric and structural property suite", criterion9},
    };

    int failures = 0;
    for (const auto& entry : entries) {
        auto start = std::chrono::steady_clock::now();
        Failure fail;
        entry.run(fail);
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                                    start)
                          .count();
        if (fail.failed) {
            ++failures;
            std::printf("criterion %d FAIL (%.1fs) %s: %s\n", entry.id, secs,
                        entry.name, fail.what.str().c_str());
        } else {
            std::printf("criterion %d PASS (%.1fs) %s\n", entry.id, secs, entry.name);
        }
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
