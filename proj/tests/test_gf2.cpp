#include <doctest.h>

#include "bma/errors.hpp"
#include "bma/gf2.hpp"
#include "test_util.hpp"

using namespace bma;
using testutil::nth_matrix;
using testutil::random_matrix;

namespace {

// Exact minimum edits by enumerating every B directly. Only for tiny m*n.
std::size_t gf2_optimum_by_matrix_enumeration(const BinaryMatrix& a, std::size_t r) {
    std::size_t cells = a.rows() * a.cols();
    std::size_t best = std::size_t(-1);
    for (std::uint64_t code = 0; code < (std::uint64_t{1} << cells); ++code) {
        auto b = nth_matrix(a.rows(), a.cols(), code);
        if (gf2_rank(b) <= r) best = std::min(best, hamming(a, b));
    }
    return best;
}

} // namespace

TEST_CASE("preprocess_gf2") {
    auto id5 = BinaryMatrix::from_rows({"10000", "01000", "00100", "00010", "00001"});
    CHECK(!preprocess_gf2({id5, 1, 1}).has_value()); // 5 distinct > 2^1 + 1

    auto low = BinaryMatrix::from_rows({"1111", "1111"});
    CHECK(preprocess_gf2({low, 1, 0}).has_value());

    // Boundary: exactly 2^r + k distinct columns passes.
    auto id3 = BinaryMatrix::from_rows({"100", "010", "001"});
    CHECK(preprocess_gf2({id3, 1, 1}).has_value());   // 3 == 2 + 1
    CHECK(!preprocess_gf2({id3, 1, 0}).has_value());  // 3 > 2 + 0
}

TEST_CASE("oracle_gf2") {
    CHECK(oracle_gf2_best(BinaryMatrix(3, 3), 1).cost == 0);
    CHECK(oracle_gf2_best(BinaryMatrix::from_rows({"11", "11"}), 1).cost == 0);
    CHECK(oracle_gf2_best(BinaryMatrix::from_rows({"100", "010", "001"}), 1).cost == 2);

    // Matches direct matrix enumeration on tiny instances.
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 25; ++trial) {
        std::size_t m = 2 + testutil::below(rng, 2);
        std::size_t n = 2 + testutil::below(rng, 2);
        auto a = random_matrix(rng, m, n);
        for (std::size_t r = 1; r <= 2; ++r)
            CHECK(oracle_gf2_best(a, r).cost == gf2_optimum_by_matrix_enumeration(a, r));
    }
}

TEST_CASE("branch_gf2") {
    auto id2 = BinaryMatrix::from_rows({"10", "01"});

    SUBCASE("rank within budget needs no edits") {
        auto w = branch_gf2({id2, 2, 0});
        REQUIRE(w.has_value());
        CHECK(w->cost == 0);
    }
    SUBCASE("identity with r=1") {
        CHECK(!branch_gf2({id2, 1, 0}).has_value());
        auto w = branch_gf2({id2, 1, 1});
        REQUIRE(w.has_value());
        CHECK(w->is_witness({id2, 1, 1}));
        CHECK(oracle_gf2_best(id2, 1).cost == 1);
    }
}

TEST_CASE("extend_solution_gf2 examples") {
    auto id2 = BinaryMatrix::from_rows({"10", "01"});
    auto w = extend_solution_gf2({id2, 1, 1});
    REQUIRE(w.has_value());
    CHECK(w->is_witness({id2, 1, 1}));
    CHECK(!extend_solution_gf2({id2, 1, 0}).has_value());

    auto low = BinaryMatrix::from_rows({"101", "101", "011"});
    auto w0 = extend_solution_gf2({low, 2, 0});
    REQUIRE(w0.has_value());
    CHECK(w0->cost == 0);
}

TEST_CASE("gf2 solvers agree with the oracle") {
    std::mt19937_64 rng(22);
    for (int trial = 0; trial < 40; ++trial) {
        std::size_t m = 2 + testutil::below(rng, 4);
        std::size_t n = 2 + testutil::below(rng, 4);
        auto a = random_matrix(rng, m, n);
        std::size_t r = 1 + testutil::below(rng, 2);
        std::size_t opt = oracle_gf2_best(a, r).cost;
        for (std::size_t k = 0; k <= 4; ++k) {
            Gf2Instance inst{a, r, k};
            bool expected = opt <= k;
            auto wb = branch_gf2(inst);
            auto we = extend_solution_gf2(inst);
            CHECK(wb.has_value() == expected);
            CHECK(we.has_value() == expected);
            if (wb) CHECK(wb->is_witness(inst));
            if (we) CHECK(we->is_witness(inst));
        }
    }
}

TEST_CASE("solution reconstruction from a matrix") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 40; ++trial) {
        auto b = random_matrix(rng, 4, 5);
        auto sol = solution_from_matrix(b);
        CHECK(sol.basis.size() == gf2_rank(b));
        CHECK(sol.implied(4) == b);
    }
}
