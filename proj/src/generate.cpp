#include "bma/generate.hpp"

#include <random>

#include "bma/errors.hpp"

namespace bma {

namespace {

std::uint64_t below(std::mt19937_64& rng, std::uint64_t bound) {
    return rng() % bound;
}

// Flips exactly k distinct entries, chosen by a partial Fisher-Yates
// shuffle of the cell indices.
void plant_flips(BinaryMatrix& a, std::size_t k, std::mt19937_64& rng) {
    std::size_t cells = a.rows() * a.cols();
    if (k > cells) throw UsageError("cannot flip more entries than the matrix has");
    std::vector<std::size_t> idx(cells);
    for (std::size_t i = 0; i < cells; ++i) idx[i] = i;
    for (std::size_t i = 0; i < k; ++i) {
        std::size_t j = i + below(rng, cells - i);
        std::swap(idx[i], idx[j]);
        a.flip(idx[i] / a.cols(), idx[i] % a.cols());
    }
}

void check_dims(std::size_t m, std::size_t n) {
    if (m == 0 || n == 0) throw UsageError("matrix dimensions must be positive");
}

std::map<std::string, std::string> base_meta(const std::string& problem, std::size_t k,
                                             std::uint64_t seed) {
    return {{"problem", problem},
            {"k_planted", std::to_string(k)},
            {"seed", std::to_string(seed)}};
}

} // namespace

PlantedInstance generate_means(std::size_t m, std::size_t n, std::size_t r,
                               std::size_t k_planted, std::uint64_t seed) {
    check_dims(m, n);
    if (r == 0) throw UsageError("cluster budget must be positive");
    std::mt19937_64 rng(seed ^ 0x6d65616e73ull);
    // r candidate means, columns assigned uniformly.
    std::vector<BitVector> means;
    for (std::size_t i = 0; i < r; ++i) {
        BitVector c(m);
        for (std::size_t row = 0; row < m; ++row)
            if (below(rng, 2)) c.set(row, true);
        means.push_back(std::move(c));
    }
    BinaryMatrix a(m, n);
    for (std::size_t j = 0; j < n; ++j) {
        const BitVector& c = means[below(rng, r)];
        for (std::size_t row = 0; row < m; ++row)
            if (c.get(row)) a.set(row, j, true);
    }
    plant_flips(a, k_planted, rng);
    auto meta = base_meta("means", k_planted, seed);
    meta["r"] = std::to_string(r);
    return {std::move(a), std::move(meta)};
}

PlantedInstance generate_gf2(std::size_t m, std::size_t n, std::size_t r,
                             std::size_t k_planted, std::uint64_t seed) {
    check_dims(m, n);
    if (r == 0) throw UsageError("rank budget must be positive");
    std::mt19937_64 rng(seed ^ 0x676632ull);
    // B = U * V over GF(2) has rank at most r.
    BinaryMatrix a(m, n);
    std::vector<BitVector> u(m), v(n);
    for (std::size_t i = 0; i < m; ++i) {
        u[i] = BitVector(r);
        for (std::size_t h = 0; h < r; ++h)
            if (below(rng, 2)) u[i].set(h, true);
    }
    for (std::size_t j = 0; j < n; ++j) {
        v[j] = BitVector(r);
        for (std::size_t h = 0; h < r; ++h)
            if (below(rng, 2)) v[j].set(h, true);
    }
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            std::size_t dot = 0;
            for (std::size_t h = 0; h < r; ++h)
                if (u[i].get(h) && v[j].get(h)) ++dot;
            if (dot % 2) a.set(i, j, true);
        }
    plant_flips(a, k_planted, rng);
    auto meta = base_meta("gf2", k_planted, seed);
    meta["r"] = std::to_string(r);
    return {std::move(a), std::move(meta)};
}

PlantedInstance generate_pmatrix(std::size_t m, std::size_t n, std::size_t p,
                                 std::size_t q, std::size_t k_planted,
                                 std::uint64_t seed) {
    check_dims(m, n);
    if (p == 0 || q == 0) throw UsageError("pattern dimensions must be positive");
    if (p > m || q > n) throw UsageError("pattern larger than the matrix");
    std::mt19937_64 rng(seed ^ 0x706d6174ull);
    BinaryMatrix pattern(p, q);
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j < q; ++j)
            if (below(rng, 2)) pattern.set(i, j, true);
    // Surjective labelings: the first p rows / q columns hit every label.
    std::vector<std::size_t> rl(m), cl(n);
    for (std::size_t i = 0; i < m; ++i) rl[i] = i < p ? i : below(rng, p);
    for (std::size_t j = 0; j < n; ++j) cl[j] = j < q ? j : below(rng, q);
    BinaryMatrix a(m, n);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (pattern.get(rl[i], cl[j])) a.set(i, j, true);
    plant_flips(a, k_planted, rng);
    auto meta = base_meta("pmatrix", k_planted, seed);
    meta["p"] = std::to_string(p);
    meta["q"] = std::to_string(q);
    std::string prows;
    for (std::size_t i = 0; i < p; ++i) {
        if (i) prows += ";";
        prows += pattern.row(i).to_string();
    }
    meta["pattern"] = prows;
    return {std::move(a), std::move(meta)};
}

PlantedInstance generate_boolean(std::size_t m, std::size_t n, std::size_t r,
                                 std::size_t k_planted, std::uint64_t seed) {
    check_dims(m, n);
    if (r == 0) throw UsageError("rank budget must be positive");
    std::mt19937_64 rng(seed ^ 0x626f6f6cull);
    BinaryMatrix u(m, r), v(r, n);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t h = 0; h < r; ++h)
            if (below(rng, 2)) u.set(i, h, true);
    for (std::size_t h = 0; h < r; ++h)
        for (std::size_t j = 0; j < n; ++j)
            if (below(rng, 2)) v.set(h, j, true);
    BinaryMatrix a = boolean_product(u, v);
    plant_flips(a, k_planted, rng);
    auto meta = base_meta("boolean", k_planted, seed);
    meta["r"] = std::to_string(r);
    return {std::move(a), std::move(meta)};
}

} // namespace bma
