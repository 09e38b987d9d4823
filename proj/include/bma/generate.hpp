#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "bma/matrix.hpp"

namespace bma {

// Planted instance: a structured matrix with exactly k_planted distinct
// entries flipped, so the instance is feasible at k = k_planted by
// construction. Deterministic under the seed; the plant parameters are
// recorded in the metadata.
struct PlantedInstance {
    BinaryMatrix a;
    std::map<std::string, std::string> meta;
};

PlantedInstance generate_means(std::size_t m, std::size_t n, std::size_t r,
                               std::size_t k_planted, std::uint64_t seed);
PlantedInstance generate_gf2(std::size_t m, std::size_t n, std::size_t r,
                             std::size_t k_planted, std::uint64_t seed);
PlantedInstance generate_pmatrix(std::size_t m, std::size_t n, std::size_t p,
                                 std::size_t q, std::size_t k_planted,
                                 std::uint64_t seed);
PlantedInstance generate_boolean(std::size_t m, std::size_t n, std::size_t r,
                                 std::size_t k_planted, std::uint64_t seed);

} // namespace bma
