#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>

#include <json.hpp>

#include "bma/boolean.hpp"
#include "bma/gf2.hpp"
#include "bma/means.hpp"
#include "bma/pmatrix.hpp"

namespace bma {

// Instance text format: optional "# key=value" comment lines, a header
// line "m n", then m rows of n characters from {0,1}.
struct InstanceFile {
    BinaryMatrix a;
    std::map<std::string, std::string> meta;
};

InstanceFile parse_instance(std::istream& in);
InstanceFile load_instance(const std::string& path);
std::string serialize_instance(const BinaryMatrix& a,
                               const std::map<std::string, std::string>& meta);
void save_instance(const std::string& path, const BinaryMatrix& a,
                   const std::map<std::string, std::string>& meta);

// Witness serialization. Each witness carries its problem tag so that
// verification can reject a witness fed to the wrong problem.
nlohmann::json to_json(const Clustering& w);
nlohmann::json to_json(const Gf2Solution& w);
nlohmann::json to_json(const PMatrixWitness& w);
nlohmann::json to_json(const BoolSolution& w);

Clustering clustering_from_json(const nlohmann::json& j);
Gf2Solution gf2_from_json(const nlohmann::json& j);
PMatrixWitness pmatrix_from_json(const nlohmann::json& j);
BoolSolution boolean_from_json(const nlohmann::json& j);

// Independent witness re-validation on top of matrix-core primitives.
// Returns an error message on failure, nothing on success.
std::optional<std::string> verify_means(const MeansInstance& inst,
                                        const nlohmann::json& witness);
std::optional<std::string> verify_gf2(const Gf2Instance& inst,
                                      const nlohmann::json& witness);
std::optional<std::string> verify_pmatrix(const BinaryMatrix& a,
                                          const BinaryMatrix& pattern, std::size_t k,
                                          const nlohmann::json& witness);
std::optional<std::string> verify_boolean(const BinaryMatrix& a, std::size_t r,
                                          std::size_t k, const nlohmann::json& witness);

// Pattern matrices in flag form: rows separated by ';', e.g. "00;01".
BinaryMatrix pattern_from_text(const std::string& text);

} // namespace bma
