#include "bma/io.hpp"

#include <fstream>
#include <sstream>

#include "bma/errors.hpp"

namespace bma {

using nlohmann::json;

InstanceFile parse_instance(std::istream& in) {
    InstanceFile out;
    std::string line;
    std::size_t m = 0, n = 0;
    bool have_header = false;
    std::vector<std::string> rows;

    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::string body = line.substr(1);
            std::size_t eq = body.find('=');
            if (eq != std::string::npos) {
                std::string key = body.substr(0, eq);
                std::string value = body.substr(eq + 1);
                auto trim = [](std::string& s) {
                    while (!s.empty() && s.front() == ' ') s.erase(s.begin());
                    while (!s.empty() && s.back() == ' ') s.pop_back();
                };
                trim(key);
                trim(value);
                if (!key.empty()) out.meta[key] = value;
            }
            continue;
        }
        if (!have_header) {
            std::istringstream hs(line);
            if (!(hs >> m >> n)) throw ParseError("expected header line 'm n'");
            std::string rest;
            if (hs >> rest) throw ParseError("trailing tokens after the header");
            have_header = true;
            continue;
        }
        rows.push_back(line);
        if (rows.size() == m) break;
    }
    if (!have_header) throw ParseError("missing header line 'm n'");
    if (rows.size() != m) throw ParseError("expected " + std::to_string(m) + " data rows");
    for (const auto& r : rows)
        if (r.size() != n)
            throw ParseError("every data row must have exactly n characters");
    out.a = BinaryMatrix::from_rows(rows);
    return out;
}

InstanceFile load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open instance file: " + path);
    return parse_instance(in);
}

std::string serialize_instance(const BinaryMatrix& a,
                               const std::map<std::string, std::string>& meta) {
    std::ostringstream out;
    for (const auto& [key, value] : meta) out << "# " << key << "=" << value << "\n";
    out << a.rows() << " " << a.cols() << "\n";
    for (std::size_t i = 0; i < a.rows(); ++i) out << a.row(i).to_string() << "\n";
    return out.str();
}

void save_instance(const std::string& path, const BinaryMatrix& a,
                   const std::map<std::string, std::string>& meta) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot open output file: " + path);
    out << serialize_instance(a, meta);
}

namespace {

json bits_to_json(const BitVector& v) { return v.to_string(); }

BitVector bits_from_json(const json& j) {
    if (!j.is_string()) throw ParseError("expected a bit string");
    return BitVector::from_string(j.get<std::string>());
}

json matrix_to_json(const BinaryMatrix& a) {
    json rows = json::array();
    for (std::size_t i = 0; i < a.rows(); ++i) rows.push_back(a.row(i).to_string());
    json out;
    out["m"] = a.rows();
    out["n"] = a.cols();
    out["rows"] = rows;
    return out;
}

BinaryMatrix matrix_from_json(const json& j) {
    if (!j.contains("rows") || !j["rows"].is_array())
        throw ParseError("expected a matrix object with 'rows'");
    std::vector<std::string> rows;
    for (const auto& r : j["rows"]) rows.push_back(r.get<std::string>());
    std::size_t m = j.value("m", rows.size());
    std::size_t n = j.value("n", rows.empty() ? std::size_t{0} : rows[0].size());
    if (m != rows.size() || (m > 0 && n != rows[0].size()))
        throw ParseError("matrix dimensions disagree with its rows");
    return BinaryMatrix::from_rows(rows);
}

json parts_to_json(const std::vector<std::vector<std::size_t>>& parts) {
    json out = json::array();
    for (const auto& p : parts) out.push_back(p);
    return out;
}

std::vector<std::vector<std::size_t>> parts_from_json(const json& j) {
    if (!j.is_array()) throw ParseError("expected an array of index sets");
    std::vector<std::vector<std::size_t>> out;
    for (const auto& p : j) out.push_back(p.get<std::vector<std::size_t>>());
    return out;
}

} // namespace

json to_json(const Clustering& w) {
    json out;
    out["problem"] = "means";
    out["clusters"] = parts_to_json(w.clusters);
    json means = json::array();
    for (const auto& c : w.means) means.push_back(bits_to_json(c));
    out["means"] = means;
    out["cost"] = w.cost;
    return out;
}

json to_json(const Gf2Solution& w) {
    json out;
    out["problem"] = "gf2";
    json basis = json::array();
    for (const auto& b : w.basis) basis.push_back(bits_to_json(b));
    out["basis"] = basis;
    out["assignment"] = w.assignment;
    out["cost"] = w.cost;
    return out;
}

json to_json(const PMatrixWitness& w) {
    json out;
    out["problem"] = "pmatrix";
    out["row_parts"] = parts_to_json(w.row_parts.parts);
    out["col_parts"] = parts_to_json(w.col_parts.parts);
    out["b"] = matrix_to_json(w.b);
    out["cost"] = w.cost;
    return out;
}

json to_json(const BoolSolution& w) {
    json out;
    out["problem"] = "boolean";
    out["u"] = matrix_to_json(w.u);
    out["v"] = matrix_to_json(w.v);
    out["cost"] = w.cost;
    return out;
}

namespace {

void expect_problem(const json& j, const std::string& tag) {
    if (!j.is_object() || j.value("problem", "") != tag)
        throw ParseError("witness is not tagged for problem '" + tag + "'");
}

} // namespace

Clustering clustering_from_json(const json& j) {
    expect_problem(j, "means");
    Clustering w;
    w.clusters = parts_from_json(j.at("clusters"));
    for (const auto& c : j.at("means")) w.means.push_back(bits_from_json(c));
    w.cost = j.at("cost").get<std::size_t>();
    return w;
}

Gf2Solution gf2_from_json(const json& j) {
    expect_problem(j, "gf2");
    Gf2Solution w;
    for (const auto& b : j.at("basis")) w.basis.push_back(bits_from_json(b));
    w.assignment = j.at("assignment").get<std::vector<std::uint32_t>>();
    w.cost = j.at("cost").get<std::size_t>();
    return w;
}

PMatrixWitness pmatrix_from_json(const json& j) {
    expect_problem(j, "pmatrix");
    PMatrixWitness w;
    w.row_parts.parts = parts_from_json(j.at("row_parts"));
    w.col_parts.parts = parts_from_json(j.at("col_parts"));
    w.b = matrix_from_json(j.at("b"));
    w.row_parts.universe = w.b.rows();
    w.col_parts.universe = w.b.cols();
    w.cost = j.at("cost").get<std::size_t>();
    return w;
}

BoolSolution boolean_from_json(const json& j) {
    expect_problem(j, "boolean");
    BoolSolution w;
    w.u = matrix_from_json(j.at("u"));
    w.v = matrix_from_json(j.at("v"));
    w.cost = j.at("cost").get<std::size_t>();
    return w;
}

std::optional<std::string> verify_means(const MeansInstance& inst, const json& witness) {
    Clustering w = clustering_from_json(witness);
    if (w.clusters.size() > inst.r) return "more clusters than the budget r";
    std::size_t cost;
    try {
        cost = clustering_cost(inst.a, w);
    } catch (const UsageError& e) {
        return std::string(e.what());
    }
    if (cost != w.cost) return "stated cost does not match the recomputed cost";
    if (cost > inst.k) return "cost exceeds the budget k";
    return std::nullopt;
}

std::optional<std::string> verify_gf2(const Gf2Instance& inst, const json& witness) {
    Gf2Solution w = gf2_from_json(witness);
    if (w.basis.size() > inst.r) return "basis larger than the rank budget";
    if (!w.basis.empty()) {
        for (const auto& b : w.basis)
            if (b.size() != inst.a.rows()) return "basis vector of the wrong length";
        if (gf2_rank(BinaryMatrix::from_columns(w.basis)) != w.basis.size())
            return "basis vectors are linearly dependent";
    }
    if (w.assignment.size() != inst.a.cols()) return "one assignment per column required";
    BinaryMatrix b = w.implied(inst.a.rows());
    if (gf2_rank(b) > inst.r) return "implied matrix exceeds the rank budget";
    std::size_t cost = hamming(inst.a, b);
    if (cost != w.cost) return "stated cost does not match the recomputed cost";
    if (cost > inst.k) return "cost exceeds the budget k";
    return std::nullopt;
}

std::optional<std::string> verify_pmatrix(const BinaryMatrix& a,
                                          const BinaryMatrix& pattern, std::size_t k,
                                          const json& witness) {
    PMatrixWitness w = pmatrix_from_json(witness);
    if (w.b.rows() != a.rows() || w.b.cols() != a.cols())
        return "implied matrix has the wrong shape";
    if (!w.is_witness(a, pattern, k)) return "not a valid P-matrix witness within k";
    if (hamming(a, w.b) != w.cost) return "stated cost does not match the recomputed cost";
    return std::nullopt;
}

std::optional<std::string> verify_boolean(const BinaryMatrix& a, std::size_t r,
                                          std::size_t k, const json& witness) {
    BoolSolution w = boolean_from_json(witness);
    if (w.u.rows() != a.rows() || w.v.cols() != a.cols())
        return "factor shapes do not match the instance";
    if (w.u.cols() != w.v.rows()) return "factor inner dimensions differ";
    if (w.u.cols() > r) return "factor rank exceeds the budget";
    std::size_t cost = hamming(a, boolean_product(w.u, w.v));
    if (cost != w.cost) return "stated cost does not match the recomputed cost";
    if (cost > k) return "cost exceeds the budget k";
    return std::nullopt;
}

BinaryMatrix pattern_from_text(const std::string& text) {
    std::vector<std::string> rows;
    std::string current;
    for (char c : text) {
        if (c == ';') {
            rows.push_back(current);
            current.clear();
        } else if (c == '0' || c == '1') {
            current.push_back(c);
        } else if (c != ' ') {
            throw ParseError("pattern text may contain only 0, 1, ';' and spaces");
        }
    }
    if (!current.empty()) rows.push_back(current);
    if (rows.empty()) throw ParseError("pattern text is empty");
    return BinaryMatrix::from_rows(rows);
}

} // namespace bma
