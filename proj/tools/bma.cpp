// Command-line front end for the binary matrix approximation solvers:
// exact solving with oracle cross-checks, planted instance generation,
// witness verification and benchmark sweeps.

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "bma/boolean.hpp"
#include "bma/cluster_select.hpp"
#include "bma/errors.hpp"
#include "bma/generate.hpp"
#include "bma/gf2.hpp"
#include "bma/io.hpp"
#include "bma/means.hpp"
#include "bma/pmatrix.hpp"
#include "bma/reductions.hpp"
#include "bma/run_control.hpp"

using json = nlohmann::json;
using namespace bma;

namespace {

// Exit codes: 0 decided (or YES with --status-exit), 1 NO with
// --status-exit, 2 parse error, 3 usage error, 4 resource guard.
constexpr int kExitNo = 1;
constexpr int kExitParse = 2;
constexpr int kExitUsage = 3;
constexpr int kExitResource = 4;

struct Clock {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double ms() const {
        return std::chrono::duration<double, std::milli>(
                   std::chrono::steady_clock::now() - start)
            .count();
    }
};

std::size_t meta_or(const std::map<std::string, std::string>& meta,
                    const std::string& key, std::optional<std::size_t> flag,
                    const char* what) {
    if (flag) return *flag;
    auto it = meta.find(key);
    if (it == meta.end())
        throw UsageError(std::string("missing ") + what +
                         " (pass the flag or record it in the instance file)");
    return std::stoul(it->second);
}

struct SolveOutcome {
    bool yes = false;
    std::optional<std::size_t> cost;
    json witness; // null when NO
};

// One decision call at budget k; the witness is re-validated before being
// reported.
SolveOutcome run_decision(const std::string& problem, const std::string& algorithm,
                          const BinaryMatrix& a, std::size_t r, std::size_t k,
                          const std::optional<BinaryMatrix>& pattern,
                          std::uint64_t seed, std::size_t trials, RunControl* rc) {
    SolveOutcome out;
    if (problem == "means") {
        MeansInstance inst{a, r, k};
        std::optional<Clustering> w;
        if (algorithm == "oracle")
            w = oracle_means(inst);
        else if (algorithm == "extend" || algorithm == "kernel-extend")
            w = extend_means(inst, rc);
        else if (algorithm == "color-coding")
            w = color_coding_means(inst, seed, trials, rc);
        else
            throw UsageError("unknown algorithm for means: " + algorithm);
        if (w) {
            json jw = to_json(*w);
            if (auto err = verify_means(inst, jw))
                throw std::logic_error("solver produced an invalid witness: " + *err);
            out = {true, w->cost, jw};
        }
    } else if (problem == "gf2") {
        Gf2Instance inst{a, r, k};
        std::optional<Gf2Solution> w;
        if (algorithm == "oracle")
            w = oracle_gf2(inst);
        else if (algorithm == "branch")
            w = branch_gf2(inst, rc);
        else if (algorithm == "extend")
            w = extend_solution_gf2(inst, rc);
        else
            throw UsageError("unknown algorithm for gf2: " + algorithm);
        if (w) {
            json jw = to_json(*w);
            if (auto err = verify_gf2(inst, jw))
                throw std::logic_error("solver produced an invalid witness: " + *err);
            out = {true, w->cost, jw};
        }
    } else if (problem == "pmatrix") {
        if (!pattern) throw UsageError("pmatrix needs a pattern");
        std::optional<PMatrixWitness> w;
        if (algorithm == "oracle")
            w = oracle_pmatrix(a, *pattern, k);
        else if (algorithm == "branch")
            w = branch_pmatrix(a, *pattern, k, rc);
        else if (algorithm == "extend")
            w = extend_p_solution(a, *pattern, k, rc);
        else
            throw UsageError("unknown algorithm for pmatrix: " + algorithm);
        if (w) {
            json jw = to_json(*w);
            if (auto err = verify_pmatrix(a, *pattern, k, jw))
                throw std::logic_error("solver produced an invalid witness: " + *err);
            out = {true, w->cost, jw};
        }
    } else if (problem == "boolean") {
        std::optional<BoolSolution> w;
        if (algorithm == "oracle")
            w = oracle_boolean(a, r, k);
        else if (algorithm == "pattern-enum")
            w = solve_boolean(a, r, k, rc);
        else
            throw UsageError("unknown algorithm for boolean: " + algorithm);
        if (w) {
            json jw = to_json(*w);
            if (auto err = verify_boolean(a, r, k, jw))
                throw std::logic_error("solver produced an invalid witness: " + *err);
            out = {true, w->cost, jw};
        }
    } else {
        throw UsageError("unknown problem: " + problem);
    }
    return out;
}

// Minimum feasible k by scanning the decision solver upward.
SolveOutcome run_optimize(const std::string& problem, const std::string& algorithm,
                          const BinaryMatrix& a, std::size_t r,
                          const std::optional<BinaryMatrix>& pattern,
                          std::size_t max_k, std::uint64_t seed, std::size_t trials,
                          RunControl* rc) {
    for (std::size_t k = 0; k <= max_k; ++k) {
        SolveOutcome out =
            run_decision(problem, algorithm, a, r, k, pattern, seed, trials, rc);
        if (out.yes) return out;
    }
    return {};
}

std::optional<BinaryMatrix> resolve_pattern(const std::string& problem,
                                            const std::string& pattern_file,
                                            const std::string& pattern_text,
                                            const std::map<std::string, std::string>& meta) {
    if (problem != "pmatrix") return std::nullopt;
    if (!pattern_file.empty()) return load_instance(pattern_file).a;
    if (!pattern_text.empty()) return pattern_from_text(pattern_text);
    auto it = meta.find("pattern");
    if (it != meta.end()) return pattern_from_text(it->second);
    throw UsageError("pmatrix needs --pattern, --pattern-text or pattern metadata");
}

int cmd_solve(const std::string& problem, const std::string& algorithm,
              const std::string& input, std::optional<std::size_t> r_flag,
              std::optional<std::size_t> k_flag, bool optimize, std::size_t max_k_flag,
              const std::string& pattern_file, const std::string& pattern_text,
              std::uint64_t seed, std::size_t trials, std::uint64_t max_nodes,
              std::size_t timeout_ms, const std::string& witness_out, bool status_exit) {
    InstanceFile inst = input == "-" ? parse_instance(std::cin) : load_instance(input);

    std::optional<BinaryMatrix> pattern =
        resolve_pattern(problem, pattern_file, pattern_text, inst.meta);
    std::size_t r = 0;
    if (problem == "pmatrix") {
        r = 0; // pattern carries the shape
    } else {
        r = meta_or(inst.meta, "r", r_flag, "rank/cluster budget -r");
    }

    RunControl rc;
    if (max_nodes) rc.set_node_limit(max_nodes);
    if (timeout_ms) rc.set_timeout(std::chrono::milliseconds(timeout_ms));

    Clock clock;
    SolveOutcome out;
    std::size_t k = 0;
    if (optimize) {
        std::size_t cap = max_k_flag ? max_k_flag : inst.a.rows() * inst.a.cols();
        out = run_optimize(problem, algorithm, inst.a, r, pattern, cap, seed, trials,
                           &rc);
        k = out.cost.value_or(cap);
    } else {
        k = meta_or(inst.meta, "k", k_flag, "edit budget -k");
        out = run_decision(problem, algorithm, inst.a, r, k, pattern, seed, trials,
                           &rc);
    }

    json record;
    record["problem"] = problem;
    record["algorithm"] = algorithm;
    record["m"] = inst.a.rows();
    record["n"] = inst.a.cols();
    if (problem != "pmatrix") record["r"] = r;
    record["k"] = k;
    record["mode"] = optimize ? "optimize" : "decision";
    record["decision"] = out.yes ? "yes" : "no";
    if (out.cost) record["cost"] = *out.cost;
    record["witness"] = out.witness;
    record["wall_ms"] = clock.ms();
    record["nodes"] = rc.nodes();
    std::cout << record.dump() << "\n";

    std::cerr << (out.yes ? "YES" : "NO");
    if (out.cost) std::cerr << " cost=" << *out.cost;
    std::cerr << " (" << problem << "/" << algorithm << ", " << clock.ms() << " ms, "
              << rc.nodes() << " nodes)\n";

    if (!witness_out.empty() && out.yes) {
        std::ofstream f(witness_out);
        if (!f) throw ParseError("cannot open witness output file: " + witness_out);
        f << out.witness.dump(2) << "\n";
    }
    if (status_exit) return out.yes ? 0 : kExitNo;
    return 0;
}

int cmd_generate(const std::string& problem, std::size_t m, std::size_t n,
                 std::size_t r, std::size_t p, std::size_t q, std::size_t k,
                 std::uint64_t seed, const std::string& out_path) {
    PlantedInstance planted;
    if (problem == "means")
        planted = generate_means(m, n, r, k, seed);
    else if (problem == "gf2")
        planted = generate_gf2(m, n, r, k, seed);
    else if (problem == "pmatrix")
        planted = generate_pmatrix(m, n, p, q, k, seed);
    else if (problem == "boolean")
        planted = generate_boolean(m, n, r, k, seed);
    else
        throw UsageError("unknown problem: " + problem);
    planted.meta["k"] = std::to_string(k);

    std::string text = serialize_instance(planted.a, planted.meta);
    if (out_path.empty() || out_path == "-")
        std::cout << text;
    else {
        std::ofstream f(out_path);
        if (!f) throw ParseError("cannot open output file: " + out_path);
        f << text;
    }
    return 0;
}

int cmd_verify(const std::string& problem, const std::string& instance_path,
               const std::string& witness_path, std::optional<std::size_t> r_flag,
               std::optional<std::size_t> k_flag, const std::string& pattern_file,
               const std::string& pattern_text) {
    InstanceFile inst = load_instance(instance_path);
    std::ifstream wf(witness_path);
    if (!wf) throw ParseError("cannot open witness file: " + witness_path);
    json witness;
    try {
        wf >> witness;
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed witness JSON: ") + e.what());
    }

    std::size_t k = meta_or(inst.meta, "k", k_flag, "edit budget -k");

    std::optional<std::string> err;
    if (problem == "means") {
        std::size_t r = meta_or(inst.meta, "r", r_flag, "cluster budget -r");
        err = verify_means({inst.a, r, k}, witness);
    } else if (problem == "gf2") {
        std::size_t r = meta_or(inst.meta, "r", r_flag, "rank budget -r");
        err = verify_gf2({inst.a, r, k}, witness);
    } else if (problem == "pmatrix") {
        auto pattern = resolve_pattern(problem, pattern_file, pattern_text, inst.meta);
        err = verify_pmatrix(inst.a, *pattern, k, witness);
    } else if (problem == "boolean") {
        std::size_t r = meta_or(inst.meta, "r", r_flag, "rank budget -r");
        err = verify_boolean(inst.a, r, k, witness);
    } else {
        throw UsageError("unknown problem: " + problem);
    }

    if (err) {
        std::cout << "FAIL: " << *err << "\n";
        return 1;
    }
    std::cout << "PASS\n";
    return 0;
}

std::vector<std::size_t> parse_list(const std::string& csv) {
    std::vector<std::size_t> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(std::stoul(item));
    if (out.empty()) throw UsageError("empty list: " + csv);
    return out;
}

std::vector<std::string> parse_names(const std::string& csv) {
    std::vector<std::string> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

int cmd_bench(const std::string& problem, const std::string& algorithms,
              const std::string& m_list, const std::string& n_list,
              const std::string& r_list, const std::string& k_list,
              std::size_t seeds, std::size_t timeout_ms, std::uint64_t max_nodes,
              const std::string& out_path) {
    std::vector<std::string> algs = parse_names(algorithms);
    if (algs.empty()) throw UsageError("no algorithms given");

    std::ostream* out = &std::cout;
    std::ofstream file;
    if (!out_path.empty() && out_path != "-") {
        file.open(out_path);
        if (!file) throw ParseError("cannot open output file: " + out_path);
        out = &file;
    }
    *out << "problem\talgorithm\tm\tn\tr\tk\tseed\tdecision\tcost\twall_ms\tnodes\tstatus\n";

    for (std::size_t m : parse_list(m_list))
        for (std::size_t n : parse_list(n_list))
            for (std::size_t r : parse_list(r_list))
                for (std::size_t k : parse_list(k_list))
                    for (std::uint64_t seed = 1; seed <= seeds; ++seed) {
                        PlantedInstance planted;
                        std::size_t plant_k = std::min(k, m * n);
                        if (problem == "means")
                            planted = generate_means(m, n, r, plant_k, seed);
                        else if (problem == "gf2")
                            planted = generate_gf2(m, n, r, plant_k, seed);
                        else if (problem == "pmatrix")
                            planted = generate_pmatrix(m, n, std::min(r, m),
                                                       std::min(r, n), plant_k, seed);
                        else if (problem == "boolean")
                            planted = generate_boolean(m, n, r, plant_k, seed);
                        else
                            throw UsageError("unknown problem: " + problem);

                        std::optional<BinaryMatrix> pattern;
                        if (problem == "pmatrix")
                            pattern = pattern_from_text(planted.meta.at("pattern"));

                        for (const auto& alg : algs) {
                            RunControl rc;
                            if (max_nodes) rc.set_node_limit(max_nodes);
                            if (timeout_ms)
                                rc.set_timeout(std::chrono::milliseconds(timeout_ms));
                            Clock clock;
                            std::string decision = "-", status = "ok", cost = "-";
                            try {
                                SolveOutcome res =
                                    run_decision(problem, alg, planted.a, r, k,
                                                 pattern, seed, 0, &rc);
                                decision = res.yes ? "yes" : "no";
                                if (res.cost) cost = std::to_string(*res.cost);
                            } catch (const ResourceLimitError&) {
                                status = "limit";
                            }
                            *out << problem << "\t" << alg << "\t" << m << "\t" << n
                                 << "\t" << r << "\t" << k << "\t" << seed << "\t"
                                 << decision << "\t" << cost << "\t" << clock.ms()
                                 << "\t" << rc.nodes() << "\t" << status << "\n";
                        }
                    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact solvers for binary matrix approximation problems"};
    app.require_subcommand(1);

    // solve
    std::string problem, algorithm, input = "-", pattern_file, pattern_text,
                                    witness_out;
    std::optional<std::size_t> r_flag, k_flag;
    bool optimize = false, status_exit = false;
    std::size_t max_k = 0, trials = 0, timeout_ms = 0;
    std::uint64_t seed = 1, max_nodes = 0;

    auto* solve = app.add_subcommand("solve", "Solve one instance");
    solve->add_option("--problem", problem, "means | gf2 | pmatrix | boolean")
        ->required();
    solve->add_option("--algorithm", algorithm,
                      "oracle | branch | extend | kernel-extend | color-coding | "
                      "pattern-enum")
        ->required();
    solve->add_option("--input", input, "instance file, '-' for stdin");
    solve->add_option("-r,--rank", r_flag, "cluster/rank budget");
    solve->add_option("-k,--budget", k_flag, "edit budget");
    solve->add_flag("--optimize", optimize, "scan k upward for the minimum");
    solve->add_option("--max-k", max_k, "cap for --optimize (default m*n)");
    solve->add_option("--pattern", pattern_file, "pattern instance file (pmatrix)");
    solve->add_option("--pattern-text", pattern_text, "pattern rows, e.g. '00;01'");
    solve->add_option("--seed", seed, "seed for randomized algorithms");
    solve->add_option("--trials", trials, "color-coding trials (0 = e^(2k))");
    solve->add_option("--max-nodes", max_nodes, "node budget (0 = unlimited)");
    solve->add_option("--timeout-ms", timeout_ms, "time budget (0 = unlimited)");
    solve->add_option("--witness-out", witness_out, "write the witness JSON here");
    solve->add_flag("--status-exit", status_exit, "exit 0 on YES, 1 on NO");

    // generate
    std::size_t gm = 0, gn = 0, gr = 1, gp = 1, gq = 1, gk = 0;
    std::string gout;
    std::uint64_t gseed = 1;
    auto* gen = app.add_subcommand("generate", "Emit a planted instance");
    gen->add_option("--problem", problem, "means | gf2 | pmatrix | boolean")
        ->required();
    gen->add_option("--m", gm, "rows")->required();
    gen->add_option("--n", gn, "columns")->required();
    gen->add_option("-r,--rank", gr, "planted rank / cluster count");
    gen->add_option("--p", gp, "pattern rows (pmatrix)");
    gen->add_option("--q", gq, "pattern columns (pmatrix)");
    gen->add_option("-k,--flips", gk, "planted flips")->required();
    gen->add_option("--seed", gseed, "generator seed");
    gen->add_option("--out", gout, "output path, '-' for stdout");

    // verify
    std::string v_instance, v_witness;
    auto* ver = app.add_subcommand("verify", "Re-validate a witness");
    ver->add_option("--problem", problem, "means | gf2 | pmatrix | boolean")
        ->required();
    ver->add_option("--instance", v_instance, "instance file")->required();
    ver->add_option("--witness", v_witness, "witness JSON file")->required();
    ver->add_option("-r,--rank", r_flag, "cluster/rank budget");
    ver->add_option("-k,--budget", k_flag, "edit budget");
    ver->add_option("--pattern", pattern_file, "pattern instance file (pmatrix)");
    ver->add_option("--pattern-text", pattern_text, "pattern rows");

    // bench
    std::string b_algs, b_m = "8", b_n = "8", b_r = "1", b_k = "2", b_out;
    std::size_t b_seeds = 3, b_timeout = 10000;
    std::uint64_t b_nodes = 0;
    auto* bench = app.add_subcommand("bench", "Sweep planted instances");
    bench->add_option("--problem", problem, "means | gf2 | pmatrix | boolean")
        ->required();
    bench->add_option("--algorithms", b_algs, "comma-separated list")->required();
    bench->add_option("--m-list", b_m, "comma-separated row counts");
    bench->add_option("--n-list", b_n, "comma-separated column counts");
    bench->add_option("--r-list", b_r, "comma-separated ranks");
    bench->add_option("--k-list", b_k, "comma-separated budgets");
    bench->add_option("--seeds", b_seeds, "seeds per cell");
    bench->add_option("--timeout-ms", b_timeout, "per-cell time budget");
    bench->add_option("--max-nodes", b_nodes, "per-cell node budget");
    bench->add_option("--out", b_out, "output TSV path, '-' for stdout");

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed())
            return cmd_solve(problem, algorithm, input, r_flag, k_flag, optimize,
                             max_k, pattern_file, pattern_text, seed, trials,
                             max_nodes, timeout_ms, witness_out, status_exit);
        if (gen->parsed())
            return cmd_generate(problem, gm, gn, gr, gp, gq, gk, gseed, gout);
        if (ver->parsed())
            return cmd_verify(problem, v_instance, v_witness, r_flag, k_flag,
                              pattern_file, pattern_text);
        if (bench->parsed())
            return cmd_bench(problem, b_algs, b_m, b_n, b_r, b_k, b_seeds, b_timeout,
                             b_nodes, b_out);
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ResourceLimitError& e) {
        std::cerr << "resource limit: " << e.what() << "\n";
        return kExitResource;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return 0;
}
