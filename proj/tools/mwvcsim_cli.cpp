// Command-line driver: generate graphs, run single simulations with
// verification, sweep parameter grids, and evaluate the lower-bound
// arithmetic. Exit codes: 0 ok, 1 verification failure, 2 config/IO error.

#include "mwvcsim/bounds.hpp"
#include "mwvcsim/engine.hpp"
#include "mwvcsim/graph.hpp"
#include "mwvcsim/oracle.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

using json = nlohmann::ordered_json;
using namespace mwvcsim;

namespace {

constexpr const char* kVersion = "0.1.0";

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what_) : std::runtime_error(what_) {}
};

struct GraphSource {
    std::string graph_file;
    std::string family;
    int n = 0;
    std::string weights = "unit";
    std::string p = "0.5";
    int dmax = 3;
    std::uint64_t seed = 0;

    void add_options(CLI::App* cmd, bool file_allowed = true) {
        if (file_allowed)
            cmd->add_option("--graph", graph_file, "path to a graph file");
        cmd->add_option("--family", family,
                        "generator family: single_edge|path|cycle|star|complete|"
                        "complete_bipartite|erdos_renyi|random_bounded_degree");
        cmd->add_option("--n", n, "vertex count for --family");
        cmd->add_option("--weights", weights, "weight mode: unit | int:LO:HI | rat:BOUND");
        cmd->add_option("--p", p, "edge probability for erdos_renyi (rational or decimal)");
        cmd->add_option("--dmax", dmax, "degree bound for random_bounded_degree");
        cmd->add_option("--seed", seed, "generator seed");
    }
};

GeneratorSpec spec_from_source(const GraphSource& src) {
    if (src.family.empty()) throw ConfigError("one of --graph or --family is required");
    GeneratorSpec spec;
    spec.family = family_from_name(src.family);
    spec.n = src.n;
    spec.seed = src.seed;
    spec.edge_probability = parse_rational(src.p);
    spec.degree_bound = src.dmax;
    if (src.weights == "unit") {
        spec.weight_mode = WeightMode::Unit;
    } else if (src.weights.rfind("int:", 0) == 0) {
        spec.weight_mode = WeightMode::UniformInteger;
        auto rest = src.weights.substr(4);
        auto colon = rest.find(':');
        if (colon == std::string::npos) throw ConfigError("--weights int:LO:HI");
        spec.weight_lo = std::stol(rest.substr(0, colon));
        spec.weight_hi = std::stol(rest.substr(colon + 1));
    } else if (src.weights.rfind("rat:", 0) == 0) {
        spec.weight_mode = WeightMode::UniformRational;
        spec.denominator_bound = std::stol(src.weights.substr(4));
    } else {
        throw ConfigError("--weights must be unit, int:LO:HI or rat:BOUND");
    }
    return spec;
}

WeightedGraph load_graph(const GraphSource& src, std::string& source_out) {
    if (!src.graph_file.empty() && !src.family.empty())
        throw ConfigError("--graph and --family are mutually exclusive");
    if (!src.graph_file.empty()) {
        std::ifstream in(src.graph_file);
        if (!in) throw ConfigError("cannot open graph file '" + src.graph_file + "'");
        std::stringstream buf;
        buf << in.rdbuf();
        source_out = "file:" + src.graph_file;
        return parse_graph(buf.str());
    }
    source_out = "family:" + src.family + ";n=" + std::to_string(src.n) +
                 ";weights=" + src.weights + ";seed=" + std::to_string(src.seed);
    return generate(spec_from_source(src));
}

Schedule parse_schedule(const std::string& text, int n, std::uint64_t seed) {
    Schedule sched;
    if (text.empty() || text == "sim" || text == "simultaneous") return sched;
    if (text.rfind("stagger:", 0) == 0) {
        int max_offset = std::stoi(text.substr(8));
        if (max_offset < 0) throw ConfigError("--schedule stagger offset must be >= 0");
        std::mt19937_64 rng(seed ^ 0x5bd1e995ULL);
        sched.activation.resize(n);
        for (int v = 0; v < n; ++v)
            sched.activation[v] =
                static_cast<int>(rng() % (static_cast<std::uint64_t>(max_offset) + 1));
        return sched;
    }
    sched.activation.assign(n, 0);
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) {
        auto colon = part.find(':');
        if (colon == std::string::npos)
            throw ConfigError("--schedule expects sim, stagger:MAX or v:round,v:round");
        int v = std::stoi(part.substr(0, colon));
        int round = std::stoi(part.substr(colon + 1));
        if (v < 0 || v >= n) throw ConfigError("--schedule names a vertex out of range");
        if (round < 0) throw ConfigError("--schedule activation round must be >= 0");
        sched.activation[v] = round;
    }
    return sched;
}

std::string schedule_name(const Schedule& s) {
    if (s.activation.empty()) return "simultaneous";
    std::ostringstream out;
    for (size_t v = 0; v < s.activation.size(); ++v) {
        if (v) out << ",";
        out << v << ":" << s.activation[v];
    }
    return out.str();
}

Variant parse_variant(const std::string& name) {
    if (name == "local") return Variant::Local;
    if (name == "congest") return Variant::Congest;
    throw ConfigError("--variant must be local or congest");
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write to '" + path + "'");
    out << content;
}

// Expands "a..b" ranges and comma lists of integers.
std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) {
        auto dots = part.find("..");
        if (dots != std::string::npos) {
            int lo = std::stoi(part.substr(0, dots));
            int hi = std::stoi(part.substr(dots + 2));
            for (int x = lo; x <= hi; ++x) out.push_back(x);
        } else if (!part.empty()) {
            out.push_back(std::stoi(part));
        }
    }
    return out;
}

std::vector<Rat> parse_rat_list(const std::string& text) {
    std::vector<Rat> out;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ','))
        if (!part.empty()) out.push_back(parse_rational(part));
    return out;
}

struct RunOutcome {
    json report;
    bool verified_ok = true;
    Trace trace;
};

RunOutcome execute_run(const WeightedGraph& g, const std::string& source, const Rat& eps,
                       Variant variant, const Schedule& schedule,
                       std::optional<std::uint64_t> order_seed, long long round_cap,
                       bool verify, bool with_meta) {
    auto params = make_params(eps, variant, order_seed);
    if (round_cap <= 0) {
        int max_act = 0;
        for (int a : schedule.activation) max_act = std::max(max_act, a);
        round_cap = default_round_cap(g, eps, max_act);
    }
    auto [trace, rep] = run_simulation(g, params, schedule, round_cap);

    RunOutcome outcome;
    outcome.trace = trace;
    json& r = outcome.report;
    if (with_meta) r["meta"] = {{"tool", "mwvcsim"}, {"version", kVersion}};
    r["graph"] = {{"n", g.n},
                  {"m", g.edge_count()},
                  {"max_degree", max_degree(g)},
                  {"source", source}};
    r["config"] = {{"eps", rat_str(eps)},
                   {"eps_float", rat_double(eps)},
                   {"eps_prime", rat_str(params.epsilon_prime)},
                   {"variant", variant == Variant::Local ? "local" : "congest"},
                   {"schedule", schedule_name(schedule)},
                   {"round_cap", round_cap}};
    if (order_seed) r["config"]["order_seed"] = *order_seed;

    int iterations_max = 0, rounds_max = 0;
    for (int v = 0; v < g.n; ++v) {
        iterations_max = std::max(iterations_max, rep.iterations[v]);
        rounds_max = std::max(rounds_max, rep.rounds_after_activation[v]);
    }
    json cover = json::array();
    for (int v : rep.cover) cover.push_back(v);
    r["result"] = {{"cover", cover},
                   {"cover_weight", rat_str(rep.cover_weight)},
                   {"cover_weight_float", rat_double(rep.cover_weight)},
                   {"iterations", rep.iterations},
                   {"iterations_max", iterations_max},
                   {"rounds", rep.rounds_after_activation},
                   {"rounds_max", rounds_max},
                   {"rounds_total", trace.rounds_total},
                   {"messages_total", rep.total_messages},
                   {"max_payload_bits", rep.max_payload_bits}};

    int delta = max_degree(g);
    bool simultaneous = schedule.activation.empty();
    if (delta >= 1) {
        Rat bound = round_bound(delta, eps);
        long long cap = ceil_to_ll(bound) + 1;
        r["result"]["predicted_iteration_bound"] = rat_str(bound);
        r["result"]["predicted_iteration_bound_float"] = rat_double(bound);
        r["result"]["iteration_cap"] = cap;
        if (simultaneous) r["result"]["within_iteration_cap"] = iterations_max <= cap;
    }

    if (verify) {
        bool full = g.n <= 24;
        auto check = verify_trace(g, trace);
        bool ok = check.violations.empty() && check.dichotomy_adjusted.empty() &&
                  check_cover(g, rep.cover);
        json ver;
        ver["enabled"] = true;
        ver["mode"] = full ? "full" : "light";
        ver["violations"] = check.violations;
        ver["payment_valid"] = check_g_valid(g, check.payments).empty();
        ver["cover_valid"] = check_cover(g, rep.cover);
        ver["dichotomy_adjusted_ok"] = check.dichotomy_adjusted.empty();
        // informational: the unhalved constant is not guaranteed in the
        // congest variant, where the vault is half the threshold
        ver["dichotomy_nominal_ok"] = check.dichotomy_nominal.empty();
        if (full) {
            auto opt = brute_force_mwvc(g);
            json opt_cover = json::array();
            for (int v : opt.cover) opt_cover.push_back(v);
            ver["opt_weight"] = rat_str(opt.weight);
            ver["opt_cover"] = opt_cover;
            if (opt.weight > 0) {
                Rat ratio = approx_ratio(rep.cover_weight, opt.weight);
                Rat bound = Rat(2) + eps;
                ver["ratio"] = rat_str(ratio);
                ver["ratio_float"] = rat_double(ratio);
                ver["ratio_bound"] = rat_str(bound);
                ver["within_ratio_bound"] = ratio <= bound;
                ok = ok && ratio <= bound;
            }
        }
        ver["ok"] = ok;
        r["verification"] = ver;
        outcome.verified_ok = ok;
    } else {
        r["verification"] = {{"enabled", false}};
    }
    return outcome;
}

const char* kSweepHeader =
    "family,n,m,max_degree,eps,eps_float,variant,seed,status,cover_weight,"
    "cover_weight_float,opt_weight,ratio,ratio_float,iterations_max,predicted_bound,"
    "predicted_bound_float,iteration_cap,within_iteration_cap,max_message_bits,"
    "rounds_total,messages_total\n";

void append_row_csv(std::ostringstream& csv, const std::string& family, int n,
                    const WeightedGraph& g, const Rat& eps, const std::string& variant,
                    long long seed, const std::string& status, const json& r) {
    bool has_ratio = r.contains("verification") && r["verification"].contains("ratio");
    const json& result = r["result"];
    csv << family << "," << n << "," << g.edge_count() << "," << max_degree(g) << ","
        << rat_str(eps) << "," << rat_double(eps) << "," << variant << "," << seed << ","
        << status << "," << result["cover_weight"].get<std::string>() << ","
        << result["cover_weight_float"].get<double>() << ","
        << (has_ratio ? r["verification"]["opt_weight"].get<std::string>() : "") << ","
        << (has_ratio ? r["verification"]["ratio"].get<std::string>() : "") << ","
        << (has_ratio ? std::to_string(r["verification"]["ratio_float"].get<double>()) : "")
        << "," << result["iterations_max"].get<int>() << ","
        << (result.contains("predicted_iteration_bound")
                ? result["predicted_iteration_bound"].get<std::string>()
                : "")
        << ","
        << (result.contains("predicted_iteration_bound_float")
                ? std::to_string(result["predicted_iteration_bound_float"].get<double>())
                : "")
        << ","
        << (result.contains("iteration_cap")
                ? std::to_string(result["iteration_cap"].get<long long>())
                : "")
        << ","
        << (result.contains("within_iteration_cap")
                ? (result["within_iteration_cap"].get<bool>() ? "true" : "false")
                : "")
        << "," << result["max_payload_bits"].get<int>() << ","
        << result["rounds_total"].get<int>() << ","
        << result["messages_total"].get<long long>() << "\n";
}

int cmd_run(const GraphSource& src, const std::string& eps_text,
            const std::string& variant_text, const std::string& schedule_text,
            std::optional<std::uint64_t> order_seed, long long round_cap, bool verify,
            const std::string& format, const std::string& out, const std::string& trace_out,
            bool no_meta) {
    std::string source;
    WeightedGraph g = load_graph(src, source);
    Rat eps = parse_rational(eps_text);
    Variant variant = parse_variant(variant_text);
    Schedule schedule = parse_schedule(schedule_text, g.n, src.seed);

    auto outcome = execute_run(g, source, eps, variant, schedule, order_seed, round_cap,
                               verify, !no_meta);
    if (!trace_out.empty()) write_output(trace_out, trace_to_jsonl(outcome.trace));

    if (format == "json") {
        write_output(out, outcome.report.dump(2) + "\n");
    } else if (format == "csv") {
        std::ostringstream csv;
        csv << kSweepHeader;
        append_row_csv(csv, source, g.n, g, eps, variant_text,
                       static_cast<long long>(src.seed),
                       outcome.verified_ok ? "ok" : "fail", outcome.report);
        write_output(out, csv.str());
    } else {
        throw ConfigError("--format must be json or csv");
    }
    return outcome.verified_ok ? 0 : 1;
}

int cmd_sweep(const GraphSource& src, const std::string& n_list, const std::string& eps_list,
              const std::string& variant_text, const std::string& seed_list,
              const std::string& format, const std::string& out, bool no_meta) {
    if (src.family.empty()) throw ConfigError("sweep needs --family");
    if (format != "csv" && format != "json")
        throw ConfigError("--format must be json or csv");
    auto ns = n_list.empty() ? std::vector<int>{src.n} : parse_int_list(n_list);
    auto epss = parse_rat_list(eps_list);
    auto seeds = seed_list.empty() ? std::vector<int>{static_cast<int>(src.seed)}
                                   : parse_int_list(seed_list);
    std::vector<Variant> variants;
    if (variant_text == "both")
        variants = {Variant::Local, Variant::Congest};
    else
        variants = {parse_variant(variant_text)};
    if (ns.empty() || epss.empty() || seeds.empty()) throw ConfigError("empty sweep grid");

    std::ostringstream csv;
    csv << kSweepHeader;
    json rows = json::array();
    long failures = 0;
    for (int n : ns)
        for (int seed : seeds)
            for (const Rat& eps : epss)
                for (Variant variant : variants) {
                    GraphSource row_src = src;
                    row_src.n = n;
                    row_src.seed = static_cast<std::uint64_t>(seed);
                    std::string source;
                    std::string status = "ok";
                    std::string variant_name = variant == Variant::Local ? "local" : "congest";
                    WeightedGraph g;
                    json report;
                    try {
                        g = load_graph(row_src, source);
                        auto outcome = execute_run(g, source, eps, variant, Schedule{},
                                                   std::nullopt, 0, true, false);
                        report = outcome.report;
                        if (!outcome.verified_ok) status = "fail";
                    } catch (const std::exception& e) {
                        status = "error";
                        std::cerr << "sweep row failed (" << src.family << " n=" << n
                                  << " seed=" << seed << " eps=" << rat_str(eps) << " "
                                  << variant_name << "): " << e.what() << "\n";
                    }
                    if (status != "ok") ++failures;
                    if (status == "error") continue;
                    if (format == "csv") {
                        append_row_csv(csv, src.family, n, g, eps, variant_name, seed, status,
                                       report);
                    } else {
                        json row = report;
                        row["status"] = status;
                        rows.push_back(row);
                    }
                }

    if (format == "csv") {
        write_output(out, csv.str());
    } else {
        json doc;
        if (!no_meta) doc["meta"] = {{"tool", "mwvcsim"}, {"version", kVersion}};
        doc["rows"] = rows;
        write_output(out, doc.dump(2) + "\n");
    }
    if (failures > 0) {
        std::cerr << failures << " sweep row(s) failed\n";
        return 1;
    }
    return 0;
}

int cmd_gen(const GraphSource& src, const std::string& out) {
    if (src.family.empty()) throw ConfigError("gen needs --family");
    if (out.empty()) throw ConfigError("gen needs --out");
    WeightedGraph g = generate(spec_from_source(src));
    write_output(out, emit_graph(g));
    return 0;
}

int cmd_bounds(const std::string& k_list, const std::string& log2n_text,
               const std::string& log2d_text, const std::string& eps_text,
               const std::string& d_text, const std::string& out, bool no_meta) {
    auto ks = parse_int_list(k_list);
    Rat eps = parse_rational(eps_text);
    std::optional<Rat> log2n, log2d;
    if (!log2n_text.empty()) log2n = parse_rational(log2n_text);
    if (!log2d_text.empty()) log2d = parse_rational(log2d_text);

    json doc;
    if (!no_meta) doc["meta"] = {{"tool", "mwvcsim"}, {"version", kVersion}};
    doc["eps"] = rat_str(eps);
    json rows = json::array();
    for (int k : ks) {
        if (k < 1) throw ConfigError("bounds needs k >= 1");
        json row;
        row["k"] = k;
        if (log2n) {
            Rat d = lower_bound_ratio_from_n(*log2n, k);
            row["log2_delta_n"] = rat_str(d);
            row["log2_delta_n_float"] = rat_double(d);
            row["feasible_n"] = k <= feasible_k_n(eps, *log2n);
        }
        if (log2d) {
            Rat d = lower_bound_ratio_from_degree(*log2d, k);
            row["log2_delta_Delta"] = rat_str(d);
            row["log2_delta_Delta_float"] = rat_double(d);
            row["feasible_Delta"] = k <= feasible_k_Delta(eps, *log2d);
        }
        rows.push_back(row);
    }
    if (log2n) doc["feasible_k_n"] = feasible_k_n(eps, *log2n);
    if (log2d) doc["feasible_k_Delta"] = feasible_k_Delta(eps, *log2d);
    if (!d_text.empty()) {
        json iteration_bounds = json::array();
        for (int d : parse_int_list(d_text)) {
            Rat bound = round_bound(d, eps);
            iteration_bounds.push_back({{"d", d},
                                        {"bound", rat_str(bound)},
                                        {"bound_float", rat_double(bound)},
                                        {"cap", ceil_to_ll(bound) + 1}});
        }
        doc["iteration_bounds"] = iteration_bounds;
    }
    doc["rows"] = rows;
    write_output(out, doc.dump(2) + "\n");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"deterministic simulator and verifier for distributed weighted vertex cover"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "run one simulation and verify it");
    GraphSource run_src;
    run_src.add_options(run);
    std::string run_eps = "1", run_variant = "local", run_schedule = "sim";
    std::string run_format = "json", run_out, run_trace_out;
    long long run_cap = 0;
    bool run_verify = true, run_no_meta = false;
    std::uint64_t order_seed_value = 0;
    auto* order_opt = run->add_option("--order-seed", order_seed_value,
                                      "permute request processing order with this seed");
    run->add_option("--eps", run_eps, "approximation parameter (rational or decimal)");
    run->add_option("--variant", run_variant, "local or congest");
    run->add_option("--schedule", run_schedule, "sim | stagger:MAX | v:round,v:round");
    run->add_option("--round-cap", run_cap, "override the default round cap");
    run->add_flag("--verify,!--no-verify", run_verify, "verify the run (default on)");
    run->add_option("--format", run_format, "json or csv");
    run->add_option("--out", run_out, "output path (default stdout)");
    run->add_option("--trace-out", run_trace_out, "write the message trace as JSON lines");
    run->add_flag("--no-meta", run_no_meta, "omit the metadata header");

    auto* sweep = app.add_subcommand("sweep", "run a parameter grid, one row per run");
    GraphSource sweep_src;
    sweep_src.add_options(sweep, false);
    std::string sweep_n, sweep_eps = "1", sweep_variant = "both", sweep_seeds;
    std::string sweep_format = "csv", sweep_out;
    bool sweep_no_meta = false;
    sweep->add_option("--n-list", sweep_n, "vertex counts, e.g. 3..11 or 4,8,12");
    sweep->add_option("--eps", sweep_eps, "comma list of epsilons");
    sweep->add_option("--variant", sweep_variant, "local, congest or both");
    sweep->add_option("--seeds", sweep_seeds, "seed list, e.g. 0..9");
    sweep->add_option("--format", sweep_format, "csv or json");
    sweep->add_option("--out", sweep_out, "output path (default stdout)");
    sweep->add_flag("--no-meta", sweep_no_meta, "omit the metadata header");

    auto* gen = app.add_subcommand("gen", "generate a graph file");
    GraphSource gen_src;
    gen_src.add_options(gen, false);
    std::string gen_out;
    gen->add_option("--out", gen_out, "output path ('-' for stdout)");

    auto* bounds = app.add_subcommand("bounds", "lower-bound arithmetic table");
    std::string b_k = "1..5", b_log2n, b_log2d, b_eps = "1", b_d, b_out;
    bool b_no_meta = false;
    bounds->add_option("--k", b_k, "k range, e.g. 1..5");
    bounds->add_option("--log2n", b_log2n, "log2 of the node count (rational)");
    bounds->add_option("--log2Delta", b_log2d, "log2 of the maximum degree (rational)");
    bounds->add_option("--eps", b_eps, "the lower-bound epsilon");
    bounds->add_option("--d", b_d, "also print iteration bounds for these degrees");
    bounds->add_option("--out", b_out, "output path (default stdout)");
    bounds->add_flag("--no-meta", b_no_meta, "omit the metadata header");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            std::optional<std::uint64_t> order_seed;
            if (order_opt->count() > 0) order_seed = order_seed_value;
            return cmd_run(run_src, run_eps, run_variant, run_schedule, order_seed, run_cap,
                           run_verify, run_format, run_out, run_trace_out, run_no_meta);
        }
        if (sweep->parsed())
            return cmd_sweep(sweep_src, sweep_n, sweep_eps, sweep_variant, sweep_seeds,
                             sweep_format, sweep_out, sweep_no_meta);
        if (gen->parsed()) return cmd_gen(gen_src, gen_out);
        if (bounds->parsed())
            return cmd_bounds(b_k, b_log2n, b_log2d, b_eps, b_d, b_out, b_no_meta);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const GraphParseError& e) {
        std::cerr << "graph error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
