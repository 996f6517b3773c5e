// Python bindings: thin wrappers over the core operations. Structured results
// come back as JSON strings so exact rationals survive the crossing; the
// package wrapper decodes them.

#include "mwvcsim/bounds.hpp"
#include "mwvcsim/engine.hpp"
#include "mwvcsim/graph.hpp"
#include "mwvcsim/oracle.hpp"
#include "mwvcsim/protocol.hpp"

#include <json.hpp>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <optional>

namespace py = pybind11;
using json = nlohmann::ordered_json;
using namespace mwvcsim;

namespace {

GeneratorSpec build_spec(const std::string& family, int n, const std::string& weights,
                         std::uint64_t seed, const std::string& p, int dmax) {
    GeneratorSpec spec;
    spec.family = family_from_name(family);
    spec.n = n;
    spec.seed = seed;
    spec.edge_probability = parse_rational(p);
    spec.degree_bound = dmax;
    if (weights == "unit") {
        spec.weight_mode = WeightMode::Unit;
    } else if (weights.rfind("int:", 0) == 0) {
        auto rest = weights.substr(4);
        auto colon = rest.find(':');
        if (colon == std::string::npos)
            throw std::invalid_argument("weights must be unit, int:LO:HI or rat:BOUND");
        spec.weight_mode = WeightMode::UniformInteger;
        spec.weight_lo = std::stol(rest.substr(0, colon));
        spec.weight_hi = std::stol(rest.substr(colon + 1));
    } else if (weights.rfind("rat:", 0) == 0) {
        spec.weight_mode = WeightMode::UniformRational;
        spec.denominator_bound = std::stol(weights.substr(4));
    } else {
        throw std::invalid_argument("weights must be unit, int:LO:HI or rat:BOUND");
    }
    return spec;
}

Variant variant_from(const std::string& name) {
    if (name == "local") return Variant::Local;
    if (name == "congest") return Variant::Congest;
    throw std::invalid_argument("variant must be local or congest");
}

std::string run_json(const std::string& graph_text, const std::string& eps_text,
                     const std::string& variant_text,
                     const std::optional<std::map<int, int>>& schedule_map,
                     std::optional<std::uint64_t> order_seed, long long round_cap,
                     bool verify, bool with_trace) {
    WeightedGraph g = parse_graph(graph_text);
    Rat eps = parse_rational(eps_text);
    Variant variant = variant_from(variant_text);
    auto params = make_params(eps, variant, order_seed);

    Schedule schedule;
    if (schedule_map && !schedule_map->empty()) {
        schedule.activation.assign(static_cast<size_t>(g.n), 0);
        for (const auto& [v, round] : *schedule_map) {
            if (v < 0 || v >= g.n) throw std::invalid_argument("schedule vertex out of range");
            schedule.activation[static_cast<size_t>(v)] = round;
        }
    }
    if (round_cap <= 0) {
        int max_act = 0;
        for (int a : schedule.activation) max_act = std::max(max_act, a);
        round_cap = default_round_cap(g, eps, max_act);
    }

    auto [trace, rep] = run_simulation(g, params, schedule, round_cap);

    json r;
    r["graph"] = {{"n", g.n}, {"m", g.edge_count()}, {"max_degree", max_degree(g)}};
    r["config"] = {{"eps", rat_str(eps)},
                   {"eps_prime", rat_str(params.epsilon_prime)},
                   {"variant", variant_text},
                   {"round_cap", round_cap}};
    r["cover"] = rep.cover;
    r["cover_weight"] = rat_str(rep.cover_weight);
    r["cover_weight_float"] = rat_double(rep.cover_weight);
    r["iterations"] = rep.iterations;
    r["rounds"] = rep.rounds_after_activation;
    r["messages_total"] = rep.total_messages;
    r["max_payload_bits"] = rep.max_payload_bits;

    if (verify) {
        auto check = verify_trace(g, trace);
        json ver;
        ver["violations"] = check.violations;
        ver["payment_valid"] = check_g_valid(g, check.payments).empty();
        ver["cover_valid"] = check_cover(g, rep.cover);
        ver["dichotomy_adjusted_ok"] = check.dichotomy_adjusted.empty();
        ver["dichotomy_nominal_ok"] = check.dichotomy_nominal.empty();
        bool ok = check.violations.empty() && check.dichotomy_adjusted.empty() &&
                  check_cover(g, rep.cover);
        if (g.n <= 24) {
            auto opt = brute_force_mwvc(g);
            ver["opt_weight"] = rat_str(opt.weight);
            ver["opt_cover"] = opt.cover;
            if (opt.weight > 0) {
                Rat ratio = approx_ratio(rep.cover_weight, opt.weight);
                ver["ratio"] = rat_str(ratio);
                ver["ratio_float"] = rat_double(ratio);
                ver["within_ratio_bound"] = ratio <= Rat(2) + eps;
                ok = ok && ratio <= Rat(2) + eps;
            }
        }
        ver["ok"] = ok;
        r["verification"] = ver;
    }
    if (with_trace) r["trace_jsonl"] = trace_to_jsonl(trace);
    return r.dump();
}

std::string brute_force_json(const std::string& graph_text) {
    WeightedGraph g = parse_graph(graph_text);
    auto result = brute_force_mwvc(g);
    json r;
    r["cover"] = result.cover;
    r["weight"] = rat_str(result.weight);
    r["weight_float"] = rat_double(result.weight);
    return r.dump();
}

std::string sequential_json(const std::string& graph_text, const std::string& eps_text) {
    WeightedGraph g = parse_graph(graph_text);
    Rat eps = parse_rational(eps_text);
    auto [payments, set] = sequential_local_ratio(g, eps);
    Rat weight = 0;
    for (int v : set) weight += g.weights[v];
    json r;
    r["cover"] = set;
    r["weight"] = rat_str(weight);
    r["weight_float"] = rat_double(weight);
    r["payment_valid"] = check_g_valid(g, payments).empty();
    r["cover_valid"] = check_cover(g, set);
    r["matches_threshold_set"] = compute_s_delta(g, payments, eps) == set;
    json pay = json::object();
    for (const auto& [e, value] : payments.total)
        pay[std::to_string(e.first) + "-" + std::to_string(e.second)] = rat_str(value);
    r["payments"] = pay;
    return r.dump();
}

std::string bound_json(int d, const std::string& eps_text) {
    Rat eps = parse_rational(eps_text);
    Rat bound = round_bound(d, eps);
    json r;
    r["bound"] = rat_str(bound);
    r["bound_float"] = rat_double(bound);
    r["cap"] = ceil_to_ll(bound) + 1;
    r["kv"] = rat_str(kv_parameter(d));
    return r.dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "deterministic simulator and verifier for distributed weighted vertex cover";

    m.def("generate_graph",
          [](const std::string& family, int n, const std::string& weights, std::uint64_t seed,
             const std::string& p, int dmax) {
              return emit_graph(generate(build_spec(family, n, weights, seed, p, dmax)));
          },
          py::arg("family"), py::arg("n"), py::arg("weights") = "unit", py::arg("seed") = 0,
          py::arg("p") = "0.5", py::arg("dmax") = 3,
          "Generate a graph deterministically and return its text form.");

    m.def("canonicalize_graph",
          [](const std::string& text) { return emit_graph(parse_graph(text)); },
          py::arg("text"), "Parse a graph file and re-emit it canonically.");

    m.def("run", &run_json, py::arg("graph"), py::arg("eps") = "1",
          py::arg("variant") = "local", py::arg("schedule") = py::none(),
          py::arg("order_seed") = py::none(), py::arg("round_cap") = 0,
          py::arg("verify") = true, py::arg("with_trace") = false,
          "Simulate one run and return the report as a JSON string.");

    m.def("brute_force", &brute_force_json, py::arg("graph"),
          "Exact minimum weight vertex cover (n <= 24), as a JSON string.");

    m.def("sequential", &sequential_json, py::arg("graph"), py::arg("eps") = "1",
          "Sequential reference reduction, as a JSON string.");

    m.def("round_bound", &bound_json, py::arg("d"), py::arg("eps") = "1",
          "Iteration bound for a vertex of degree d, as a JSON string.");

    m.def("lower_bound_ratio_from_n",
          [](const std::string& log2n, int k) {
              return rat_str(lower_bound_ratio_from_n(parse_rational(log2n), k));
          },
          py::arg("log2n"), py::arg("k"));

    m.def("lower_bound_ratio_from_degree",
          [](const std::string& log2Delta, int k) {
              return rat_str(lower_bound_ratio_from_degree(parse_rational(log2Delta), k));
          },
          py::arg("log2Delta"), py::arg("k"));

    m.def("feasible_k_n",
          [](const std::string& eps, const std::string& log2n) {
              return feasible_k_n(parse_rational(eps), parse_rational(log2n));
          },
          py::arg("eps"), py::arg("log2n"));

    m.def("feasible_k_delta",
          [](const std::string& eps, const std::string& log2Delta) {
              return feasible_k_Delta(parse_rational(eps), parse_rational(log2Delta));
          },
          py::arg("eps"), py::arg("log2Delta"));

    m.attr("__version__") = "0.1.0";
}
