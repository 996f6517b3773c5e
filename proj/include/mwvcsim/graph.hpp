#pragma once

#include "mwvcsim/rational.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace mwvcsim {

/// Undirected simple graph with strictly positive rational vertex weights.
/// Immutable after construction by convention; safe to share across runs.
struct WeightedGraph {
    int n = 0;
    std::vector<Rat> weights;                   // indexed by vertex
    std::vector<std::pair<int, int>> edges;     // u < v, lexicographically sorted
    std::vector<std::vector<int>> adjacency;    // sorted neighbor lists

    int edge_count() const { return static_cast<int>(edges.size()); }
    int degree(int v) const { return static_cast<int>(adjacency[v].size()); }
    bool has_edge(int u, int v) const;
};

/// Builds a graph from parts, normalizing edge order and adjacency.
/// Throws std::invalid_argument on self-loops, duplicates, bad indices or
/// non-positive weights.
WeightedGraph make_graph(int n, std::vector<Rat> weights,
                         std::vector<std::pair<int, int>> edges);

struct GraphParseError : std::runtime_error {
    int line;
    GraphParseError(int line_, const std::string& what_)
        : std::runtime_error("line " + std::to_string(line_) + ": " + what_), line(line_) {}
};

/// Parses the text graph format:
///   line 1: "n m"; then n lines "<vertex> <weight>"; then m lines "<u> <v>" with u < v.
/// Weights may be integers, decimals or "p/q". '#' starts a comment, blank lines
/// are ignored. Errors carry the offending line number.
WeightedGraph parse_graph(const std::string& text);

/// Canonical text form; parse_graph(emit_graph(g)) reconstructs an equal graph.
std::string emit_graph(const WeightedGraph& g);

/// Returns human-readable invariant violations; empty means valid.
std::vector<std::string> validate(const WeightedGraph& g);

int max_degree(const WeightedGraph& g);

bool graphs_equal(const WeightedGraph& a, const WeightedGraph& b);

enum class Family {
    SingleEdge,
    Path,
    Cycle,
    Star,
    Complete,
    CompleteBipartite,
    ErdosRenyi,
    RandomBoundedDegree,
};

enum class WeightMode { Unit, UniformInteger, UniformRational };

struct GeneratorSpec {
    Family family = Family::Path;
    int n = 1;
    Rat edge_probability = Rat(1, 2);  // erdos_renyi only
    int degree_bound = 3;              // random_bounded_degree only
    WeightMode weight_mode = WeightMode::Unit;
    long weight_lo = 1;                // uniform_integer
    long weight_hi = 100;
    long denominator_bound = 16;       // uniform_rational
    std::uint64_t seed = 0;
};

/// Deterministic generator: identical spec and seed yield identical graphs.
WeightedGraph generate(const GeneratorSpec& spec);

std::string family_name(Family f);
Family family_from_name(const std::string& name);

}  // namespace mwvcsim
