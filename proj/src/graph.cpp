#include "mwvcsim/graph.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <sstream>

namespace mwvcsim {

bool WeightedGraph::has_edge(int u, int v) const {
    if (u > v) std::swap(u, v);
    return std::binary_search(edges.begin(), edges.end(), std::make_pair(u, v));
}

WeightedGraph make_graph(int n, std::vector<Rat> weights,
                         std::vector<std::pair<int, int>> edges) {
    if (n < 0) throw std::invalid_argument("vertex count must be non-negative");
    if (static_cast<int>(weights.size()) != n)
        throw std::invalid_argument("weight count does not match vertex count");
    for (int v = 0; v < n; ++v)
        if (weights[v] <= 0)
            throw std::invalid_argument("vertex " + std::to_string(v) + " has non-positive weight");
    for (auto& e : edges) {
        if (e.first > e.second) std::swap(e.first, e.second);
        if (e.first == e.second)
            throw std::invalid_argument("self-loop at vertex " + std::to_string(e.first));
        if (e.first < 0 || e.second >= n)
            throw std::invalid_argument("edge endpoint out of range");
    }
    std::sort(edges.begin(), edges.end());
    if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
        throw std::invalid_argument("duplicate edge");

    WeightedGraph g;
    g.n = n;
    g.weights = std::move(weights);
    g.edges = std::move(edges);
    g.adjacency.assign(n, {});
    for (auto& [u, v] : g.edges) {
        g.adjacency[u].push_back(v);
        g.adjacency[v].push_back(u);
    }
    for (auto& nb : g.adjacency) std::sort(nb.begin(), nb.end());
    return g;
}

namespace {

// Strips comments, returns trimmed payload lines with their 1-based numbers.
std::vector<std::pair<int, std::string>> payload_lines(const std::string& text) {
    std::vector<std::pair<int, std::string>> out;
    std::istringstream in(text);
    std::string line;
    int no = 0;
    while (std::getline(in, line)) {
        ++no;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        size_t a = line.find_first_not_of(" \t\r");
        if (a == std::string::npos) continue;
        size_t b = line.find_last_not_of(" \t\r");
        out.emplace_back(no, line.substr(a, b - a + 1));
    }
    return out;
}

std::vector<std::string> split_fields(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

bool parse_int(const std::string& s, long long& out) {
    if (s.empty()) return false;
    size_t i = 0;
    for (; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    try {
        out = std::stoll(s);
    } catch (...) {
        return false;
    }
    return true;
}

}  // namespace

WeightedGraph parse_graph(const std::string& text) {
    auto lines = payload_lines(text);
    size_t idx = 0;
    auto next_line = [&](const char* what) -> std::pair<int, std::string> {
        if (idx >= lines.size())
            throw GraphParseError(lines.empty() ? 1 : lines.back().first,
                                  std::string("unexpected end of file, expected ") + what);
        return lines[idx++];
    };

    auto [hline, header] = next_line("header \"n m\"");
    auto hf = split_fields(header);
    long long n = 0, m = 0;
    if (hf.size() != 2 || !parse_int(hf[0], n) || !parse_int(hf[1], m))
        throw GraphParseError(hline, "malformed header, expected \"n m\"");
    if (n < 0 || m < 0) throw GraphParseError(hline, "negative counts in header");

    std::vector<Rat> weights(static_cast<size_t>(n));
    std::vector<bool> seen(static_cast<size_t>(n), false);
    for (long long i = 0; i < n; ++i) {
        auto [lno, line] = next_line("vertex weight line");
        auto f = split_fields(line);
        long long v = 0;
        if (f.size() != 2 || !parse_int(f[0], v))
            throw GraphParseError(lno, "malformed weight line, expected \"<vertex> <weight>\"");
        if (v < 0 || v >= n)
            throw GraphParseError(lno, "vertex index " + std::to_string(v) + " out of range");
        if (seen[static_cast<size_t>(v)])
            throw GraphParseError(lno, "duplicate weight for vertex " + std::to_string(v));
        Rat w;
        try {
            w = parse_rational(f[1]);
        } catch (const std::invalid_argument&) {
            throw GraphParseError(lno, "malformed weight '" + f[1] + "'");
        }
        if (w <= 0)
            throw GraphParseError(lno, "non-positive weight for vertex " + std::to_string(v));
        weights[static_cast<size_t>(v)] = w;
        seen[static_cast<size_t>(v)] = true;
    }

    std::vector<std::pair<int, int>> edges;
    std::set<std::pair<int, int>> edge_set;
    for (long long i = 0; i < m; ++i) {
        auto [lno, line] = next_line("edge line");
        auto f = split_fields(line);
        long long u = 0, v = 0;
        if (f.size() != 2 || !parse_int(f[0], u) || !parse_int(f[1], v))
            throw GraphParseError(lno, "malformed edge line, expected \"<u> <v>\"");
        if (u < 0 || u >= n || v < 0 || v >= n)
            throw GraphParseError(lno, "edge endpoint out of range");
        if (u == v) throw GraphParseError(lno, "self-loop at vertex " + std::to_string(u));
        if (u > v) throw GraphParseError(lno, "edge endpoints must satisfy u < v");
        auto e = std::make_pair(static_cast<int>(u), static_cast<int>(v));
        if (!edge_set.insert(e).second)
            throw GraphParseError(lno, "duplicate edge " + std::to_string(u) + " " + std::to_string(v));
        edges.push_back(e);
    }
    if (idx < lines.size())
        throw GraphParseError(lines[idx].first, "unexpected extra line");

    return make_graph(static_cast<int>(n), std::move(weights), std::move(edges));
}

std::string emit_graph(const WeightedGraph& g) {
    std::ostringstream out;
    out << g.n << " " << g.edge_count() << "\n";
    for (int v = 0; v < g.n; ++v) out << v << " " << rat_str(g.weights[v]) << "\n";
    for (auto& [u, v] : g.edges) out << u << " " << v << "\n";
    return out.str();
}

std::vector<std::string> validate(const WeightedGraph& g) {
    std::vector<std::string> bad;
    if (static_cast<int>(g.weights.size()) != g.n)
        bad.push_back("weight vector size differs from vertex count");
    if (static_cast<int>(g.adjacency.size()) != g.n)
        bad.push_back("adjacency size differs from vertex count");
    for (int v = 0; v < g.n && v < static_cast<int>(g.weights.size()); ++v)
        if (g.weights[v] <= 0)
            bad.push_back("vertex " + std::to_string(v) + " has non-positive weight");

    std::set<std::pair<int, int>> edge_set;
    for (auto& [u, v] : g.edges) {
        if (u == v) bad.push_back("self-loop at vertex " + std::to_string(u));
        if (u > v) bad.push_back("edge (" + std::to_string(u) + "," + std::to_string(v) + ") not normalized");
        if (u < 0 || v >= g.n) bad.push_back("edge endpoint out of range");
        if (!edge_set.insert({std::min(u, v), std::max(u, v)}).second)
            bad.push_back("duplicate edge (" + std::to_string(u) + "," + std::to_string(v) + ")");
    }
    if (static_cast<int>(g.adjacency.size()) == g.n) {
        std::set<std::pair<int, int>> adj_set;
        bool range_ok = true;
        for (int v = 0; v < g.n; ++v) {
            for (int u : g.adjacency[v]) {
                if (u < 0 || u >= g.n || u == v) {
                    bad.push_back("adjacency of vertex " + std::to_string(v) + " has invalid entry");
                    range_ok = false;
                    continue;
                }
                adj_set.insert({std::min(u, v), std::max(u, v)});
                if (!std::binary_search(g.adjacency[u].begin(), g.adjacency[u].end(), v))
                    bad.push_back("adjacency asymmetric between " + std::to_string(v) + " and " +
                                  std::to_string(u));
            }
            if (!std::is_sorted(g.adjacency[v].begin(), g.adjacency[v].end()))
                bad.push_back("adjacency of vertex " + std::to_string(v) + " not sorted");
        }
        if (range_ok && adj_set != edge_set)
            bad.push_back("adjacency inconsistent with edge set");
    }
    return bad;
}

int max_degree(const WeightedGraph& g) {
    int d = 0;
    for (int v = 0; v < g.n; ++v) d = std::max(d, g.degree(v));
    return d;
}

bool graphs_equal(const WeightedGraph& a, const WeightedGraph& b) {
    return a.n == b.n && a.weights == b.weights && a.edges == b.edges;
}

namespace {

// Unbiased bounded draw on top of the (standard-specified) mt19937_64 stream.
std::uint64_t draw_below(std::mt19937_64& rng, std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("draw_below: zero bound");
    std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
        std::uint64_t r = rng();
        if (r >= threshold) return r % bound;
    }
}

std::vector<Rat> draw_weights(const GeneratorSpec& spec, int n, std::mt19937_64& rng) {
    std::vector<Rat> w(static_cast<size_t>(n));
    switch (spec.weight_mode) {
        case WeightMode::Unit:
            for (auto& x : w) x = 1;
            break;
        case WeightMode::UniformInteger: {
            if (spec.weight_lo < 1 || spec.weight_hi < spec.weight_lo)
                throw std::invalid_argument("uniform_integer needs 1 <= lo <= hi");
            std::uint64_t span = static_cast<std::uint64_t>(spec.weight_hi - spec.weight_lo + 1);
            for (auto& x : w) x = Rat(spec.weight_lo + static_cast<long>(draw_below(rng, span)));
            break;
        }
        case WeightMode::UniformRational: {
            if (spec.denominator_bound < 1)
                throw std::invalid_argument("uniform_rational needs denominator bound >= 1");
            std::uint64_t b = static_cast<std::uint64_t>(spec.denominator_bound);
            for (auto& x : w) {
                long num = 1 + static_cast<long>(draw_below(rng, b));
                long den = 1 + static_cast<long>(draw_below(rng, b));
                x = Rat(num, den);
            }
            break;
        }
    }
    return w;
}

}  // namespace

WeightedGraph generate(const GeneratorSpec& spec) {
    if (spec.n < 1) throw std::invalid_argument("generator needs n >= 1");
    const int n = spec.n;
    std::mt19937_64 rng(spec.seed);
    std::vector<std::pair<int, int>> edges;

    switch (spec.family) {
        case Family::SingleEdge:
            if (n != 2) throw std::invalid_argument("single_edge needs n = 2");
            edges.push_back({0, 1});
            break;
        case Family::Path:
            for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1});
            break;
        case Family::Cycle:
            if (n < 3) throw std::invalid_argument("cycle needs n >= 3");
            for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1});
            edges.push_back({0, n - 1});
            break;
        case Family::Star:
            for (int i = 1; i < n; ++i) edges.push_back({0, i});
            break;
        case Family::Complete:
            for (int u = 0; u < n; ++u)
                for (int v = u + 1; v < n; ++v) edges.push_back({u, v});
            break;
        case Family::CompleteBipartite: {
            if (n < 2) throw std::invalid_argument("complete_bipartite needs n >= 2");
            int a = n / 2;
            for (int u = 0; u < a; ++u)
                for (int v = a; v < n; ++v) edges.push_back({u, v});
            break;
        }
        case Family::ErdosRenyi: {
            if (spec.edge_probability < 0 || spec.edge_probability > 1)
                throw std::invalid_argument("erdos_renyi needs 0 <= p <= 1");
            // r/2^64 < p compared exactly; one draw per pair keeps the stream stable
            BigInt two64 = BigInt(1) << 64;
            for (int u = 0; u < n; ++u)
                for (int v = u + 1; v < n; ++v) {
                    BigInt r(rng());
                    if (Rat(r, two64) < spec.edge_probability) edges.push_back({u, v});
                }
            break;
        }
        case Family::RandomBoundedDegree: {
            if (spec.degree_bound < 0)
                throw std::invalid_argument("random_bounded_degree needs d_max >= 0");
            std::vector<std::pair<int, int>> pairs;
            for (int u = 0; u < n; ++u)
                for (int v = u + 1; v < n; ++v) pairs.push_back({u, v});
            for (size_t i = pairs.size(); i > 1; --i)
                std::swap(pairs[i - 1], pairs[draw_below(rng, i)]);
            std::vector<int> deg(static_cast<size_t>(n), 0);
            for (auto& [u, v] : pairs)
                if (deg[u] < spec.degree_bound && deg[v] < spec.degree_bound) {
                    edges.push_back({u, v});
                    ++deg[u];
                    ++deg[v];
                }
            break;
        }
    }

    auto weights = draw_weights(spec, n, rng);
    return make_graph(n, std::move(weights), std::move(edges));
}

std::string family_name(Family f) {
    switch (f) {
        case Family::SingleEdge: return "single_edge";
        case Family::Path: return "path";
        case Family::Cycle: return "cycle";
        case Family::Star: return "star";
        case Family::Complete: return "complete";
        case Family::CompleteBipartite: return "complete_bipartite";
        case Family::ErdosRenyi: return "erdos_renyi";
        case Family::RandomBoundedDegree: return "random_bounded_degree";
    }
    return "?";
}

Family family_from_name(const std::string& name) {
    for (Family f : {Family::SingleEdge, Family::Path, Family::Cycle, Family::Star,
                     Family::Complete, Family::CompleteBipartite, Family::ErdosRenyi,
                     Family::RandomBoundedDegree})
        if (family_name(f) == name) return f;
    throw std::invalid_argument("unknown graph family '" + name + "'");
}

}  // namespace mwvcsim
