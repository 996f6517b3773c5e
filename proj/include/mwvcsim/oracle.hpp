#pragma once

#include "mwvcsim/engine.hpp"
#include "mwvcsim/graph.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace mwvcsim {

/// The reconstructed edge payment function: per-edge totals plus the
/// per-iteration breakdown. Every edge of the source graph is present,
/// zero when nothing was granted across it.
struct EdgePayments {
    std::map<std::pair<int, int>, Rat> total;
    std::map<std::pair<int, int>, std::map<int, Rat>> per_iteration;

    const Rat& at(int u, int v) const;
    /// Sum of payments over edges touching v.
    Rat vertex_load(const WeightedGraph& g, int v) const;
};

/// Rebuilds the payment function from a trace: for every edge and iteration the
/// sum of effective grants in both directions. Throws if the trace references a
/// non-edge or a budget has no matching request.
EdgePayments extract_delta(const WeightedGraph& g, const Trace& t);

/// Vertices whose incident payments exceed their weight; empty means valid.
std::vector<int> check_g_valid(const WeightedGraph& g, const EdgePayments& p);

/// The threshold set {v | w(v) - load(v) <= eps' * w(v)} with eps' = eps/(2+eps).
/// Rejects payments that are not valid for the graph.
std::vector<int> compute_s_delta(const WeightedGraph& g, const EdgePayments& p, const Rat& eps);

/// True iff every edge has at least one endpoint in s.
bool check_cover(const WeightedGraph& g, const std::vector<int>& s);

struct CoverResult {
    std::vector<int> cover;  // sorted
    Rat weight;
    bool is_valid_cover = false;
    std::optional<Rat> ratio_vs;
};

/// Exact minimum weight vertex cover by branch and bound on the uncovered edge
/// with the largest endpoint degrees. Ties between optimal covers break toward
/// the lexicographically smallest vertex set. Capped at n = 24.
CoverResult brute_force_mwvc(const WeightedGraph& g);

/// Exact quotient; the optimum must be positive.
Rat approx_ratio(const Rat& cover_weight, const Rat& opt_weight);

/// Sequential reference: sweeps the edges in lexicographic order, reducing both
/// endpoint residuals by the smaller slack above the eps' threshold. Returns
/// the induced payments and the threshold set, which is always a vertex cover.
std::pair<EdgePayments, std::vector<int>> sequential_local_ratio(const WeightedGraph& g,
                                                                 const Rat& eps);

struct VertexIterationRow {
    int degree = 0;
    Rat weight;
};

/// Outcome of the independent trace replay.
struct TraceVerification {
    // Hard breaches: payment validity, cover property, threshold
    // characterization, conservation, caps, per-message consistency.
    std::vector<std::string> violations;
    // Per-iteration progress dichotomy, at the nominal constant eps'*w0/Kv for
    // both variants, and at the variant-adjusted constant (halved vault in the
    // congest variant, hence eps'*w0/(2 Kv) on the weight branch).
    std::vector<std::string> dichotomy_nominal;
    std::vector<std::string> dichotomy_adjusted;
    std::vector<int> in_cover;
    EdgePayments payments;
    std::vector<std::vector<VertexIterationRow>> history;  // per vertex, rows 0..j

    bool ok() const { return violations.empty(); }
};

/// Replays a finished trace against the graph alone: reconstructs every
/// vertex's degree and weight sequence from the messages, re-derives the
/// payments, and checks the full invariant battery.
TraceVerification verify_trace(const WeightedGraph& g, const Trace& t);

}  // namespace mwvcsim
