#pragma once

#include "mwvcsim/rational.hpp"

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace mwvcsim {

enum class Variant { Local, Congest };

enum class VertexStatus { Running, InCover, NotInCover };

/// Protocol constants shared by all vertices of a run.
struct ProtocolParams {
    Rat epsilon;
    Rat epsilon_prime;  // epsilon / (2 + epsilon), maintained exactly
    Variant variant = Variant::Local;
    // When set, each vertex processes incoming requests in a per-vertex,
    // per-iteration seeded permutation instead of ascending index order.
    std::optional<std::uint64_t> order_seed;
};

ProtocolParams make_params(const Rat& epsilon, Variant variant,
                           std::optional<std::uint64_t> order_seed = std::nullopt);

/// One vertex's protocol state between phase operations.
struct VertexState {
    Rat w0;       // initial weight
    Rat w_cur;    // current residual weight
    Rat vault;    // eps' * w0, halved in the congest variant
    Rat bank;     // w_cur - vault at the top of each iteration
    std::vector<int> live;  // live neighbors, ascending
    int degree_cur = 0;
    int iteration = 0;      // completed iterations
    VertexStatus status = VertexStatus::Running;
    Rat granted_this_iter;  // sum of budgets granted in the current iteration
};

/// Initial state. A vertex without neighbors resolves to NotInCover right away.
VertexState init_vertex(const Rat& w, std::vector<int> neighbors, const ProtocolParams& p);

struct RequestBatch {
    std::vector<std::pair<int, Rat>> amounts;  // local variant: per-neighbor amounts
    int degree = 0;                            // congest variant: broadcast payload
};

/// Starts an iteration: recomputes the bank and produces the outgoing requests.
/// Local: each live neighbor is asked for vault/degree (the amounts sum to the
/// vault exactly). Congest: only the current degree is broadcast; receivers
/// derive the amount from the initially announced weight.
RequestBatch make_requests(VertexState& s, const ProtocolParams& p);

/// Amount a congest-variant receiver derives from a degree announcement.
Rat congest_request_amount(const Rat& w0_of_requester, int degree, const ProtocolParams& p);

/// Grant quantum for congest-variant partial responses: eps' * w0 / 2.
Rat congest_quantum(const Rat& w0_of_granter, const ProtocolParams& p);

enum class GrantForm { Exact, Accept, Quantized };

struct Grant {
    int neighbor;
    Rat amount;  // effective amount recorded by both endpoints
    GrantForm form;
    long long quantum_count = 0;  // Quantized only
};

/// Answers the incoming requests, in the given order, each granted
/// min(request, remaining bank). The bank and current weight shrink by the
/// granted total. Congest responses are Accept when the full request is
/// granted, else the largest quantum multiple that fits the remaining bank.
std::vector<Grant> grant_budgets(VertexState& s,
                                 const std::vector<std::pair<int, Rat>>& requests,
                                 const ProtocolParams& p);

struct BudgetResponse {
    int neighbor;
    Rat amount;  // effective granted amount
    bool full;   // grant == request
};

/// Applies the responses to this vertex's own requests: subtracts the granted
/// amounts from the current weight and drops neighbors that granted less than
/// asked. Completes the iteration counter.
void absorb_budgets(VertexState& s, const std::vector<BudgetResponse>& responses);

struct FinalizeResult {
    VertexStatus status;
    std::vector<int> notice_targets;  // InCover only
};

/// End-of-iteration resolution. The threshold test w_cur <= eps'*w0 (same test
/// in both variants) runs first; otherwise the cover notices received are
/// removed from the live set before the degree-zero test.
FinalizeResult finalize_iteration(VertexState& s, const std::vector<int>& cover_notices,
                                  const ProtocolParams& p);

/// Analysis-only progress parameter: d+1 for d <= 16, else log2(d)/log2(log2(d)).
/// Exact when both logs are integral, otherwise the nearest double as an exact
/// dyadic rational. Never computed by the protocol itself.
Rat kv_parameter(int d);

}  // namespace mwvcsim
