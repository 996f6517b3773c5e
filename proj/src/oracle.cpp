#include "mwvcsim/oracle.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace mwvcsim {

const Rat& EdgePayments::at(int u, int v) const {
    if (u > v) std::swap(u, v);
    auto it = total.find({u, v});
    if (it == total.end()) throw std::invalid_argument("payment lookup on a non-edge");
    return it->second;
}

Rat EdgePayments::vertex_load(const WeightedGraph& g, int v) const {
    Rat load = 0;
    for (int u : g.adjacency[v]) load += at(u, v);
    return load;
}

namespace {

struct TraceIndex {
    // (src, dst, iteration) -> request message
    std::map<std::tuple<int, int, int>, const Message*> request_at;
    // (src, iteration) -> all request messages that vertex sent
    std::map<std::pair<int, int>, std::vector<const Message*>> requests_by_src;
    // dst -> (src, delivery round) of cover notices
    std::map<int, std::vector<std::pair<int, int>>> notices_to;
    std::vector<const Message*> budgets;

    explicit TraceIndex(const Trace& t) {
        for (const auto& m : t.messages) {
            switch (m.kind) {
                case MsgKind::Request:
                case MsgKind::RequestDegree:
                    request_at[{m.src, m.dst, m.iteration_tag}] = &m;
                    requests_by_src[{m.src, m.iteration_tag}].push_back(&m);
                    break;
                case MsgKind::BudgetExact:
                case MsgKind::BudgetAccept:
                case MsgKind::BudgetQuantized:
                    budgets.push_back(&m);
                    break;
                case MsgKind::CoverNotice:
                    notices_to[m.dst].push_back({m.src, m.round});
                    break;
                case MsgKind::InitialWeight:
                    break;
            }
        }
    }

    const Message* matching_request(const Message& budget) const {
        auto it = request_at.find({budget.dst, budget.src, budget.iteration_tag});
        return it == request_at.end() ? nullptr : it->second;
    }
};

// Effective amount both endpoints record for a budget message.
Rat effective_grant(const Message& b, const TraceIndex& index, const WeightedGraph& g,
                    const ProtocolParams& p) {
    switch (b.kind) {
        case MsgKind::BudgetExact:
            return b.amount;
        case MsgKind::BudgetAccept: {
            const Message* req = index.matching_request(b);
            if (!req) throw std::invalid_argument("budget acceptance without a matching request");
            if (p.variant == Variant::Local) return req->amount;
            return congest_request_amount(g.weights[b.dst], static_cast<int>(req->ivalue), p);
        }
        case MsgKind::BudgetQuantized:
            return Rat(b.ivalue) * congest_quantum(g.weights[b.src], p);
        default:
            throw std::invalid_argument("not a budget message");
    }
}

Rat vault_of(const WeightedGraph& g, int v, const ProtocolParams& p) {
    Rat vault = p.epsilon_prime * g.weights[v];
    if (p.variant == Variant::Congest) vault /= 2;
    return vault;
}

}  // namespace

EdgePayments extract_delta(const WeightedGraph& g, const Trace& t) {
    EdgePayments pay;
    for (const auto& [u, v] : g.edges) pay.total[{u, v}] = 0;
    TraceIndex index(t);
    for (const auto& m : t.messages) {
        if (m.src == m.dst) throw std::invalid_argument("message with src == dst");
        if (!g.has_edge(m.src, m.dst))
            throw std::invalid_argument("trace references a non-edge (" + std::to_string(m.src) +
                                        "," + std::to_string(m.dst) + ")");
    }
    for (const Message* b : index.budgets) {
        Rat amount = effective_grant(*b, index, g, t.params);
        if (amount < 0) throw std::invalid_argument("negative budget amount in trace");
        auto e = std::minmax(b->src, b->dst);
        pay.total[{e.first, e.second}] += amount;
        pay.per_iteration[{e.first, e.second}][b->iteration_tag] += amount;
    }
    return pay;
}

std::vector<int> check_g_valid(const WeightedGraph& g, const EdgePayments& p) {
    std::vector<int> violating;
    for (int v = 0; v < g.n; ++v)
        if (p.vertex_load(g, v) > g.weights[v]) violating.push_back(v);
    return violating;
}

std::vector<int> compute_s_delta(const WeightedGraph& g, const EdgePayments& p, const Rat& eps) {
    if (eps <= 0) throw std::invalid_argument("epsilon must be positive");
    if (!check_g_valid(g, p).empty())
        throw std::invalid_argument("payments are not valid for the graph");
    Rat eps_prime = eps / (2 + eps);
    std::vector<int> s;
    for (int v = 0; v < g.n; ++v) {
        Rat residual = g.weights[v] - p.vertex_load(g, v);
        if (residual <= eps_prime * g.weights[v]) s.push_back(v);
    }
    return s;
}

bool check_cover(const WeightedGraph& g, const std::vector<int>& s) {
    std::vector<bool> in(static_cast<size_t>(g.n), false);
    for (int v : s)
        if (v >= 0 && v < g.n) in[static_cast<size_t>(v)] = true;
    for (const auto& [u, v] : g.edges)
        if (!in[static_cast<size_t>(u)] && !in[static_cast<size_t>(v)]) return false;
    return true;
}

namespace {

struct BranchAndBound {
    const WeightedGraph& g;
    std::vector<char> state;  // 0 undecided, 1 in, 2 out
    Rat cur_weight;
    Rat best_weight;
    std::vector<int> best;
    bool have_best = false;

    explicit BranchAndBound(const WeightedGraph& graph)
        : g(graph), state(static_cast<size_t>(graph.n), 0), cur_weight(0) {}

    bool pick_edge(int& pu, int& pv) const {
        int best_score = -1;
        bool found = false;
        for (const auto& [u, v] : g.edges) {
            if (state[u] == 1 || state[v] == 1) continue;
            int score = g.degree(u) + g.degree(v);
            if (score > best_score) {
                best_score = score;
                pu = u;
                pv = v;
                found = true;
            }
        }
        return found;
    }

    void take_leaf() {
        std::vector<int> cover;
        for (int v = 0; v < g.n; ++v)
            if (state[v] == 1) cover.push_back(v);
        if (!have_best || cur_weight < best_weight ||
            (cur_weight == best_weight && cover < best)) {
            best = std::move(cover);
            best_weight = cur_weight;
            have_best = true;
        }
    }

    void include(int v, std::vector<int>& undo) {
        state[v] = 1;
        cur_weight += g.weights[v];
        undo.push_back(v);
    }

    void undo_all(std::vector<int>& undo) {
        for (int x : undo) {
            state[x] = 0;
            cur_weight -= g.weights[x];
        }
        undo.clear();
    }

    void search() {
        if (have_best && cur_weight > best_weight) return;  // ties kept for lex order
        int u = -1, v = -1;
        if (!pick_edge(u, v)) {
            take_leaf();
            return;
        }
        if (state[u] == 2 && state[v] == 2) return;  // uncoverable
        if (state[u] == 0) {
            std::vector<int> undo;
            include(u, undo);
            search();
            undo_all(undo);
        }
        // u stays out: every undecided neighbor of u must go in
        bool feasible = true;
        bool marked = false;
        std::vector<int> undo;
        if (state[u] == 0) {
            state[u] = 2;
            marked = true;
        }
        for (int y : g.adjacency[u]) {
            if (state[y] == 1) continue;
            if (state[y] == 2) {
                feasible = false;
                break;
            }
            include(y, undo);
        }
        if (feasible) search();
        undo_all(undo);
        if (marked) state[u] = 0;
    }
};

}  // namespace

CoverResult brute_force_mwvc(const WeightedGraph& g) {
    if (g.n > 24) throw std::invalid_argument("exact solver capped at n = 24");
    BranchAndBound bnb(g);
    bnb.search();
    CoverResult result;
    result.cover = bnb.best;
    result.weight = bnb.best_weight;
    result.is_valid_cover = check_cover(g, result.cover);
    return result;
}

Rat approx_ratio(const Rat& cover_weight, const Rat& opt_weight) {
    if (opt_weight <= 0) throw std::invalid_argument("optimum weight must be positive");
    return cover_weight / opt_weight;
}

std::pair<EdgePayments, std::vector<int>> sequential_local_ratio(const WeightedGraph& g,
                                                                 const Rat& eps) {
    if (eps <= 0) throw std::invalid_argument("epsilon must be positive");
    Rat eps_prime = eps / (2 + eps);
    std::vector<Rat> residual = g.weights;
    EdgePayments pay;
    for (const auto& [u, v] : g.edges) pay.total[{u, v}] = 0;
    for (const auto& [u, v] : g.edges) {  // lexicographic order
        Rat tu = eps_prime * g.weights[u];
        Rat tv = eps_prime * g.weights[v];
        if (residual[u] <= tu || residual[v] <= tv) continue;  // edge already covered
        Rat reduce = std::min(residual[u] - tu, residual[v] - tv);
        residual[u] -= reduce;
        residual[v] -= reduce;
        pay.total[{u, v}] += reduce;
        pay.per_iteration[{u, v}][0] += reduce;
    }
    std::vector<int> threshold_set;
    for (int v = 0; v < g.n; ++v)
        if (residual[v] <= eps_prime * g.weights[v]) threshold_set.push_back(v);
    return {std::move(pay), std::move(threshold_set)};
}

namespace {

std::string vname(int v) { return "vertex " + std::to_string(v); }

}  // namespace

TraceVerification verify_trace(const WeightedGraph& g, const Trace& t) {
    TraceVerification out;
    const ProtocolParams& p = t.params;
    TraceIndex index(t);

    auto fail = [&out](const std::string& s) { out.violations.push_back(s); };

    // structural checks
    int prev_round = -1;
    for (const auto& m : t.messages) {
        if (m.round < prev_round) fail("messages out of round order");
        prev_round = m.round;
        if (m.src == m.dst) fail("message with src == dst");
        else if (!g.has_edge(m.src, m.dst))
            fail("message across a non-edge (" + std::to_string(m.src) + "," +
                 std::to_string(m.dst) + ")");
        if (m.kind == MsgKind::InitialWeight && m.amount != g.weights[m.src])
            fail(vname(m.src) + " announced a wrong initial weight");
        if ((m.kind == MsgKind::Request || m.kind == MsgKind::BudgetExact ||
             m.kind == MsgKind::InitialWeight) &&
            m.amount < 0)
            fail("negative amount in trace");
        if (m.kind == MsgKind::BudgetQuantized && m.ivalue < 0)
            fail("negative quantum count in trace");
    }

    if (static_cast<int>(t.lifecycles.size()) != g.n) {
        fail("lifecycle count differs from vertex count");
        return out;
    }
    for (int v = 0; v < g.n; ++v) {
        const auto& lc = t.lifecycles[static_cast<size_t>(v)];
        if (lc.status == VertexStatus::Running) fail(vname(v) + " never returned");
    }
    if (!out.violations.empty()) return out;

    // payments and the cover-side checks
    try {
        out.payments = extract_delta(g, t);
    } catch (const std::exception& e) {
        fail(std::string("payment extraction failed: ") + e.what());
        return out;
    }
    for (int v : check_g_valid(g, out.payments))
        fail("payment validity violated at " + vname(v));

    for (int v = 0; v < g.n; ++v)
        if (t.lifecycles[static_cast<size_t>(v)].status == VertexStatus::InCover)
            out.in_cover.push_back(v);

    if (!check_cover(g, out.in_cover)) fail("returned set is not a vertex cover");

    if (check_g_valid(g, out.payments).empty()) {
        auto s_delta = compute_s_delta(g, out.payments, p.epsilon);
        if (s_delta != out.in_cover)
            fail("InCover set differs from the payment threshold set");
    }

    Rat quantized_cap = Rat(floor_div(Rat(2), p.epsilon_prime));

    // per-vertex replay
    out.history.assign(static_cast<size_t>(g.n), {});
    for (int v = 0; v < g.n; ++v) {
        const auto& lc = t.lifecycles[static_cast<size_t>(v)];
        const int j = lc.iterations;
        const Rat vault = vault_of(g, v, p);
        const Rat threshold = p.epsilon_prime * g.weights[v];

        // notices delivered to v, by sender
        std::map<int, int> notice_round;
        if (auto it = index.notices_to.find(v); it != index.notices_to.end())
            for (auto& [src, round] : it->second)
                if (!notice_round.count(src)) notice_round[src] = round;

        std::set<int> live(g.adjacency[v].begin(), g.adjacency[v].end());
        Rat w = g.weights[v];
        out.history[static_cast<size_t>(v)].push_back(
            {static_cast<int>(live.size()), w});

        for (int i = 0; i < j; ++i) {
            auto reqs_it = index.requests_by_src.find({v, i});
            if (reqs_it == index.requests_by_src.end()) {
                fail(vname(v) + " has no requests for iteration " + std::to_string(i));
                break;
            }
            const auto& reqs = reqs_it->second;
            int d = static_cast<int>(live.size());
            if (static_cast<int>(reqs.size()) != d) {
                fail(vname(v) + " sent " + std::to_string(reqs.size()) +
                     " requests with " + std::to_string(d) + " live neighbors at iteration " +
                     std::to_string(i));
                break;
            }
            int send_round = reqs.front()->round - 1;
            std::set<int> targets;
            Rat request_amount = vault / d;
            Rat request_sum = 0;
            for (const Message* r : reqs) {
                targets.insert(r->dst);
                if (r->round - 1 != send_round)
                    fail(vname(v) + " split one iteration's requests across rounds");
                if (p.variant == Variant::Local) {
                    if (r->amount != request_amount)
                        fail(vname(v) + " request amount differs from vault/degree");
                    request_sum += r->amount;
                } else {
                    if (r->ivalue != d)
                        fail(vname(v) + " announced degree " + std::to_string(r->ivalue) +
                             " with " + std::to_string(d) + " live neighbors");
                    request_sum += congest_request_amount(g.weights[v],
                                                          static_cast<int>(r->ivalue), p);
                }
            }
            if (targets != live) fail(vname(v) + " requested a set other than its live neighbors");
            if (request_sum != vault)
                fail(vname(v) + " requests do not sum to the vault at iteration " +
                     std::to_string(i));

            // incoming grants
            Rat in_sum = 0;
            std::set<int> shorted;
            std::set<int> responders;
            for (const Message* b : index.budgets) {
                if (b->dst != v || b->iteration_tag != i) continue;
                if (!live.count(b->src)) {
                    fail(vname(v) + " got a budget from a non-live neighbor");
                    continue;
                }
                responders.insert(b->src);
                Rat amount = effective_grant(*b, index, g, p);
                if (amount > request_amount)
                    fail(vname(b->src) + " granted more than " + vname(v) + " asked");
                in_sum += amount;
                if (amount < request_amount) shorted.insert(b->src);
                if (b->kind == MsgKind::BudgetQuantized && Rat(b->ivalue) > quantized_cap)
                    fail(vname(b->src) + " sent a quantum count above 2/eps'");
                bool is_short_response =
                    b->kind == MsgKind::BudgetQuantized ||
                    (b->kind == MsgKind::BudgetExact && amount < request_amount);
                if (is_short_response) {
                    const auto& slc = t.lifecycles[static_cast<size_t>(b->src)];
                    if (slc.status != VertexStatus::InCover || slc.iterations != i + 1)
                        fail(vname(b->src) +
                             " shorted a request without returning InCover that iteration");
                }
            }

            // outgoing grants
            Rat out_sum = 0;
            Rat bank = w - vault;
            for (const Message* b : index.budgets) {
                if (b->src != v || b->iteration_tag != i) continue;
                if (!index.matching_request(*b)) {
                    fail(vname(v) + " granted a budget nobody requested");
                    continue;
                }
                out_sum += effective_grant(*b, index, g, p);
            }
            if (out_sum > bank)
                fail(vname(v) + " granted beyond its bank at iteration " + std::to_string(i));

            Rat w_next = w - in_sum - out_sum;
            if (w_next < 0) fail(vname(v) + " went below zero weight");

            // non-responders must have terminated and said so
            for (int u : targets)
                if (!responders.count(u) && !notice_round.count(u))
                    fail(vname(u) + " neither answered nor notified " + vname(v));

            // next live set: drop shorted granters, then notice senders seen
            // before the next request round (or the return round at the end)
            for (int u : shorted) live.erase(u);
            int horizon;
            if (i + 1 < j) {
                auto next_it = index.requests_by_src.find({v, i + 1});
                horizon = next_it != index.requests_by_src.end()
                              ? next_it->second.front()->round - 1
                              : lc.return_round;
            } else {
                horizon = lc.return_round;
            }
            for (auto& [u, round] : notice_round)
                if (round <= horizon) live.erase(u);

            w = w_next;
            out.history[static_cast<size_t>(v)].push_back(
                {static_cast<int>(live.size()), w});
        }

        const auto& rows = out.history[static_cast<size_t>(v)];
        if (static_cast<int>(rows.size()) == j + 1) {
            if (w != lc.final_weight)
                fail(vname(v) + " replayed weight differs from the engine's");
            bool below = w <= threshold;
            if (below != (lc.status == VertexStatus::InCover))
                fail(vname(v) + " status contradicts the threshold test");
            if (lc.status == VertexStatus::NotInCover && !live.empty())
                fail(vname(v) + " returned NotInCover with live neighbors");

            if (g.degree(v) >= 1) {
                Rat kv = kv_parameter(g.degree(v));
                for (int i = 0; i < j; ++i) {
                    const auto& a = rows[static_cast<size_t>(i)];
                    const auto& b = rows[static_cast<size_t>(i) + 1];
                    bool degree_branch = Rat(b.degree) * kv <= Rat(a.degree);
                    Rat step_nominal = p.epsilon_prime * g.weights[v] / kv;
                    bool weight_nominal = b.weight <= a.weight - step_nominal;
                    bool weight_adjusted =
                        p.variant == Variant::Congest
                            ? b.weight <= a.weight - step_nominal / 2
                            : weight_nominal;
                    std::string where = vname(v) + " iteration " + std::to_string(i);
                    if (!degree_branch && !weight_nominal)
                        out.dichotomy_nominal.push_back(where);
                    if (!degree_branch && !weight_adjusted)
                        out.dichotomy_adjusted.push_back(where);
                }
            }
        }
    }

    return out;
}

}  // namespace mwvcsim
