#include "mwvcsim/engine.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace mwvcsim {

std::string kind_name(MsgKind k) {
    switch (k) {
        case MsgKind::InitialWeight: return "initial_weight";
        case MsgKind::Request: return "request";
        case MsgKind::RequestDegree: return "request_degree";
        case MsgKind::BudgetExact: return "budget";
        case MsgKind::BudgetAccept: return "budget_accept";
        case MsgKind::BudgetQuantized: return "budget_quantized";
        case MsgKind::CoverNotice: return "cover_notice";
    }
    return "?";
}

SimEngine::SimEngine(const WeightedGraph& g, const ProtocolParams& params,
                     const Schedule& schedule, long long round_cap)
    : g_(g), params_(params), round_cap_(round_cap) {
    if (round_cap_ < 1) throw std::invalid_argument("round cap must be positive");
    auto bad = validate(g_);
    if (!bad.empty()) throw std::invalid_argument("invalid graph: " + bad.front());
    if (!schedule.activation.empty() &&
        static_cast<int>(schedule.activation.size()) != g_.n)
        throw std::invalid_argument("schedule size differs from vertex count");
    vrec_.resize(static_cast<size_t>(g_.n));
    for (int v = 0; v < g_.n; ++v) {
        int act = schedule.activation.empty() ? 0 : schedule.activation[v];
        if (act < 0) throw std::invalid_argument("activation round must be non-negative");
        vrec_[v].configured_activation = act;
    }
    trace_.params = params_;
    trace_.lifecycles.resize(static_cast<size_t>(g_.n));
}

bool SimEngine::finished() const {
    if (!in_flight_.empty()) return false;
    for (const auto& r : vrec_)
        if (r.phase != Phase::Done) return false;
    return true;
}

void SimEngine::send(Message m) {
    m.round = round_ + 1;
    in_flight_.push_back(std::move(m));
}

bool SimEngine::is_live(const VRec& r, int u) const {
    return std::binary_search(r.st.live.begin(), r.st.live.end(), u);
}

void SimEngine::retire(int v, RoundEvents& ev) {
    VRec& r = vrec_[v];
    r.phase = Phase::Done;
    r.return_round = round_;
    LifecycleEvent& lc = trace_.lifecycles[static_cast<size_t>(v)];
    lc.vertex = v;
    lc.activation_round = r.activation_round;
    lc.return_round = r.return_round;
    lc.iterations = r.st.iteration;
    lc.status = r.st.status;
    lc.final_weight = r.st.w_cur;
    ev.returned.push_back(v);
}

void SimEngine::deliver(const Message& m) {
    VRec& r = vrec_[m.dst];
    if (r.phase == Phase::Inactive && r.first_arrival < 0) r.first_arrival = m.round;
    switch (m.kind) {
        case MsgKind::CoverNotice:
            if (r.phase != Phase::Done) r.notice_buffer.insert(m.src);
            break;
        case MsgKind::InitialWeight:
            if (r.phase != Phase::Done) r.neighbor_w0[m.src] = m.amount;
            break;
        case MsgKind::Request:
        case MsgKind::RequestDegree:
            if (r.phase == Phase::Done) {
                // a notice to the requester is still in flight when the
                // recipient returned InCover; anything else is a bug
                if (r.st.status != VertexStatus::InCover)
                    throw ProtocolError("request delivered to a NotInCover vertex");
                break;
            }
            r.pending_requests[m.iteration_tag][m.src] = m;
            break;
        case MsgKind::BudgetExact:
        case MsgKind::BudgetAccept:
        case MsgKind::BudgetQuantized: {
            // responses may overtake a slow grant phase, so both mid-iteration
            // phases are in order
            if (r.phase != Phase::AwaitRequests && r.phase != Phase::AwaitBudgets)
                throw ProtocolError("budget response out of phase");
            if (m.iteration_tag != r.st.iteration)
                throw ProtocolError("budget response for a different iteration");
            auto it = r.my_requests.find(m.src);
            if (it == r.my_requests.end())
                throw ProtocolError("budget response from a neighbor that was not asked");
            if (r.responses.count(m.src))
                throw ProtocolError("duplicate budget response");
            const Rat& request = it->second;
            Rat effective;
            bool full = false;
            if (m.kind == MsgKind::BudgetExact) {
                effective = m.amount;
                full = (effective == request);
            } else if (m.kind == MsgKind::BudgetAccept) {
                effective = request;
                full = true;
            } else {
                auto w0 = r.neighbor_w0.find(m.src);
                if (w0 == r.neighbor_w0.end())
                    throw ProtocolError("quantized budget before the initial weight");
                effective = Rat(m.ivalue) * congest_quantum(w0->second, params_);
                full = (effective == request);
            }
            if (effective > request) throw ProtocolError("budget grant exceeds request");
            r.responses[m.src] = BudgetResponse{m.src, effective, full};
            break;
        }
    }
}

SimEngine::RoundEvents SimEngine::step() {
    if (finished()) throw std::logic_error("step on a finished simulation");
    ++round_;
    if (round_ > round_cap_)
        throw RoundCapExceeded("round cap " + std::to_string(round_cap_) +
                               " exceeded; the protocol should have terminated");
    std::vector<Message> arriving = std::move(in_flight_);
    in_flight_.clear();
    for (auto& m : arriving) {
        trace_.messages.push_back(m);
        deliver(m);
    }
    per_round_delivered_.push_back(static_cast<long long>(arriving.size()));
    trace_.rounds_total = round_;

    RoundEvents ev;
    ev.round = round_;
    ev.delivered = static_cast<int>(arriving.size());
    for (int v = 0; v < g_.n; ++v) act(v, ev);
    return ev;
}

void SimEngine::act(int v, RoundEvents& ev) {
    VRec& r = vrec_[v];
    switch (r.phase) {
        case Phase::Done:
            return;
        case Phase::Inactive: {
            int eff = r.configured_activation;
            if (r.first_arrival >= 0) eff = std::min(eff, r.first_arrival);
            if (round_ < eff) return;
            r.activation_round = round_;
            r.st = init_vertex(g_.weights[v], g_.adjacency[v], params_);
            if (r.st.status == VertexStatus::NotInCover) {  // isolated vertex
                retire(v, ev);
                return;
            }
            if (params_.variant == Variant::Congest) {
                for (int u : r.st.live)
                    send(Message{MsgKind::InitialWeight, v, u, 0, 0, r.st.w0, 0});
                r.phase = Phase::StartIteration;
                return;
            }
            r.phase = Phase::StartIteration;
            start_iteration(v, ev);
            return;
        }
        case Phase::StartIteration:
            start_iteration(v, ev);
            return;
        case Phase::AwaitRequests:
            try_grant(v);
            return;
        case Phase::AwaitBudgets:
            try_absorb(v, ev);
            return;
    }
}

void SimEngine::start_iteration(int v, RoundEvents& ev) {
    VRec& r = vrec_[v];
    if (r.st.iteration > 0) {
        // end-of-iteration tail: apply arrived notices, then the degree test
        std::vector<int> notices(r.notice_buffer.begin(), r.notice_buffer.end());
        r.notice_buffer.clear();
        auto res = finalize_iteration(r.st, notices, params_);
        if (res.status == VertexStatus::NotInCover) {
            retire(v, ev);
            return;
        }
    }
    auto batch = make_requests(r.st, params_);
    r.my_requests.clear();
    r.responses.clear();
    if (params_.variant == Variant::Local) {
        for (auto& [u, amount] : batch.amounts) {
            r.my_requests[u] = amount;
            send(Message{MsgKind::Request, v, u, 0, r.st.iteration, amount, 0});
        }
    } else {
        Rat amount = congest_request_amount(r.st.w0, r.st.degree_cur, params_);
        for (int u : r.st.live) {
            r.my_requests[u] = amount;
            send(Message{MsgKind::RequestDegree, v, u, 0, r.st.iteration, Rat(0),
                         static_cast<long long>(batch.degree)});
        }
    }
    r.phase = Phase::AwaitRequests;
}

void SimEngine::try_grant(int v) {
    VRec& r = vrec_[v];
    auto& pend = r.pending_requests[r.st.iteration];
    for (int u : r.st.live)
        if (!pend.count(u) && !r.notice_buffer.count(u)) return;  // still waiting

    std::vector<std::pair<int, Rat>> ordered;
    ordered.reserve(pend.size());
    for (auto& [src, msg] : pend) {
        if (!is_live(r, src)) throw ProtocolError("request from a removed neighbor");
        if (r.notice_buffer.count(src))
            throw ProtocolError("request from a neighbor that already returned");
        Rat amount;
        if (params_.variant == Variant::Local) {
            amount = msg.amount;
        } else {
            auto w0 = r.neighbor_w0.find(src);
            if (w0 == r.neighbor_w0.end())
                throw ProtocolError("degree request before the initial weight");
            amount = congest_request_amount(w0->second, static_cast<int>(msg.ivalue), params_);
        }
        ordered.emplace_back(src, amount);
    }
    if (params_.order_seed) {
        std::uint64_t mix = *params_.order_seed;
        mix ^= static_cast<std::uint64_t>(v) * 0x9E3779B97F4A7C15ULL;
        mix ^= static_cast<std::uint64_t>(r.st.iteration) * 0xBF58476D1CE4E5B9ULL;
        std::mt19937_64 rng(mix);
        for (size_t i = ordered.size(); i > 1; --i)
            std::swap(ordered[i - 1], ordered[rng() % i]);
    }

    auto grants = grant_budgets(r.st, ordered, params_);
    for (const auto& grant : grants) {
        switch (grant.form) {
            case GrantForm::Exact:
                send(Message{MsgKind::BudgetExact, v, grant.neighbor, 0, r.st.iteration,
                             grant.amount, 0});
                break;
            case GrantForm::Accept:
                send(Message{MsgKind::BudgetAccept, v, grant.neighbor, 0, r.st.iteration,
                             Rat(0), 0});
                break;
            case GrantForm::Quantized:
                send(Message{MsgKind::BudgetQuantized, v, grant.neighbor, 0, r.st.iteration,
                             Rat(0), grant.quantum_count});
                break;
        }
    }
    r.pending_requests.erase(r.st.iteration);
    r.phase = Phase::AwaitBudgets;
}

void SimEngine::try_absorb(int v, RoundEvents& ev) {
    VRec& r = vrec_[v];
    for (auto& [u, amount] : r.my_requests)
        if (!r.responses.count(u) && !r.notice_buffer.count(u)) return;  // still waiting

    std::vector<BudgetResponse> responses;
    responses.reserve(r.responses.size());
    for (auto& [u, br] : r.responses) responses.push_back(br);
    absorb_budgets(r.st, responses);

    auto res = finalize_iteration(r.st, {}, params_);  // threshold test only here
    if (res.status == VertexStatus::InCover) {
        for (int u : res.notice_targets)
            send(Message{MsgKind::CoverNotice, v, u, 0, r.st.iteration - 1, Rat(0), 0});
        retire(v, ev);
        return;
    }
    r.phase = Phase::StartIteration;
}

RunReport SimEngine::report() const {
    if (!finished()) throw std::logic_error("report on an unfinished simulation");
    RunReport rep;
    rep.iterations.resize(static_cast<size_t>(g_.n));
    rep.rounds_after_activation.resize(static_cast<size_t>(g_.n));
    rep.cover_weight = 0;
    for (int v = 0; v < g_.n; ++v) {
        const auto& lc = trace_.lifecycles[static_cast<size_t>(v)];
        rep.iterations[v] = lc.iterations;
        rep.rounds_after_activation[v] = lc.return_round - lc.activation_round + 1;
        if (lc.status == VertexStatus::InCover) {
            rep.cover.push_back(v);
            rep.cover_weight += g_.weights[v];
        }
    }
    rep.total_messages = static_cast<long long>(trace_.messages.size());
    for (const auto& m : trace_.messages)
        rep.max_payload_bits = std::max(rep.max_payload_bits, payload_bits(m));
    rep.per_round_messages = per_round_delivered_;
    return rep;
}

std::pair<Trace, RunReport> run_simulation(const WeightedGraph& g, const ProtocolParams& params,
                                           const Schedule& schedule, long long round_cap) {
    SimEngine engine(g, params, schedule, round_cap);
    while (!engine.finished()) engine.step();
    return {engine.trace(), engine.report()};
}

int payload_bits(const Message& m) {
    int bits = 3;  // kind tag
    switch (m.kind) {
        case MsgKind::InitialWeight:
        case MsgKind::Request:
        case MsgKind::BudgetExact:
            bits += bit_length(numerator(m.amount)) + bit_length(denominator(m.amount));
            break;
        case MsgKind::RequestDegree:
        case MsgKind::BudgetQuantized:
            bits += bit_length(BigInt(m.ivalue));
            break;
        case MsgKind::BudgetAccept:
        case MsgKind::CoverNotice:
            break;
    }
    return bits;
}

MessageStats message_stats(const Trace& t, int weight_bits, int n) {
    if (weight_bits < 1 || n < 1) throw std::invalid_argument("message_stats needs b, n >= 1");
    MessageStats s;
    int log_term = static_cast<int>(std::ceil(std::log2(static_cast<double>(n) + 1.0)));
    s.cap_bits = 2 * weight_bits + log_term + 8;
    for (const auto& m : t.messages) {
        int bits = payload_bits(m);
        std::string k = kind_name(m.kind);
        s.max_payload_bits = std::max(s.max_payload_bits, bits);
        s.total_messages += 1;
        s.count_by_kind[k] += 1;
        auto it = s.max_bits_by_kind.find(k);
        if (it == s.max_bits_by_kind.end())
            s.max_bits_by_kind[k] = bits;
        else
            it->second = std::max(it->second, bits);
        if (bits > s.cap_bits) s.within_cap = false;
    }
    return s;
}

int weight_bit_width(const WeightedGraph& g) {
    int b = 1;
    for (const auto& w : g.weights) {
        b = std::max(b, bit_length(numerator(w)));
        b = std::max(b, bit_length(denominator(w)));
    }
    return b;
}

std::string trace_to_jsonl(const Trace& t) {
    std::ostringstream out;
    for (const auto& m : t.messages) {
        out << "{\"round\":" << m.round << ",\"src\":" << m.src << ",\"dst\":" << m.dst
            << ",\"kind\":\"" << kind_name(m.kind) << "\"";
        switch (m.kind) {
            case MsgKind::InitialWeight:
            case MsgKind::Request:
            case MsgKind::BudgetExact:
                out << ",\"payload\":\"" << rat_str(m.amount) << "\"";
                break;
            case MsgKind::RequestDegree:
            case MsgKind::BudgetQuantized:
                out << ",\"payload\":" << m.ivalue;
                break;
            case MsgKind::BudgetAccept:
            case MsgKind::CoverNotice:
                break;
        }
        out << ",\"iter\":" << m.iteration_tag << "}\n";
    }
    return out.str();
}

}  // namespace mwvcsim
