#pragma once

#include "mwvcsim/graph.hpp"
#include "mwvcsim/protocol.hpp"

#include <map>
#include <set>
#include <string>
#include <vector>

namespace mwvcsim {

enum class MsgKind {
    InitialWeight,
    Request,
    RequestDegree,
    BudgetExact,
    BudgetAccept,
    BudgetQuantized,
    CoverNotice,
};

std::string kind_name(MsgKind k);

struct Message {
    MsgKind kind;
    int src = 0;
    int dst = 0;
    int round = 0;          // delivery round
    int iteration_tag = 0;  // sender's iteration
    Rat amount;             // InitialWeight / Request / BudgetExact
    long long ivalue = 0;   // RequestDegree: degree, BudgetQuantized: t
};

/// Per-vertex activation rounds; empty vector means a simultaneous start.
/// A message arriving earlier than the configured round activates the
/// vertex at the arrival round.
struct Schedule {
    std::vector<int> activation;
};

struct LifecycleEvent {
    int vertex = 0;
    int activation_round = -1;
    int return_round = -1;
    int iterations = 0;
    VertexStatus status = VertexStatus::Running;
    Rat final_weight;
};

struct Trace {
    std::vector<Message> messages;          // delivery order, nondecreasing rounds
    std::vector<LifecycleEvent> lifecycles; // indexed by vertex
    ProtocolParams params;
    int rounds_total = 0;
};

struct RunReport {
    std::vector<int> cover;
    Rat cover_weight;
    std::vector<int> iterations;               // per vertex
    std::vector<int> rounds_after_activation;  // per vertex
    long long total_messages = 0;
    int max_payload_bits = 0;
    std::vector<long long> per_round_messages;
};

struct RoundCapExceeded : std::runtime_error {
    explicit RoundCapExceeded(const std::string& what_) : std::runtime_error(what_) {}
};

struct ProtocolError : std::runtime_error {
    explicit ProtocolError(const std::string& what_) : std::runtime_error(what_) {}
};

/// Deterministic synchronous engine. Each round first delivers every message
/// sent in the previous round, then lets each vertex take at most one phase
/// action (in index order). An iteration spans three rounds in lockstep:
/// requests out, budgets back, cover notices out.
class SimEngine {
  public:
    SimEngine(const WeightedGraph& g, const ProtocolParams& params, const Schedule& schedule,
              long long round_cap);

    struct RoundEvents {
        int round = 0;
        int delivered = 0;
        std::vector<int> returned;  // vertices that reached a terminal status this round
    };

    /// Advances exactly one communication round. Throws std::logic_error once
    /// finished and RoundCapExceeded past the cap.
    RoundEvents step();

    bool finished() const;
    int round() const { return round_; }
    const Trace& trace() const { return trace_; }
    const VertexState& vertex(int v) const { return vrec_[v].st; }

    /// Summary of a finished run.
    RunReport report() const;

  private:
    enum class Phase { Inactive, StartIteration, AwaitRequests, AwaitBudgets, Done };

    struct VRec {
        VertexState st;
        Phase phase = Phase::Inactive;
        int configured_activation = 0;
        int first_arrival = -1;
        int activation_round = -1;
        int return_round = -1;
        std::set<int> notice_buffer;
        std::map<int, std::map<int, Message>> pending_requests;  // iteration -> src -> msg
        std::map<int, BudgetResponse> responses;                 // current iteration
        std::map<int, Rat> my_requests;                          // current iteration
        std::map<int, Rat> neighbor_w0;                          // congest
    };

    void deliver(const Message& m);
    void act(int v, RoundEvents& ev);
    void start_iteration(int v, RoundEvents& ev);
    void try_grant(int v);
    void try_absorb(int v, RoundEvents& ev);
    void send(Message m);
    void retire(int v, RoundEvents& ev);
    bool is_live(const VRec& r, int u) const;

    WeightedGraph g_;
    ProtocolParams params_;
    long long round_cap_;
    int round_ = -1;
    std::vector<VRec> vrec_;
    std::vector<Message> in_flight_;
    Trace trace_;
    std::vector<long long> per_round_delivered_;
};

/// Runs to completion and returns the full trace plus the summary report.
std::pair<Trace, RunReport> run_simulation(const WeightedGraph& g, const ProtocolParams& params,
                                           const Schedule& schedule, long long round_cap);

/// Payload size under the accounting encoding: a 3-bit kind tag plus the bit
/// lengths of the numeric fields (numerator and denominator for amounts).
int payload_bits(const Message& m);

struct MessageStats {
    int max_payload_bits = 0;
    long long total_messages = 0;
    std::map<std::string, long long> count_by_kind;
    std::map<std::string, int> max_bits_by_kind;
    int cap_bits = 0;  // 2b + ceil(log2(n+1)) + 8 for the given weight width b
    bool within_cap = true;
};

MessageStats message_stats(const Trace& t, int weight_bits, int n);

/// Largest bit width among weight numerators and denominators.
int weight_bit_width(const WeightedGraph& g);

/// One JSON object per delivered message:
/// {"round":..,"src":..,"dst":..,"kind":"..","payload":..,"iter":..}
std::string trace_to_jsonl(const Trace& t);

}  // namespace mwvcsim
