#include "mwvcsim/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mwvcsim {

ProtocolParams make_params(const Rat& epsilon, Variant variant,
                           std::optional<std::uint64_t> order_seed) {
    if (epsilon <= 0) throw std::invalid_argument("epsilon must be positive");
    ProtocolParams p;
    p.epsilon = epsilon;
    p.epsilon_prime = epsilon / (2 + epsilon);
    p.variant = variant;
    p.order_seed = order_seed;
    return p;
}

VertexState init_vertex(const Rat& w, std::vector<int> neighbors, const ProtocolParams& p) {
    if (w <= 0) throw std::invalid_argument("vertex weight must be positive");
    VertexState s;
    s.w0 = w;
    s.w_cur = w;
    s.vault = p.epsilon_prime * w;
    if (p.variant == Variant::Congest) s.vault /= 2;
    std::sort(neighbors.begin(), neighbors.end());
    s.live = std::move(neighbors);
    s.degree_cur = static_cast<int>(s.live.size());
    s.bank = s.w_cur - s.vault;
    s.status = s.live.empty() ? VertexStatus::NotInCover : VertexStatus::Running;
    return s;
}

RequestBatch make_requests(VertexState& s, const ProtocolParams& p) {
    if (s.status != VertexStatus::Running)
        throw std::logic_error("make_requests on a returned vertex");
    if (s.degree_cur < 1) throw std::logic_error("make_requests with no live neighbors");
    s.bank = s.w_cur - s.vault;  // top of iteration
    s.granted_this_iter = 0;
    RequestBatch batch;
    batch.degree = s.degree_cur;
    if (p.variant == Variant::Local) {
        Rat amount = s.vault / s.degree_cur;
        batch.amounts.reserve(s.live.size());
        for (int u : s.live) batch.amounts.emplace_back(u, amount);
    }
    return batch;
}

Rat congest_request_amount(const Rat& w0_of_requester, int degree, const ProtocolParams& p) {
    if (degree < 1) throw std::invalid_argument("degree must be positive");
    return p.epsilon_prime * w0_of_requester / (2 * degree);
}

Rat congest_quantum(const Rat& w0_of_granter, const ProtocolParams& p) {
    return p.epsilon_prime * w0_of_granter / 2;
}

std::vector<Grant> grant_budgets(VertexState& s,
                                 const std::vector<std::pair<int, Rat>>& requests,
                                 const ProtocolParams& p) {
    if (s.status != VertexStatus::Running)
        throw std::logic_error("grant_budgets on a returned vertex");
    std::vector<Grant> grants;
    grants.reserve(requests.size());
    Rat remaining = s.bank;
    for (const auto& [u, request] : requests) {
        if (request < 0) throw std::invalid_argument("negative request amount");
        Grant grant;
        grant.neighbor = u;
        if (remaining >= request) {
            grant.amount = request;
            grant.form = p.variant == Variant::Local ? GrantForm::Exact : GrantForm::Accept;
        } else if (p.variant == Variant::Local) {
            grant.amount = remaining;
            grant.form = GrantForm::Exact;
        } else {
            Rat q = congest_quantum(s.w0, p);
            BigInt t = floor_div(remaining, q);
            grant.quantum_count = t.convert_to<long long>();
            grant.amount = Rat(t) * q;
            grant.form = GrantForm::Quantized;
        }
        remaining -= grant.amount;
        grants.push_back(std::move(grant));
    }
    Rat total = s.bank - remaining;
    s.bank = remaining;
    s.w_cur -= total;
    s.granted_this_iter += total;
    return grants;
}

void absorb_budgets(VertexState& s, const std::vector<BudgetResponse>& responses) {
    if (s.status != VertexStatus::Running)
        throw std::logic_error("absorb_budgets on a returned vertex");
    Rat request = s.degree_cur > 0 ? Rat(s.vault / s.degree_cur) : Rat(0);
    std::vector<int> shorted;
    for (const auto& r : responses) {
        if (!std::binary_search(s.live.begin(), s.live.end(), r.neighbor))
            throw std::logic_error("budget response from a neighbor that was not asked");
        if (r.amount > request)
            throw std::logic_error("budget response exceeds the request");
        s.w_cur -= r.amount;
        if (!r.full) shorted.push_back(r.neighbor);
    }
    for (int u : shorted)
        s.live.erase(std::remove(s.live.begin(), s.live.end(), u), s.live.end());
    s.degree_cur = static_cast<int>(s.live.size());
    s.iteration += 1;
}

FinalizeResult finalize_iteration(VertexState& s, const std::vector<int>& cover_notices,
                                  const ProtocolParams& p) {
    if (s.status != VertexStatus::Running) return {s.status, {}};
    if (s.w_cur <= p.epsilon_prime * s.w0) {
        s.status = VertexStatus::InCover;
        return {s.status, s.live};
    }
    for (int u : cover_notices)
        s.live.erase(std::remove(s.live.begin(), s.live.end(), u), s.live.end());
    s.degree_cur = static_cast<int>(s.live.size());
    if (s.degree_cur == 0) s.status = VertexStatus::NotInCover;
    return {s.status, {}};
}

Rat kv_parameter(int d) {
    if (d < 1) throw std::invalid_argument("kv_parameter needs d >= 1");
    if (d <= 16) return Rat(d + 1);
    auto int_log2 = [](long long x) -> int {
        // exact log2 or -1
        if (x < 1 || (x & (x - 1)) != 0) return -1;
        int m = 0;
        while (x > 1) {
            x >>= 1;
            ++m;
        }
        return m;
    };
    int m = int_log2(d);
    if (m > 0) {
        int j = int_log2(m);
        if (j > 0) return Rat(m, j);
    }
    double k = std::log2(static_cast<double>(d)) / std::log2(std::log2(static_cast<double>(d)));
    return rat_from_double(k);
}

}  // namespace mwvcsim
