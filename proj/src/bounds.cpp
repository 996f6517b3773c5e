#include "mwvcsim/bounds.hpp"

#include "mwvcsim/protocol.hpp"

#include <cmath>
#include <stdexcept>

namespace mwvcsim {

Rat round_bound(int d, const Rat& eps) {
    if (d < 1) throw std::invalid_argument("round_bound needs d >= 1");
    if (eps <= 0) throw std::invalid_argument("epsilon must be positive");
    Rat eps_prime = eps / (2 + eps);
    Rat kv = kv_parameter(d);
    Rat bound = kv / eps_prime;
    if (d > 1) {
        double ratio = std::log2(static_cast<double>(d)) / std::log2(rat_double(kv));
        bound += rat_from_double(ratio);
    }
    return bound;
}

Rat lower_bound_ratio_from_n(const Rat& log2n, int k) {
    if (k < 1) throw std::invalid_argument("k must be at least 1");
    if (log2n <= 0) throw std::invalid_argument("log2n must be positive");
    Rat k2 = Rat(4) * k * k;
    return log2n / k2 - Rat(2LL * k * k * k + 4LL * k) / k2;
}

Rat lower_bound_ratio_from_degree(const Rat& log2Delta, int k) {
    if (k < 1) throw std::invalid_argument("k must be at least 1");
    if (log2Delta <= 0) throw std::invalid_argument("log2Delta must be positive");
    return log2Delta / (k + 1) - Rat(k, 2);
}

int feasible_k_n(const Rat& eps, const Rat& log2n) {
    if (eps <= 0) throw std::invalid_argument("epsilon must be positive");
    if (log2n <= 0) throw std::invalid_argument("log2n must be positive");
    Rat budget = Rat(4) * eps * log2n;
    int k = 0;
    while (Rat(2LL * (k + 1LL) * (k + 1) * (k + 1) + 4LL * (k + 1)) <= budget) ++k;
    return k;
}

int feasible_k_Delta(const Rat& eps, const Rat& log2Delta) {
    if (eps <= 0) throw std::invalid_argument("epsilon must be positive");
    if (log2Delta <= 0) throw std::invalid_argument("log2Delta must be positive");
    Rat budget = Rat(2) * eps * log2Delta;
    int k = 0;
    while (Rat((k + 1LL) * (k + 2LL)) <= budget) ++k;
    return k;
}

long long default_round_cap(const WeightedGraph& g, const Rat& eps, int max_activation) {
    int delta = max_degree(g);
    long long iterations = delta >= 1 ? ceil_to_ll(round_bound(delta, eps)) + 1 : 1;
    long long rounds_per_run = 3 * iterations + 2;  // init round and notice tail
    return 10 * rounds_per_run + max_activation + 10;
}

}  // namespace mwvcsim
