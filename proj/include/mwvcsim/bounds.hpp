#pragma once

#include "mwvcsim/graph.hpp"
#include "mwvcsim/rational.hpp"

namespace mwvcsim {

/// Iteration bound for a vertex of degree d: Kv/eps' + log2(d)/log2(Kv), the
/// second term taken as 0 for d = 1. The log ratio is evaluated in double
/// precision and returned as an exact dyadic summand; callers use
/// ceil(bound)+1 as the cap.
Rat round_bound(int d, const Rat& eps);

/// log2 of the lower-bound ratio implied by the node-count constraint:
/// log2n * (1/(4k^2)) - (2k^3+4k)/(4k^2), exact.
Rat lower_bound_ratio_from_n(const Rat& log2n, int k);

/// log2 of the lower-bound ratio implied by the degree constraint:
/// log2Delta/(k+1) - k/2, exact.
Rat lower_bound_ratio_from_degree(const Rat& log2Delta, int k);

/// Largest k >= 1 with 2k^3 + 4k <= 4*eps*log2n; 0 when no k qualifies.
int feasible_k_n(const Rat& eps, const Rat& log2n);

/// Largest k >= 1 with k(k+1) <= 2*eps*log2Delta; 0 when no k qualifies.
int feasible_k_Delta(const Rat& eps, const Rat& log2Delta);

/// Generous default cap: ten times the rounds implied by the iteration bound
/// for the maximum degree, plus schedule slack. Exceeding it signals a bug.
long long default_round_cap(const WeightedGraph& g, const Rat& eps, int max_activation = 0);

}  // namespace mwvcsim
