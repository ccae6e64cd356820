#pragma once

#include "perturb/generators.hpp"

#include <optional>

namespace perturb {

// Exact evaluation of the four stability conditions for the witness (A,B):
//   |A| = (alpha ± beta) n   and   |B| = (1 - alpha ± beta) n,
//   min degree of G[A,B] at least alpha n / 4,
//   all but beta n vertices of A see all but beta n of B (and symmetrically),
//   e(G[B]) <= beta n^2.
bool verify_stable(const Graph& g, const StabilityWitness& w);

struct StablePartitionOptions {
    long long budget = 200000;  // local-move evaluations
    int exhaustive_max_n = 16;
};

// Heuristic witness search: seeded classes by degree plus local swap moves
// maximizing the verifier's slack; exhaustive over partitions for n <= 16.
// not_found (nullopt) is not a proof of instability.
std::optional<StabilityWitness> find_stable_partition(const Graph& g, const Rational& alpha,
                                                      const Rational& beta,
                                                      const StablePartitionOptions& opts = {});

}  // namespace perturb
