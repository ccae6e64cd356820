#pragma once

#include "perturb/graph.hpp"
#include "perturb/rational.hpp"
#include "perturb/seed.hpp"

#include <optional>

namespace perturb {

// G(n,p): each unordered pair independently with probability p.
// Small p walks the pair index space with geometric skips, O(m) expected.
Graph gnp(int n, double p, Seed seed);

// directed variant over ordered pairs (u,v), u != v
DiGraph gnp_directed(int n, double p, Seed seed);

// random k-partite graph: only cross-part pairs are sampled
Graph gnp_multipartite(const std::vector<int>& part_sizes, double p, Seed seed);

// random bipartite overlay between two vertex sets of a common universe
Graph gnp_bipartite_between(int universe, const Bitset& a, const Bitset& b, double p, Seed seed);

struct ExtremalBipartite {
    Graph graph;
    Bitset a;  // size round(alpha*n), ties to even
    Bitset b;
};

// H_alpha: complete bipartite with |A| = round(alpha*n); 0 < alpha < 1/2
ExtremalBipartite extremal_bipartite(const Rational& alpha, int n);

// dense part + overlay probability; the perturbed model G_alpha ∪ G(n,p)
struct PerturbedModel {
    Graph dense_part;
    double p = 0;
    Rational alpha;
};

struct StabilityWitness {
    Bitset a;
    Bitset b;
    Rational alpha;
    Rational beta;
};

struct StableInstance {
    Graph graph;
    StabilityWitness witness;
};

// A graph built from H_alpha by (i) deleting up to noise*n^2 cross edges,
// only where every stability condition and the minimum degree floor(alpha*n)
// survive, and (ii) adding random B-internal edges.  The returned witness
// always passes verify_stable; the recipe is closed under it by construction.
StableInstance stable_instance(const Rational& alpha, const Rational& beta, int n, double noise,
                               Seed seed);

}  // namespace perturb
