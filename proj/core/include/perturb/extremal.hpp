#pragma once

#include "perturb/gadget.hpp"
#include "perturb/generators.hpp"
#include "perturb/oracle.hpp"
#include "perturb/powers.hpp"
#include "perturb/search.hpp"
#include "perturb/stability.hpp"

#include <optional>

namespace perturb {

struct ExtremalConfig {
    // fractions of the total overlay probability per round; the directed
    // Hamilton cycle round dominates the requirement at desk scale
    std::array<double, 4> round_shares{0.12, 0.12, 0.26, 0.50};
    long long embed_budget = 200000;
    long long digraph_budget = 2000000;
    int factor_restarts = 8;
    long long oracle_fallback = 500000;
};

// Families of pieces built by the three covering stages.
enum class PieceRole { balancing, low_degree, factor };

struct PieceFamily {
    PieceRole role;
    std::vector<SquarePathPiece> pieces;
};

// Mutable bookkeeping threaded through the stages; the equalities
// |B1| = k(|A1| - |F1|) and |B2| = k(|A2| - |F1| - |F2|) are asserted
// after the stages that establish them.
struct EmbedState {
    Bitset a1, b1;  // after balancing
    Bitset a2, b2;  // after low-degree covering
    PieceFamily f1{PieceRole::balancing, {}};
    PieceFamily f2{PieceRole::low_degree, {}};
    PieceFamily f3{PieceRole::factor, {}};
};

struct ExtremalResult {
    bool success = false;
    std::vector<int> ordering;  // verified square Hamilton cycle ordering
    std::vector<StageReport> stages;
    Graph union_graph;  // g plus the four sampled rounds
    // provenance of every cycle edge, for the decomposition checks
    std::vector<std::tuple<int, int, EdgeProvenance>> edge_tags;
    uint64_t seed = 0;
};

// Stage operations (round graphs are the pre-sampled G_i).
bool balance_partition(const Graph& g, const StabilityWitness& w, int k, const Graph& round1,
                       const Graph& round2, EmbedState& st, std::vector<StageReport>& log,
                       Rng& rng, const ExtremalConfig& cfg);
bool cover_low_degree(const Graph& g, const StabilityWitness& w, int k, const Graph& round1,
                      EmbedState& st, std::vector<StageReport>& log, Rng& rng,
                      const ExtremalConfig& cfg);

struct FactorResult {
    bool success = false;
    std::vector<SquarePathPiece> pieces;
    int residual = 0;  // uncovered vertices at failure
};

// Pairwise disjoint P_k^2 copies covering `within` using only g_random:
// randomized greedy packing plus local augmentation (2-for-3 swaps; exact
// alternating augmentation for k = 2), exhaustive fallback for small sets.
FactorResult find_pk2_factor(const Graph& g_random, const Bitset& within, int k, Rng& rng,
                             const ExtremalConfig& cfg = {});

// Vertex per piece; arc (F, F') iff round4 contains the edge w_F x_{F'}.
DiGraph build_aux_digraph(const std::vector<SquarePathPiece>& pieces, const Graph& round4);

struct DirectedHamResult {
    SearchStatus status = SearchStatus::absent;
    std::vector<int> cycle;  // cyclic order of vertices
    long long nodes = 0;
};

// Backtracking search with randomized order, then a cycle-cover-and-patch
// fallback; exhaustive for n <= 12.  `absent` only from the exhaustive path.
DirectedHamResult directed_ham_cycle(const DiGraph& d, Rng& rng, long long budget = 2000000);

struct HallMatchResult {
    bool success = false;
    std::vector<int> connector;  // per cycle edge, the matched A2 vertex
    std::optional<HallViolation> hall;
};

// Matches every consecutive pair (F, F') of the cyclic order to a vertex
// v in A2 adjacent (in g) to u_F, w_F, x_{F'}, y_{F'}.
HallMatchResult hall_match(const std::vector<int>& cycle,
                           const std::vector<SquarePathPiece>& pieces, const Bitset& a2,
                           const Graph& g);

// The full pipeline: samples four rounds G_i with 1-(1-p)^{share_i} edge
// probability (their union is distributed as G(n,p)), then runs
// balance -> cover -> factor -> digraph -> Hall -> assembly and verifies.
ExtremalResult run_extremal_pipeline(const Graph& g, const StabilityWitness& w, int k, double p,
                                     Seed seed, const ExtremalConfig& cfg = {});

}  // namespace perturb
