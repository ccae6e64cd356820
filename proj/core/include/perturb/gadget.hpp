#pragma once

#include "perturb/graph.hpp"
#include "perturb/matching.hpp"
#include "perturb/powers.hpp"
#include "perturb/search.hpp"
#include "perturb/seed.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace perturb {

// Vertex classes V (size n+4) and U_1..U_k (size m each) with deterministic
// random-bipartite graphs between V and each U_i, sampled at density 2d with
// the super-regularity degree floors enforced by resampling.
//
// Layout: V = [0, n+4), U_i = [n+4+i*m, n+4+(i+1)*m).
struct SuperRegularInstance {
    int k = 2;
    int n = 0;  // |V| = n + 4
    int m = 0;
    double d = 0.3;
    double delta0 = 0.2;
    double delta1 = 0.05;

    Graph bip;  // deterministic V-U_i edges only
    Bitset vset;
    std::vector<Bitset> usets;
    std::pair<int, int> x_tuple{-1, -1};  // (x, x') in V
    std::pair<int, int> y_tuple{-1, -1};  // (y, y') in V

    int total_vertices() const { return n + 4 + k * m; }
    int u_begin(int i) const { return n + 4 + i * m; }
};

// Instance invariants: class sizes and divisibility, degree floors, and the
// end-tuple common-neighborhood floors.  Throws on parameter infeasibility
// (delta0 <= 2*delta1, window too narrow for mod 6k-2) or resample limits.
SuperRegularInstance gen_super_regular_instance(int k, int n, double d, double delta0,
                                                double delta1, Seed seed);
bool check_instance_invariants(const SuperRegularInstance& inst, std::string* why = nullptr);

// Membership oracle for the auxiliary k-partite k-uniform hypergraph F:
// a transversal tuple is an edge iff its common neighborhood in V has size
// at least ceil(d^k n / 2).  With an overlay attached it answers for the
// random-supported subgraph (tuple must also span a square path there).
// Never materialized: k >= 3 would need m^k edges.
class AuxHypergraphF {
public:
    AuxHypergraphF(const SuperRegularInstance& inst, const Graph* overlay);

    bool contains(const std::vector<int>& tuple) const;
    long long threshold() const { return threshold_; }

    // good-for-X variant: at least ceil(d^k |X| / 2) common neighbors inside X
    bool good_for(const std::vector<int>& tuple, const Bitset& x) const;

private:
    const SuperRegularInstance* inst_;
    const Graph* overlay_;
    long long threshold_;
};

inline AuxHypergraphF build_F(const SuperRegularInstance& inst) { return {inst, nullptr}; }
inline AuxHypergraphF sample_F_tilde(const SuperRegularInstance& inst, const Graph& overlay) {
    return {inst, &overlay};
}

// exact k=2 hypergraph statistics (acceptance checks)
struct FStatsK2 {
    long long f_edges = 0;
    long long f_tilde_edges = 0;
    long long min_degree_f = 0;  // over both classes
};
FStatsK2 exact_f_stats_k2(const SuperRegularInstance& inst, const Graph& overlay);

struct TransversalFamily {
    std::vector<std::vector<int>> copies;  // copy[i] in U_i
    std::vector<Bitset> common_v;          // T-row per copy: common neighborhood in V

    int size() const { return static_cast<int>(copies.size()); }
};

struct TransversalResult {
    TransversalFamily family;
    bool starved = false;
    int target = 0;
    long long draws = 0;
};

// Random greedy family: uniform tuple draws from the unused class vertices,
// accepted when the tuple is an edge of F-tilde (pattern in `overlay` plus
// the F threshold).  Stops at `target` or after a starvation streak.
TransversalResult random_greedy_transversal(const SuperRegularInstance& inst, const Graph& overlay,
                                            int target, const Bitset& excluded, Rng& rng);

struct LinkGraphs {
    Graph fstar;    // over family indices: joint common neighborhood >= threshold
    DiGraph fbar;   // arc iff fstar edge and the inter-copy random edge came up
    long long fstar_threshold = 1;
};

// F* by pairwise common-neighborhood counting (threshold d^{2k+2} 2^{-2k-7} n,
// floored at 1); F-bar by sampling each ordered pair's link edge (u_k, u'_1)
// at q_link.  Successful links are recorded into overlay_accum so the final
// verification graph contains them.
LinkGraphs build_linkgraphs(const TransversalFamily& family, const SuperRegularInstance& inst,
                            double q_link, Rng& rng, GraphBuilder* overlay_accum);

struct DfsPathResult {
    bool success = false;
    std::vector<int> path;  // family indices
    int dead_ends = 0;
    int reached = 0;
    long long steps = 0;
};

// The depth-first random greedy walk: maintains the path, the dead-end set B
// and the revisited set A; stops at s == t or when |B| hits dead_end_cap.
DfsPathResult dfs_random_greedy_path(const LinkGraphs& lg, int t, int dead_end_cap, Rng& rng);

struct StageReport {
    std::string stage;
    bool success = true;
    std::string detail;
};

// Exact integer bookkeeping for one multipartite run.  The paper's set sizes
// are real-valued and only balance up to O(1); here they are re-derived so
// that coverage closes exactly:
//   m0 copies in the family, a path D on t of them, s_c = m0 - t spares,
//   z = k(m-2-m0) leftover class vertices each absorbed by a 4-vertex V-gap,
//   n_E two-vertex V-gaps padding the count, t-1 single-vertex gaps inside D,
// with 4*z + 2*n_E + (t-1) + 4 = n + 4 and z + n_E = s_c + 2.
struct GadgetPlan {
    int m0 = 0;
    int t = 0;
    int s_c = 0;
    int z = 0;
    int n_e = 0;
};
GadgetPlan plan_gadget_bookkeeping(int k, int n, int m);

struct GadgetConfig {
    double eps_prime = 0.02;       // dead-end budget fraction for the DFS
    long long embed_budget = 200000;
    int family_retries = 3;
    int order_retries = 40;
    int anchor_tries = 300000;
    // 0 = auto: max(16, (2d)^{2k+1} n / 4)
    long long absorb_common_min = 0;
    double bipartite_d = 0.3;  // density parameter handed to the star instances
};

// Connector chains H_x -> C1 -> D.front and D.back -> spares -> H_y.  Every
// leftover class vertex is matched to one gap and absorbed there by a
// 4-vertex V-path from the overlay; the n_E padding gaps take a single
// overlay edge on two V-vertices instead.
struct ConnectorChains {
    bool success = false;
    std::string stage;   // failing stage when unsuccessful
    std::string detail;
    int c1 = -1;                                 // spare copy in the x connector
    std::vector<int> y_spare_order;              // remaining spares in chain order
    std::vector<std::vector<int>> gap_vertices;  // per gap, final sequence order
    Bitset used_v;                               // all V-vertices consumed (incl. end tuples)
};

ConnectorChains absorb_leftover(const SuperRegularInstance& inst, const TransversalFamily& family,
                                const std::vector<int>& hx, const std::vector<int>& hy,
                                const std::vector<int>& path, const Graph& overlay_v,
                                const GadgetPlan& plan, const GadgetConfig& cfg, Rng& rng);

struct FinalMatchingResult {
    bool success = false;
    std::vector<int> matched_v;  // one V-vertex per path edge
    std::optional<HallViolation> hall;
};

// Perfect matching between the remaining V-vertices and E(D); a matched
// vertex is a common neighbor of every vertex of both incident copies.
FinalMatchingResult final_matching(const SuperRegularInstance& inst,
                                   const TransversalFamily& family, const std::vector<int>& path,
                                   const Bitset& v_remaining);

struct MultipartiteResult {
    bool success = false;
    std::vector<int> sequence;  // spans V and all U_i; end tuples as prescribed
    std::vector<StageReport> stages;
    Graph union_graph;  // deterministic bip plus every sampled random edge
    GadgetPlan plan;
    uint64_t seed = 0;
};

// The five-stage pipeline: anchors, transversal family, directed path,
// absorption of the leftover, final matching; output re-verified with
// verify_square_path(relax_end_edges = true) and exact coverage.
MultipartiteResult run_multipartite_pipeline(const SuperRegularInstance& inst, double p, Seed seed,
                                             const GadgetConfig& cfg = {});

struct BipartiteResult {
    bool success = false;
    std::vector<int> sequence;  // spans U and V
    std::vector<StageReport> stages;
    Graph union_graph;
    double q1 = 0, q2 = 0;
    uint64_t seed = 0;
};

// Bipartite square Hamilton path: random split of (U,V) into two k=2
// star instances, K4 bridge tuples, then two multipartite runs.
// x_tuple lives in V, y_tuple in U.
BipartiteResult run_bipartite_pipeline(const Graph& g, const Bitset& u, const Bitset& v,
                                       std::pair<int, int> x_tuple, std::pair<int, int> y_tuple,
                                       double p, Seed seed, const GadgetConfig& cfg = {});

// expected-size split equations of the bipartite proof; n = |V|, m = |U|
std::pair<double, double> bipartite_split_fractions(int n, int m, double delta0, double delta1);

struct SublinearResult {
    bool success = false;
    std::vector<SquarePathPiece> pieces;  // vertex-disjoint P_{k+1}^2 copies
    StageReport report;
};

// t*m + t vertex-disjoint copies of P_{k+1}^2 in g ∪ G(n,p), m = delta(g).
// Small minimum degree: copies built purely from random edges.  Otherwise:
// a locally maximal cut gives a bipartite subgraph of minimum degree m/2,
// and each copy takes one deterministic hub plus a random block.
SublinearResult find_sublinear_square_paths(const Graph& g, int k, int t, double p, Seed seed);

// pipeline form: explicit overlay, region and target count
SublinearResult sublinear_pieces(const Graph& g_det, const Graph& g_rand, int rand_round,
                                 const Bitset& within, int k, int target, Rng& rng,
                                 long long budget);

}  // namespace perturb
