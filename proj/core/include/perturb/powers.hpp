#pragma once

#include "perturb/graph.hpp"
#include "perturb/rational.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace perturb {

// Where an edge of a constructed square path came from: the deterministic
// graph, or one of the sampled random rounds.
struct EdgeProvenance {
    enum Kind { deterministic, random_round } kind = deterministic;
    int round = 0;  // meaningful for random_round only

    bool operator==(const EdgeProvenance&) const = default;
};

inline EdgeProvenance det_edge() { return {EdgeProvenance::deterministic, 0}; }
inline EdgeProvenance rnd_edge(int round) { return {EdgeProvenance::random_round, round}; }

// A vertex sequence realizing the square of a path, with the two end-tuples
// (v2,v1) and (v_{k-1},v_k) and per-edge provenance tags.
struct SquarePathPiece {
    std::vector<int> vertices;
    std::map<std::pair<int, int>, EdgeProvenance> edge_provenance;

    int length() const { return static_cast<int>(vertices.size()); }
    int first() const { return vertices.front(); }                          // x_F
    int second() const { return vertices[1]; }                             // y_F
    int last() const { return vertices.back(); }                           // w_F
    int second_last() const { return vertices[vertices.size() - 2]; }      // u_F

    std::pair<int, int> end_tuple_left() const { return {second(), first()}; }
    std::pair<int, int> end_tuple_right() const { return {second_last(), last()}; }

    void tag_edge(int u, int v, EdgeProvenance p) {
        edge_provenance[{std::min(u, v), std::max(u, v)}] = p;
    }
};

// r-th power: edge (u,v) iff 1 <= dist_g(u,v) <= r
Graph rth_power(const Graph& g, int r);

Graph square_of_path(int k);   // P_k^2, k >= 1
Graph square_of_cycle(int n);  // C_n^2, n >= 3

// max over all vertex subsets S, |S| >= 2, of e(G[S])/(|S|-1); exact, and
// rejects graphs with more than kOneDensityCap vertices
inline constexpr int kOneDensityCap = 12;
Rational one_density(const Graph& f);

// every proper subgraph on >= 2 vertices has strictly smaller 1-density
bool is_strictly_1_balanced(const Graph& f);

bool verify_square_cycle(const Graph& g, const std::vector<int>& ordering);
bool verify_square_path(const Graph& g, const std::vector<int>& seq, bool relax_end_edges = false);

// A graph of maximum degree at most 2: a multiset of path lengths (>=1) and
// cycle lengths (>=3) whose total is n.
struct MaxDeg2Graph {
    std::vector<int> path_lengths;
    std::vector<int> cycle_lengths;

    int total() const;
    std::string to_string() const;
    Graph realize() const;  // concrete graph on `total()` vertices

    bool operator==(const MaxDeg2Graph&) const = default;
};

inline constexpr int kMaxDeg2EnumCap = 14;
std::vector<MaxDeg2Graph> enumerate_maxdeg2(int n);

}  // namespace perturb
