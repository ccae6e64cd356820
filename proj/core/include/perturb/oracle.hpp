#pragma once

#include "perturb/graph.hpp"
#include "perturb/powers.hpp"

#include <optional>

namespace perturb {

enum class SearchStatus { found, absent, budget_exhausted };

const char* to_string(SearchStatus s);

struct HamCycleResult {
    SearchStatus status = SearchStatus::absent;
    std::vector<int> ordering;  // valid iff status == found
    long long nodes = 0;        // expansions spent
};

// Exhaustive backtracking for an ordering whose square cycle lies in g.
// `absent` is only ever returned from a completed exhaustive search;
// hitting the node budget yields budget_exhausted, never absent.
//
// Branching follows common neighbors of the last two placed vertices;
// symmetry is broken by fixing a minimum-degree start vertex and orienting
// so the second vertex is smaller than the last.
HamCycleResult find_square_ham_cycle(const Graph& g, long long budget = -1);

struct SquarePathResult {
    SearchStatus status = SearchStatus::absent;
    std::vector<int> seq;
    long long nodes = 0;
};

// Spanning square path of `cover` with prescribed end tuples, in the paper's
// tuple order: left = (v2,v1), right = (v_{k-1},v_k), so the returned
// sequence begins left[1], left[0] and ends right[0], right[1].
SquarePathResult find_square_path(const Graph& g, std::pair<int, int> left,
                                  std::pair<int, int> right, const Bitset& cover,
                                  bool relax_end_edges = false, long long budget = -1);

// Unlabeled copies of P_k^2 with all vertices inside `within`
// (labeled embeddings divided by |Aut|; |Aut| = 6 for k=3, else 2).
long long count_pk2_copies(const Graph& g, int k, const Bitset& within);

// Marks which vertices of `within` lie in at least one copy.
Bitset pk2_covered_vertices(const Graph& g, int k, const Bitset& within);

struct PackingResult {
    int size = 0;
    bool exact = true;  // false: search hit its budget, size is a lower bound
    long long nodes = 0;
};

// Maximum number of pairwise vertex-disjoint P_k^2 copies inside `within`,
// by branch and bound over the copy list with a greedy upper bound.
PackingResult max_disjoint_pk2_packing(const Graph& g, int k, const Bitset& within,
                                       long long budget = -1);

struct UniversalityResult {
    SearchStatus status = SearchStatus::absent;  // found = universal
    bool universal = false;
    std::optional<MaxDeg2Graph> witness;  // non-embeddable witness when false
    long long nodes = 0;
};

// True iff every max-degree-2 graph on n vertices embeds into g (n <= 12).
UniversalityResult is_2_universal(const Graph& g, long long budget = -1);

// Single component embedding test used by is_2_universal and tests.
bool embeds_maxdeg2(const Graph& g, const MaxDeg2Graph& pattern, long long* budget = nullptr);

}  // namespace perturb
