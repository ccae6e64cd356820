#pragma once

#include "perturb/graph.hpp"
#include "perturb/seed.hpp"

#include <optional>
#include <vector>

namespace perturb {

// A small labeled pattern to embed into a host graph: positions 0..size-1,
// required edges between positions, and a candidate domain per position.
struct EmbedPattern {
    int size = 0;
    std::vector<std::pair<int, int>> edges;
    std::vector<Bitset> domains;

    void require_edge(int a, int b) { edges.emplace_back(a, b); }
};

enum class EmbedStatus { found, absent_in_sample, budget_exhausted };

struct EmbedResult {
    EmbedStatus status = EmbedStatus::absent_in_sample;
    std::vector<int> vertices;  // position -> host vertex
    long long nodes = 0;
};

// Randomized backtracking: candidates visited in seed-determined order, so a
// found embedding is uniform-ish but reproducible.  Vertices are pairwise
// distinct across positions.  budget < 0 means exhaustive.
EmbedResult find_embedding(const Graph& host, const EmbedPattern& pattern, Rng& rng,
                           long long budget = -1);

// Square-of-path adjacency on `length` consecutive positions starting at `base`.
void add_square_path_edges(EmbedPattern& pat, int base, int length);

// Blocks of square paths joined by single edges where `links[i]` is set:
// the structure of the linked-squares lemma.  Block i lives in domains[i].
struct LinkedBlocks {
    std::vector<int> lengths;
    std::vector<Bitset> domains;
    std::vector<bool> links;  // size lengths.size()-1; default all true
};

struct LinkedSquaresResult {
    EmbedStatus status = EmbedStatus::absent_in_sample;
    std::vector<std::vector<int>> blocks;
    long long nodes = 0;
};

LinkedSquaresResult find_linked_squares(const Graph& sampled, const LinkedBlocks& spec, Rng& rng,
                                        long long budget = -1);

}  // namespace perturb
