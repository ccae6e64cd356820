#pragma once

#include "perturb/bitset.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace perturb {

// Maximum bipartite matching (Hopcroft-Karp).  Adjacency is supplied as a
// bitset row per left vertex; right universe is rows' bitset universe.
struct BipartiteMatching {
    std::vector<int> left_match;   // right index or -1, per left vertex
    std::vector<int> right_match;  // left index or -1, per right vertex
    int size = 0;
};

BipartiteMatching max_bipartite_matching(const std::vector<Bitset>& left_rows, int right_size);

// When a perfect matching on the left side fails, exposes a violating Hall
// set: left vertices whose joint neighborhood is smaller than the set.
struct HallViolation {
    std::vector<int> left_set;
    Bitset joint_neighborhood;
};

std::optional<HallViolation> hall_violation(const std::vector<Bitset>& left_rows, int right_size,
                                            const BipartiteMatching& m);

// Maximum matching in a general graph (Edmonds blossom contraction),
// adjacency as bitset rows over [0,n).
std::vector<int> max_general_matching(const std::vector<Bitset>& rows);

}  // namespace perturb
