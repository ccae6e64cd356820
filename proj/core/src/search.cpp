#include "perturb/search.hpp"

namespace perturb {

EmbedResult find_embedding(const Graph& host, const EmbedPattern& pattern, Rng& rng,
                           long long budget) {
    EmbedResult res;
    const int size = pattern.size;
    if (static_cast<int>(pattern.domains.size()) != size)
        throw std::invalid_argument("find_embedding: one domain per position required");

    // pattern neighbors among earlier positions, per position
    std::vector<std::vector<int>> back(size);
    for (auto [a, b] : pattern.edges) {
        if (a == b || a < 0 || b < 0 || a >= size || b >= size)
            throw std::invalid_argument("find_embedding: bad pattern edge");
        if (a > b) std::swap(a, b);
        back[b].push_back(a);
    }

    std::vector<int> placed;
    placed.reserve(size);
    Bitset used(host.vertex_count());
    long long nodes = 0;
    bool out_of_budget = false;

    auto rec = [&](auto&& self) -> bool {
        int i = static_cast<int>(placed.size());
        if (i == size) return true;
        Bitset cand = pattern.domains[i];
        cand -= used;
        for (int j : back[i]) cand &= host.neighbors(placed[j]);
        auto options = cand.to_vector();
        rng.shuffle(options);
        for (int v : options) {
            ++nodes;
            if (budget >= 0 && nodes > budget) {
                out_of_budget = true;
                return false;
            }
            placed.push_back(v);
            used.set(v);
            if (self(self)) return true;
            used.reset(v);
            placed.pop_back();
            if (out_of_budget) return false;
        }
        return false;
    };

    bool found = rec(rec);
    res.nodes = nodes;
    if (found) {
        res.status = EmbedStatus::found;
        res.vertices = placed;
    } else {
        res.status = out_of_budget ? EmbedStatus::budget_exhausted : EmbedStatus::absent_in_sample;
    }
    return res;
}

void add_square_path_edges(EmbedPattern& pat, int base, int length) {
    for (int i = 0; i < length; ++i)
        for (int d = 1; d <= 2; ++d)
            if (i + d < length) pat.require_edge(base + i, base + i + d);
}

LinkedSquaresResult find_linked_squares(const Graph& sampled, const LinkedBlocks& spec, Rng& rng,
                                        long long budget) {
    const int s = static_cast<int>(spec.lengths.size());
    if (static_cast<int>(spec.domains.size()) != s)
        throw std::invalid_argument("find_linked_squares: one domain per block required");

    EmbedPattern pat;
    std::vector<int> base(s);
    for (int i = 0; i < s; ++i) {
        base[i] = pat.size;
        pat.size += spec.lengths[i];
    }
    pat.domains.resize(pat.size, Bitset(sampled.vertex_count()));
    for (int i = 0; i < s; ++i) {
        add_square_path_edges(pat, base[i], spec.lengths[i]);
        for (int j = 0; j < spec.lengths[i]; ++j) pat.domains[base[i] + j] = spec.domains[i];
    }
    for (int i = 0; i + 1 < s; ++i) {
        bool linked = spec.links.empty() ? true : spec.links[i];
        if (linked) pat.require_edge(base[i] + spec.lengths[i] - 1, base[i + 1]);
    }

    auto emb = find_embedding(sampled, pat, rng, budget);
    LinkedSquaresResult res;
    res.status = emb.status;
    res.nodes = emb.nodes;
    if (emb.status == EmbedStatus::found) {
        res.blocks.resize(s);
        for (int i = 0; i < s; ++i)
            res.blocks[i] = std::vector<int>(emb.vertices.begin() + base[i],
                                             emb.vertices.begin() + base[i] + spec.lengths[i]);
    }
    return res;
}

}  // namespace perturb
