#include "perturb/oracle.hpp"

#include <algorithm>
#include <cassert>

namespace perturb {

const char* to_string(SearchStatus s) {
    switch (s) {
        case SearchStatus::found: return "found";
        case SearchStatus::absent: return "absent";
        case SearchStatus::budget_exhausted: return "budget_exhausted";
    }
    return "?";
}

namespace {

struct HamSearch {
    const Graph& g;
    int n;
    long long budget;
    long long nodes = 0;
    bool out_of_budget = false;
    std::vector<int> ord;
    Bitset unused;

    HamSearch(const Graph& g_, long long budget_)
        : g(g_), n(g_.vertex_count()), budget(budget_), unused(Bitset::full(g_.vertex_count())) {}

    bool spend() {
        ++nodes;
        if (budget >= 0 && nodes > budget) {
            out_of_budget = true;
            return false;
        }
        return true;
    }

    // every unplaced vertex still needs 4 cycle-neighbors among the unplaced
    // vertices and the four open ends of the partial ordering
    bool degree_prune() const {
        if (n < 5) return true;
        Bitset pool = unused;
        size_t i = ord.size();
        pool.set(ord[i - 1]);
        if (i >= 2) pool.set(ord[i - 2]);
        pool.set(ord[0]);
        if (i >= 2) pool.set(ord[1]);
        bool ok = true;
        unused.for_each([&](int v) {
            if (ok && intersection_count(g.neighbors(v), pool) < 4) ok = false;
        });
        return ok;
    }

    bool extend() {
        size_t i = ord.size();
        if (i == static_cast<size_t>(n)) {
            // closure edges: (n-1,0) d1, (n-1,1) d2, (n-2,0) d2
            if (!g.has_edge(ord[n - 1], ord[0])) return false;
            if (n >= 4 && !g.has_edge(ord[n - 1], ord[1])) return false;
            if (n >= 4 && !g.has_edge(ord[n - 2], ord[0])) return false;
            if (n >= 4 && ord[1] > ord[n - 1]) return false;  // reflection symmetry
            return true;
        }
        Bitset cand = unused;
        cand &= g.neighbors(ord[i - 1]);
        if (i >= 2) cand &= g.neighbors(ord[i - 2]);
        if (i + 2 >= static_cast<size_t>(n) && n >= 4) cand &= g.neighbors(ord[0]);
        if (i + 1 == static_cast<size_t>(n) && n >= 4) cand &= g.neighbors(ord[1]);

        for (int v = cand.next(0); v >= 0; v = cand.next(v + 1)) {
            if (!spend()) return false;
            ord.push_back(v);
            unused.reset(v);
            if (degree_prune() && extend()) return true;
            unused.set(v);
            ord.pop_back();
            if (out_of_budget) return false;
        }
        return false;
    }
};

}  // namespace

HamCycleResult find_square_ham_cycle(const Graph& g, long long budget) {
    HamCycleResult res;
    const int n = g.vertex_count();
    if (n < 3) {
        res.status = SearchStatus::absent;
        return res;
    }
    HamSearch s(g, budget);
    int start = 0;
    for (int v = 1; v < n; ++v)
        if (g.degree(v) < g.degree(start)) start = v;
    if (n >= 5 && g.degree(start) < 4) {
        res.status = SearchStatus::absent;
        return res;
    }
    s.ord.push_back(start);
    s.unused.reset(start);
    bool found = s.extend();
    res.nodes = s.nodes;
    if (found) {
        res.status = SearchStatus::found;
        res.ordering = s.ord;
        if (!verify_square_cycle(g, res.ordering))
            throw std::logic_error("find_square_ham_cycle: ordering failed verification");
    } else {
        res.status = s.out_of_budget ? SearchStatus::budget_exhausted : SearchStatus::absent;
    }
    return res;
}

namespace {

struct PathSearch {
    const Graph& g;
    const std::vector<int>& target_suffix;  // positions k-2, k-1
    int k;
    bool relax;
    long long budget;
    long long nodes = 0;
    bool out_of_budget = false;
    std::vector<int> seq;
    Bitset avail;

    PathSearch(const Graph& g_, const std::vector<int>& suffix, int k_, bool relax_,
               const Bitset& avail_, long long budget_)
        : g(g_), target_suffix(suffix), k(k_), relax(relax_), budget(budget_), avail(avail_) {}

    bool done_check() const {
        std::vector<int> full = seq;
        full.push_back(target_suffix[0]);
        full.push_back(target_suffix[1]);
        return verify_square_path(g, full, relax);
    }

    bool extend() {
        int i = static_cast<int>(seq.size());
        if (i == k - 2) return done_check();
        ++nodes;
        if (budget >= 0 && nodes > budget) {
            out_of_budget = true;
            return false;
        }
        Bitset cand = avail;
        cand &= g.neighbors(seq[i - 1]);
        if (i >= 2) cand &= g.neighbors(seq[i - 2]);
        // joins to the fixed suffix; (k-3,k-2) and (k-3,k-1) are never exempt
        if (i == k - 3 || i == k - 4) cand &= g.neighbors(target_suffix[0]);
        if (i == k - 3) cand &= g.neighbors(target_suffix[1]);
        for (int v = cand.next(0); v >= 0; v = cand.next(v + 1)) {
            seq.push_back(v);
            avail.reset(v);
            if (extend()) return true;
            avail.set(v);
            seq.pop_back();
            if (out_of_budget) return false;
        }
        return false;
    }
};

}  // namespace

SquarePathResult find_square_path(const Graph& g, std::pair<int, int> left,
                                  std::pair<int, int> right, const Bitset& cover,
                                  bool relax_end_edges, long long budget) {
    SquarePathResult res;
    int ends[4] = {left.first, left.second, right.first, right.second};
    for (int v : ends) {
        if (v < 0 || v >= g.vertex_count()) throw std::out_of_range("find_square_path: vertex out of range");
        if (!cover.test(v)) throw std::invalid_argument("find_square_path: tuple outside cover");
    }
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            if (ends[i] == ends[j]) throw std::invalid_argument("find_square_path: tuples must be disjoint");

    const int k = cover.count();
    if (k < 4) throw std::invalid_argument("find_square_path: cover smaller than the two tuples");

    std::vector<int> suffix{right.first, right.second};
    Bitset avail = cover;
    avail.reset(left.first);
    avail.reset(left.second);
    avail.reset(right.first);
    avail.reset(right.second);

    PathSearch s(g, suffix, k, relax_end_edges, avail, budget);
    s.seq = {left.second, left.first};
    bool found = s.extend();
    res.nodes = s.nodes;
    if (found) {
        res.status = SearchStatus::found;
        res.seq = s.seq;
        res.seq.push_back(right.first);
        res.seq.push_back(right.second);
        if (!verify_square_path(g, res.seq, relax_end_edges))
            throw std::logic_error("find_square_path: sequence failed verification");
    } else {
        res.status = s.out_of_budget ? SearchStatus::budget_exhausted : SearchStatus::absent;
    }
    return res;
}

namespace {

// visits every labeled embedding of P_k^2 inside `within`
template <typename F>
void enumerate_labeled_pk2(const Graph& g, int k, const Bitset& within, F&& on_copy) {
    std::vector<int> seq;
    seq.reserve(k);
    Bitset avail = within;

    auto rec = [&](auto&& self) -> void {
        int i = static_cast<int>(seq.size());
        if (i == k) {
            on_copy(seq);
            return;
        }
        Bitset cand = avail;
        if (i >= 1) cand &= g.neighbors(seq[i - 1]);
        if (i >= 2) cand &= g.neighbors(seq[i - 2]);
        for (int v = cand.next(0); v >= 0; v = cand.next(v + 1)) {
            seq.push_back(v);
            avail.reset(v);
            self(self);
            avail.set(v);
            seq.pop_back();
        }
    };
    rec(rec);
}

long long pk2_aut(int k) { return k == 3 ? 6 : 2; }

}  // namespace

long long count_pk2_copies(const Graph& g, int k, const Bitset& within) {
    if (k < 2) throw std::invalid_argument("count_pk2_copies: k must be >= 2");
    if (k == 2) return g.edges_within(within);  // Aut(K_2) special case
    long long labeled = 0;
    enumerate_labeled_pk2(g, k, within, [&](const std::vector<int>&) { ++labeled; });
    return labeled / pk2_aut(k);
}

Bitset pk2_covered_vertices(const Graph& g, int k, const Bitset& within) {
    Bitset covered(within.universe());
    if (k == 2) {
        within.for_each([&](int v) {
            if (intersection_count(g.neighbors(v), within) > 0) covered.set(v);
        });
        return covered;
    }
    enumerate_labeled_pk2(g, k, within, [&](const std::vector<int>& seq) {
        for (int v : seq) covered.set(v);
    });
    return covered;
}

PackingResult max_disjoint_pk2_packing(const Graph& g, int k, const Bitset& within,
                                       long long budget) {
    if (k < 2) throw std::invalid_argument("max_disjoint_pk2_packing: k must be >= 2");
    // copies deduplicated by vertex set: packing only cares which vertices a copy blocks
    std::vector<Bitset> copies;
    enumerate_labeled_pk2(g, k, within, [&](const std::vector<int>& seq) {
        Bitset s(within.universe());
        for (int v : seq) s.set(v);
        if (std::find(copies.begin(), copies.end(), s) == copies.end()) copies.push_back(s);
    });

    PackingResult res;
    long long nodes = 0;
    bool limited = false;
    int best = 0;

    // branch on the lowest coverable vertex: use one of its copies or skip it
    auto rec = [&](auto&& self, const Bitset& free, int current) -> void {
        ++nodes;
        if (budget >= 0 && nodes > budget) {
            limited = true;
            return;
        }
        best = std::max(best, current);
        if (current + free.count() / k <= best) return;  // greedy bound
        int pivot = -1;
        for (int v = free.next(0); v >= 0; v = free.next(v + 1)) {
            for (const auto& c : copies)
                if (c.test(v) && free.contains(c)) {
                    pivot = v;
                    break;
                }
            if (pivot >= 0) break;
        }
        if (pivot < 0) return;
        for (const auto& c : copies) {
            if (!c.test(pivot) || !free.contains(c)) continue;
            self(self, free - c, current + 1);
            if (limited) return;
        }
        Bitset without = free;
        without.reset(pivot);
        self(self, without, current);
    };
    rec(rec, within, 0);

    res.size = best;
    res.exact = !limited;
    res.nodes = nodes;
    return res;
}

namespace {

struct ComponentSpec {
    bool cycle;
    int len;

    bool operator==(const ComponentSpec&) const = default;
};

// embeds one path/cycle component into g avoiding `used`; prev_first breaks
// the interchange symmetry between identical components
bool embed_component(const Graph& g, const ComponentSpec& comp, Bitset& used, int prev_first,
                     std::vector<ComponentSpec>::const_iterator next,
                     std::vector<ComponentSpec>::const_iterator end, long long* budget,
                     bool* out_of_budget);

bool embed_rest(const Graph& g, Bitset& used, int prev_first,
                std::vector<ComponentSpec>::const_iterator it,
                std::vector<ComponentSpec>::const_iterator end, long long* budget,
                bool* out_of_budget) {
    if (it == end) return true;
    return embed_component(g, *it, used, prev_first, it + 1, end, budget, out_of_budget);
}

bool embed_component(const Graph& g, const ComponentSpec& comp, Bitset& used, int prev_first,
                     std::vector<ComponentSpec>::const_iterator next,
                     std::vector<ComponentSpec>::const_iterator end, long long* budget,
                     bool* out_of_budget) {
    const int n = g.vertex_count();
    std::vector<int> seq;
    seq.reserve(comp.len);

    auto rec = [&](auto&& self) -> bool {
        if (budget) {
            if (--(*budget) < 0) {
                *out_of_budget = true;
                return false;
            }
        }
        int i = static_cast<int>(seq.size());
        if (i == comp.len) {
            if (comp.cycle && comp.len > 2 && !g.has_edge(seq.back(), seq.front())) return false;
            int pass_first = (next != end && *next == comp) ? seq[0] : -1;
            return embed_rest(g, used, pass_first, next, end, budget, out_of_budget);
        }
        for (int v = 0; v < n; ++v) {
            if (used.test(v)) continue;
            if (i > 0 && !g.has_edge(seq[i - 1], v)) continue;
            if (i == 0 && v <= prev_first) continue;  // identical components in fixed order
            if (comp.cycle) {
                // rotations let the minimum lead; reflection orients the cycle
                if (i > 0 && v < seq[0]) continue;
                if (i == comp.len - 1 && comp.len > 2 && v < seq[1]) continue;
            } else if (comp.len >= 2 && i == comp.len - 1 && v < seq[0]) {
                continue;  // path reflection: smaller endpoint leads
            }
            seq.push_back(v);
            used.set(v);
            if (self(self)) return true;
            used.reset(v);
            seq.pop_back();
            if (*out_of_budget) return false;
        }
        return false;
    };
    return rec(rec);
}

}  // namespace

bool embeds_maxdeg2(const Graph& g, const MaxDeg2Graph& pattern, long long* budget) {
    if (pattern.total() > g.vertex_count()) return false;
    std::vector<ComponentSpec> comps;
    for (int c : pattern.cycle_lengths) comps.push_back({true, c});
    for (int p : pattern.path_lengths) comps.push_back({false, p});
    std::sort(comps.begin(), comps.end(), [](const ComponentSpec& a, const ComponentSpec& b) {
        if (a.cycle != b.cycle) return a.cycle;
        return a.len > b.len;
    });
    Bitset used(g.vertex_count());
    bool out_of_budget = false;
    bool ok = embed_rest(g, used, -1, comps.begin(), comps.end(), budget, &out_of_budget);
    if (out_of_budget) throw std::runtime_error("embeds_maxdeg2: budget exhausted");
    return ok;
}

UniversalityResult is_2_universal(const Graph& g, long long budget) {
    UniversalityResult res;
    const int n = g.vertex_count();
    if (n > 12) throw std::invalid_argument("is_2_universal: exhaustive mode capped at n = 12");
    long long remaining = budget;
    long long* b = budget >= 0 ? &remaining : nullptr;
    try {
        for (const auto& pattern : enumerate_maxdeg2(n)) {
            if (!embeds_maxdeg2(g, pattern, b)) {
                res.status = SearchStatus::found;
                res.universal = false;
                res.witness = pattern;
                res.nodes = budget >= 0 ? budget - remaining : 0;
                return res;
            }
        }
    } catch (const std::runtime_error&) {
        res.status = SearchStatus::budget_exhausted;
        return res;
    }
    res.status = SearchStatus::found;
    res.universal = true;
    res.nodes = budget >= 0 ? budget - remaining : 0;
    return res;
}

}  // namespace perturb
