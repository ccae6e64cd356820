#include "perturb/extremal.hpp"

#include "perturb/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace perturb {

namespace {

// degree threshold "at least |S| - bound" evaluated exactly
bool deg_at_least(long long deg, long long size, const Rational& slack) {
    return Rational(deg) >= Rational(size) - slack;
}

// The three deleted positions of the balancing gadget (0-indexed within
// P_{3k+b}^2): outside the end tuples, spanning at least 3 so they induce no
// triangle, and leaving a remainder of 1-density at most m1(P_k^2).
// Computed rather than tabulated; prefers an independent triple.
std::optional<std::array<int, 3>> deletion_triple(int k, int b) {
    const int len = 3 * k + b;
    if (len - 3 > kOneDensityCap) return std::nullopt;
    const Rational bound(2 * k - 3, k - 1);
    Graph pattern = square_of_path(len);

    auto remainder_ok = [&](int p1, int p2, int p3) {
        std::vector<int> keep;
        for (int i = 0; i < len; ++i)
            if (i != p1 && i != p2 && i != p3) keep.push_back(i);
        GraphBuilder hb(static_cast<int>(keep.size()));
        for (size_t i = 0; i < keep.size(); ++i)
            for (size_t j = i + 1; j < keep.size(); ++j)
                if (pattern.has_edge(keep[i], keep[j]))
                    hb.add_edge(static_cast<int>(i), static_cast<int>(j));
        Graph h = hb.build();
        if (h.edge_count() == 0) return true;
        return one_density(h) <= bound;
    };

    std::optional<std::array<int, 3>> fallback;
    for (int p1 = 2; p1 <= len - 3; ++p1)
        for (int p2 = p1 + 1; p2 <= len - 3; ++p2)
            for (int p3 = p2 + 1; p3 <= len - 3; ++p3) {
                if (p3 - p1 < 3) continue;
                if (!remainder_ok(p1, p2, p3)) continue;
                if (p2 - p1 >= 3 && p3 - p2 >= 3) return std::array<int, 3>{p1, p2, p3};
                if (!fallback) fallback = std::array<int, 3>{p1, p2, p3};
            }
    return fallback;
}

struct PieceBuild {
    const Graph& g;
    const Graph& round1;
    Bitset& uncovered;
    std::vector<StageReport>& log;
};

// positions of the pattern P_L^2 occupied by H-vertices vs inserted ones;
// pairs between two inserted vertices carry fixed_pair_tag (the balancing
// gadget realizes them by a random path, the covering gadget by g-edges)
SquarePathPiece assemble_pattern_piece(int len, const std::vector<std::pair<int, int>>& fixed,
                                       const std::vector<int>& h_positions,
                                       const std::vector<int>& h_vertices, int rnd_round,
                                       EdgeProvenance fixed_pair_tag) {
    std::vector<int> at(len, -1);
    for (auto [pos, v] : fixed) at[pos] = v;
    for (size_t i = 0; i < h_positions.size(); ++i) at[h_positions[i]] = h_vertices[i];
    SquarePathPiece piece;
    piece.vertices = at;
    Bitset is_fixed(len);
    for (auto [pos, v] : fixed) {
        is_fixed.set(pos);
        (void)v;
    }
    for (int i = 0; i < len; ++i)
        for (int d = 1; d <= 2; ++d) {
            int j = i + d;
            if (j >= len) continue;
            if (is_fixed.test(i) && is_fixed.test(j))
                piece.tag_edge(at[i], at[j], fixed_pair_tag);
            else if (is_fixed.test(i) != is_fixed.test(j))
                piece.tag_edge(at[i], at[j], det_edge());
            else
                piece.tag_edge(at[i], at[j], rnd_edge(rnd_round));
        }
    return piece;
}

}  // namespace

bool balance_partition(const Graph& g, const StabilityWitness& w, int k, const Graph& round1,
                       const Graph& round2, EmbedState& st, std::vector<StageReport>& log,
                       Rng& rng, const ExtremalConfig& cfg) {
    const int n = g.vertex_count();
    const Bitset& A = w.a;
    const Bitset& B = w.b;
    const long long size_a = A.count();
    const long long size_b = B.count();
    const long long floor_n = n / (k + 1);
    const int a_rem = static_cast<int>(n - (k + 1) * floor_n);
    const Rational beta_n = w.beta * n;

    Bitset uncovered = Bitset::full(n);
    auto fail = [&](const std::string& detail) {
        log.push_back({"balance", false, detail});
        return false;
    };

    Graph union_r1 = graph_union(g, round1);

    if (size_a > floor_n) {
        // surplus case: m-1 copies of P_{3k+2}^2 and one P_{3k+2+a}^2, three
        // vertices of each in A realized by a random P3, the rest in B
        const long long m = size_a - floor_n;
        for (long long j = 1; j <= m; ++j) {
            const int b = (j < m) ? 2 : 2 + a_rem;
            const int len = 3 * k + b;
            auto triple = deletion_triple(k, b);
            if (!triple) return fail("no deletion triple for k=" + std::to_string(k));

            Bitset a_avail(n);
            A.for_each([&](int v) {
                if (uncovered.test(v) && deg_at_least(g.degree_into(v, B), size_b, beta_n))
                    a_avail.set(v);
            });
            EmbedPattern p3;
            p3.size = 3;
            p3.require_edge(0, 1);
            p3.require_edge(1, 2);
            p3.domains.assign(3, a_avail);
            auto path3 = find_embedding(round1, p3, rng, cfg.embed_budget);
            if (path3.status != EmbedStatus::found) return fail("no P3 in the A-side of round 1");

            Bitset b_good = g.common_neighborhood(path3.vertices, B);
            b_good &= uncovered;
            Bitset filtered(n);
            b_good.for_each([&](int v) {
                if (deg_at_least(g.degree_into(v, A), size_a, beta_n)) filtered.set(v);
            });

            // embed the pattern minus the triple into round1[B_good]
            EmbedPattern hp;
            std::vector<int> h_positions;
            for (int i = 0; i < len; ++i)
                if (i != (*triple)[0] && i != (*triple)[1] && i != (*triple)[2])
                    h_positions.push_back(i);
            hp.size = static_cast<int>(h_positions.size());
            std::vector<int> pos_index(len, -1);
            for (size_t i = 0; i < h_positions.size(); ++i) pos_index[h_positions[i]] = static_cast<int>(i);
            for (size_t i = 0; i < h_positions.size(); ++i)
                for (size_t j = i + 1; j < h_positions.size(); ++j)
                    if (h_positions[j] - h_positions[i] <= 2)
                        hp.require_edge(static_cast<int>(i), static_cast<int>(j));
            hp.domains.assign(hp.size, filtered);
            auto hemb = find_embedding(round1, hp, rng, cfg.embed_budget);
            if (hemb.status != EmbedStatus::found) return fail("no balancing gadget in round 1");

            std::vector<std::pair<int, int>> fixed{{(*triple)[0], path3.vertices[0]},
                                                   {(*triple)[1], path3.vertices[1]},
                                                   {(*triple)[2], path3.vertices[2]}};
            auto piece = assemble_pattern_piece(len, fixed, h_positions, hemb.vertices, 1,
                                                rnd_edge(1));
            if (!verify_square_path(union_r1, piece.vertices))
                throw std::logic_error("balance: surplus piece failed verification");
            for (int v : piece.vertices) uncovered.reset(v);
            st.f1.pieces.push_back(std::move(piece));
        }
    } else {
        // deficit case: P_{k+1}^2 copies in B minus the dense-in-B core, then
        // P_{2k+1}^2 copies seeded at the core vertices
        const long long m = floor_n - size_a;
        const Rational bstar_thr = Rational(4) * k * k * w.beta * n;
        Bitset bstar(n);
        B.for_each([&](int v) {
            if (Rational(g.degree_into(v, B)) >= bstar_thr) bstar.set(v);
        });
        const long long m0 = std::max(0LL, m - bstar.count());
        const int need = static_cast<int>((k + 1) * m0 + a_rem);

        if (need > 0) {
            Bitset region = B - bstar;
            auto sub = sublinear_pieces(g, round2, 2, region, k, need, rng, cfg.embed_budget);
            log.push_back(sub.report);
            if (!sub.success) return fail("sublinear square paths fell short");
            for (auto& piece : sub.pieces) {
                for (int v : piece.vertices) uncovered.reset(v);
                st.f1.pieces.push_back(std::move(piece));
            }
        }

        const long long seeded = m - m0;
        if (seeded > 0) {
            // the highest-B-degree core vertices get covered
            std::vector<int> core = bstar.to_vector();
            std::stable_sort(core.begin(), core.end(), [&](int u, int v) {
                return g.degree_into(u, B) > g.degree_into(v, B);
            });
            core.resize(static_cast<size_t>(seeded));
            Bitset b_low(n);  // vertices with weak degree into A
            B.for_each([&](int v) {
                if (!deg_at_least(g.degree_into(v, A), size_a, beta_n)) b_low.set(v);
            });
            for (int w_vertex : core) {
                Bitset nw = g.neighbors(w_vertex) & B;
                nw -= bstar;
                nw -= b_low;
                nw &= uncovered;
                LinkedBlocks blocks;
                blocks.lengths = {k, k};
                blocks.domains = {nw, nw};
                blocks.links = {true};
                auto linked = find_linked_squares(round1, blocks, rng, cfg.embed_budget);
                if (linked.status != EmbedStatus::found)
                    return fail("no seeded P_{2k+1}^2 gadget in round 1");
                SquarePathPiece piece;
                piece.vertices = linked.blocks[0];
                piece.vertices.push_back(w_vertex);
                for (int v : linked.blocks[1]) piece.vertices.push_back(v);
                const int len = 2 * k + 1;
                for (int i = 0; i < len; ++i)
                    for (int d = 1; d <= 2; ++d) {
                        int jj = i + d;
                        if (jj >= len) continue;
                        bool det = (i == k) != (jj == k);
                        piece.tag_edge(piece.vertices[i], piece.vertices[jj],
                                       det ? det_edge() : rnd_edge(1));
                    }
                if (!verify_square_path(union_r1, piece.vertices))
                    throw std::logic_error("balance: seeded piece failed verification");
                for (int v : piece.vertices) uncovered.reset(v);
                st.f1.pieces.push_back(std::move(piece));
            }
        }
    }

    st.a1 = A & uncovered;
    st.b1 = B & uncovered;
    const long long lhs = st.b1.count();
    const long long rhs = static_cast<long long>(k) *
                          (st.a1.count() - static_cast<long long>(st.f1.pieces.size()));
    if (lhs != rhs)
        throw std::logic_error("balance: |B1| != k(|A1| - |F1|) (" + std::to_string(lhs) + " vs " +
                               std::to_string(rhs) + ")");
    log.push_back({"balance", true, std::to_string(st.f1.pieces.size()) + " pieces"});
    return true;
}

bool cover_low_degree(const Graph& g, const StabilityWitness& w, int k, const Graph& round1,
                      EmbedState& st, std::vector<StageReport>& log, Rng& rng,
                      const ExtremalConfig& cfg) {
    const int n = g.vertex_count();
    const Bitset& A = w.a;
    const Bitset& B = w.b;
    const long long size_a = A.count();
    const long long size_b = B.count();
    const Rational beta_n = w.beta * n;
    const Rational beta8 = Rational(8) * k * k * w.beta * n;

    auto fail = [&](const std::string& detail) {
        log.push_back({"cover", false, detail});
        return false;
    };
    Graph union_r1 = graph_union(g, round1);

    Bitset uncovered = st.a1 | st.b1;
    Bitset a_low(n), b_low(n);
    st.a1.for_each([&](int v) {
        if (!deg_at_least(g.degree_into(v, B), size_b, beta_n)) a_low.set(v);
    });
    st.b1.for_each([&](int v) {
        if (!deg_at_least(g.degree_into(v, A), size_a, beta8)) b_low.set(v);
    });

    // low-degree A vertices ride in the middle of a P_{2k+1}^2 with the rest in B
    for (int u = a_low.next(0); u >= 0; u = a_low.next(u + 1)) {
        Bitset nu = g.neighbors(u) & st.b1;
        nu -= b_low;
        nu &= uncovered;
        LinkedBlocks blocks;
        blocks.lengths = {k, k};
        blocks.domains = {nu, nu};
        blocks.links = {true};
        auto linked = find_linked_squares(round1, blocks, rng, cfg.embed_budget);
        if (linked.status != EmbedStatus::found) return fail("no covering gadget for a low A-vertex");
        SquarePathPiece piece;
        piece.vertices = linked.blocks[0];
        piece.vertices.push_back(u);
        for (int v : linked.blocks[1]) piece.vertices.push_back(v);
        const int len = 2 * k + 1;
        for (int i = 0; i < len; ++i)
            for (int d = 1; d <= 2; ++d) {
                int jj = i + d;
                if (jj >= len) continue;
                bool det = (i == k) != (jj == k);
                piece.tag_edge(piece.vertices[i], piece.vertices[jj], det ? det_edge() : rnd_edge(1));
            }
        if (!verify_square_path(union_r1, piece.vertices))
            throw std::logic_error("cover: A-piece failed verification");
        for (int v : piece.vertices) uncovered.reset(v);
        st.f2.pieces.push_back(std::move(piece));
    }

    // low-degree B vertices: P_{3k+2}^2 with one B' vertex, two good A vertices
    for (int wv = b_low.next(0); wv >= 0; wv = b_low.next(wv + 1)) {
        if (!uncovered.test(wv)) continue;
        // two uncovered good-A neighbors of w
        std::vector<int> us;
        Bitset cand = g.neighbors(wv) & st.a1;
        cand &= uncovered;
        cand -= a_low;
        for (int u = cand.next(0); u >= 0 && us.size() < 2; u = cand.next(u + 1)) us.push_back(u);
        if (us.size() < 2) return fail("a low B-vertex lacks two usable A-neighbors");

        Bitset nw = g.common_neighborhood({wv, us[0], us[1]}, st.b1);
        nw -= b_low;
        nw &= uncovered;
        LinkedBlocks blocks;
        blocks.lengths = {k, k - 1, k};
        blocks.domains = {nw, nw, nw};
        blocks.links = {false, true};
        auto linked = find_linked_squares(round1, blocks, rng, cfg.embed_budget);
        if (linked.status != EmbedStatus::found) return fail("no covering gadget for a low B-vertex");

        const int len = 3 * k + 2;
        std::vector<std::pair<int, int>> fixed{{k, us[0]}, {k + 1, wv}, {2 * k + 1, us[1]}};
        std::vector<int> h_positions;
        for (int i = 0; i < len; ++i)
            if (i != k && i != k + 1 && i != 2 * k + 1) h_positions.push_back(i);
        std::vector<int> h_vertices = linked.blocks[0];
        for (int v : linked.blocks[1]) h_vertices.push_back(v);
        for (int v : linked.blocks[2]) h_vertices.push_back(v);
        auto piece = assemble_pattern_piece(len, fixed, h_positions, h_vertices, 1, det_edge());
        if (!verify_square_path(union_r1, piece.vertices))
            throw std::logic_error("cover: B-piece failed verification");
        for (int v : piece.vertices) uncovered.reset(v);
        st.f2.pieces.push_back(std::move(piece));
    }

    st.a2 = st.a1 & uncovered;
    st.b2 = st.b1 & uncovered;
    const long long pieces12 = static_cast<long long>(st.f1.pieces.size() + st.f2.pieces.size());
    if (st.b2.count() != static_cast<long long>(k) * (st.a2.count() - pieces12))
        throw std::logic_error("cover: |B2| != k(|A2| - |F1| - |F2|)");
    log.push_back({"cover", true, std::to_string(st.f2.pieces.size()) + " pieces"});
    return true;
}

namespace {

// exact P_k^2 cover by branchings over the lowest uncovered vertex
bool exact_pk2_cover(const Graph& g, int k, const Bitset& within,
                     std::vector<std::vector<int>>& out) {
    if (within.none()) return true;
    int pivot = within.next(0);
    bool found = false;
    std::vector<int> seq;
    Bitset avail = within;

    auto try_copy = [&](auto&& self, int depth) -> bool {
        if (depth == k) {
            bool has_pivot = false;
            for (int v : seq) has_pivot |= (v == pivot);
            if (!has_pivot) return false;
            Bitset rest = within;
            for (int v : seq) rest.reset(v);
            std::vector<std::vector<int>> tail;
            if (!exact_pk2_cover(g, k, rest, tail)) return false;
            out.push_back(seq);
            for (auto& c : tail) out.push_back(std::move(c));
            return true;
        }
        Bitset cand = avail;
        if (depth >= 1) cand &= g.neighbors(seq[depth - 1]);
        if (depth >= 2) cand &= g.neighbors(seq[depth - 2]);
        for (int v = cand.next(0); v >= 0; v = cand.next(v + 1)) {
            // the copy must use the pivot; prune branches that no longer can
            if (depth == k - 1) {
                bool has_pivot = v == pivot;
                for (int u : seq) has_pivot |= (u == pivot);
                if (!has_pivot) continue;
            }
            seq.push_back(v);
            avail.reset(v);
            if (self(self, depth + 1)) return true;
            avail.set(v);
            seq.pop_back();
        }
        return false;
    };
    found = try_copy(try_copy, 0);
    return found;
}

}  // namespace

FactorResult find_pk2_factor(const Graph& g_random, const Bitset& within, int k, Rng& rng,
                             const ExtremalConfig& cfg) {
    if (within.count() % k != 0)
        throw std::invalid_argument("find_pk2_factor: |within| must be divisible by k");
    FactorResult res;
    if (within.none()) {
        res.success = true;
        return res;
    }

    if (k == 2) {
        // a P_2^2-factor is a perfect matching: exact via blossom augmentation
        auto verts = within.to_vector();
        std::vector<int> pos(g_random.vertex_count(), -1);
        for (size_t i = 0; i < verts.size(); ++i) pos[verts[i]] = static_cast<int>(i);
        std::vector<Bitset> rows(verts.size(), Bitset(static_cast<int>(verts.size())));
        for (size_t i = 0; i < verts.size(); ++i) {
            Bitset nb = g_random.neighbors(verts[i]) & within;
            nb.for_each([&](int v) { rows[i].set(pos[v]); });
        }
        auto match = max_general_matching(rows);
        int unmatched = 0;
        for (size_t i = 0; i < verts.size(); ++i) {
            if (match[i] < 0) {
                ++unmatched;
                continue;
            }
            if (static_cast<int>(i) < match[i]) {
                SquarePathPiece piece;
                piece.vertices = {verts[i], verts[match[i]]};
                piece.tag_edge(verts[i], verts[match[i]], rnd_edge(3));
                res.pieces.push_back(std::move(piece));
            }
        }
        res.success = unmatched == 0;
        res.residual = unmatched;
        return res;
    }

    if (within.count() <= 24) {
        std::vector<std::vector<int>> cover;
        if (exact_pk2_cover(g_random, k, within, cover)) {
            for (auto& seq : cover) {
                SquarePathPiece piece;
                piece.vertices = seq;
                for (int i = 0; i < k; ++i)
                    for (int d = 1; d <= 2 && i + d < k; ++d)
                        piece.tag_edge(seq[i], seq[i + d], rnd_edge(3));
                res.pieces.push_back(std::move(piece));
            }
            res.success = true;
            return res;
        }
        res.residual = within.count();
        return res;
    }

    // randomized greedy packing with 2-for-3 style repair over conflict sets
    for (int attempt = 0; attempt < cfg.factor_restarts; ++attempt) {
        std::vector<std::vector<int>> copies;
        Bitset avail = within;
        while (true) {
            EmbedPattern pat;
            pat.size = k;
            add_square_path_edges(pat, 0, k);
            pat.domains.assign(k, avail);
            auto emb = find_embedding(g_random, pat, rng, cfg.embed_budget);
            if (emb.status != EmbedStatus::found) break;
            copies.push_back(emb.vertices);
            for (int v : emb.vertices) avail.reset(v);
        }
        // repair: free two overlapping copies around a stuck region and re-cover
        for (int rounds = 0; rounds < 200 && avail.any(); ++rounds) {
            if (copies.empty()) break;
            Bitset region = avail;
            std::vector<size_t> freed;
            for (size_t tries = 0; tries < 2 && !copies.empty(); ++tries) {
                size_t idx = rng.next_below(copies.size());
                freed.push_back(idx);
                for (int v : copies[idx]) region.set(v);
            }
            std::sort(freed.rbegin(), freed.rend());
            std::vector<std::vector<int>> freed_copies;
            for (size_t idx : freed) {
                freed_copies.push_back(copies[idx]);
                copies.erase(copies.begin() + idx);
            }
            std::vector<std::vector<int>> cover;
            bool ok = region.count() <= 24 && region.count() % k == 0 &&
                      exact_pk2_cover(g_random, k, region, cover);
            if (ok) {
                for (auto& c : cover) copies.push_back(c);
                avail = Bitset(g_random.vertex_count());
            } else {
                for (auto& c : freed_copies) copies.push_back(c);
            }
            if (avail.none()) break;
        }
        if (avail.none() && static_cast<long long>(copies.size()) * k == within.count()) {
            for (auto& seq : copies) {
                SquarePathPiece piece;
                piece.vertices = seq;
                for (int i = 0; i < k; ++i)
                    for (int d = 1; d <= 2 && i + d < k; ++d)
                        piece.tag_edge(seq[i], seq[i + d], rnd_edge(3));
                res.pieces.push_back(std::move(piece));
            }
            res.success = true;
            return res;
        }
        res.residual = avail.count();
    }
    return res;
}

DiGraph build_aux_digraph(const std::vector<SquarePathPiece>& pieces, const Graph& round4) {
    DiGraphBuilder b(static_cast<int>(pieces.size()));
    for (size_t i = 0; i < pieces.size(); ++i)
        for (size_t j = 0; j < pieces.size(); ++j) {
            if (i == j) continue;
            if (round4.has_edge(pieces[i].last(), pieces[j].first()))
                b.add_arc(static_cast<int>(i), static_cast<int>(j));
        }
    return b.build();
}

namespace {

// exhaustive directed Hamilton cycle for small n
bool directed_ham_exhaustive(const DiGraph& d, std::vector<int>& cycle) {
    const int n = d.vertex_count();
    std::vector<int> ord{0};
    Bitset used(n);
    used.set(0);
    auto rec = [&](auto&& self) -> bool {
        if (static_cast<int>(ord.size()) == n) return d.has_arc(ord.back(), 0);
        Bitset cand = d.out_neighbors(ord.back());
        cand -= used;
        for (int v = cand.next(0); v >= 0; v = cand.next(v + 1)) {
            ord.push_back(v);
            used.set(v);
            if (self(self)) return true;
            used.reset(v);
            ord.pop_back();
        }
        return false;
    };
    if (!rec(rec)) return false;
    cycle = ord;
    return true;
}

bool directed_ham_backtrack(const DiGraph& d, Rng& rng, long long budget,
                            std::vector<int>& cycle) {
    const int n = d.vertex_count();
    std::vector<int> ord{0};
    Bitset used(n);
    used.set(0);
    long long nodes = 0;
    auto rec = [&](auto&& self) -> bool {
        if (static_cast<int>(ord.size()) == n) return d.has_arc(ord.back(), 0);
        if (++nodes > budget) return false;
        Bitset cand = d.out_neighbors(ord.back());
        cand -= used;
        auto opts = cand.to_vector();
        rng.shuffle(opts);
        for (int v : opts) {
            ord.push_back(v);
            used.set(v);
            if (self(self)) return true;
            used.reset(v);
            ord.pop_back();
            if (nodes > budget) return false;
        }
        return false;
    };
    if (!rec(rec)) return false;
    cycle = ord;
    return true;
}

// cycle cover by bipartite matching, then random patching into one cycle
bool directed_ham_patching(const DiGraph& d, Rng& rng, std::vector<int>& cycle) {
    const int n = d.vertex_count();
    std::vector<Bitset> rows;
    rows.reserve(n);
    for (int v = 0; v < n; ++v) rows.push_back(d.out_neighbors(v));
    auto match = max_bipartite_matching(rows, n);
    if (match.size != n) return false;
    std::vector<int> succ(n);
    for (int v = 0; v < n; ++v) succ[v] = match.left_match[v];

    auto cycles_of = [&]() {
        std::vector<std::vector<int>> cycles;
        std::vector<bool> seen(n, false);
        for (int v = 0; v < n; ++v) {
            if (seen[v]) continue;
            std::vector<int> c;
            int w = v;
            while (!seen[w]) {
                seen[w] = true;
                c.push_back(w);
                w = succ[w];
            }
            cycles.push_back(std::move(c));
        }
        return cycles;
    };

    for (int round = 0; round < 4 * n + 100; ++round) {
        auto cycles = cycles_of();
        if (cycles.size() == 1 && static_cast<int>(cycles[0].size()) == n) {
            cycle = cycles[0];
            return true;
        }
        // patch two cycles: arcs u->succ(x) and x->succ(u) swap the successors
        bool patched = false;
        for (size_t a = 0; a < cycles.size() && !patched; ++a)
            for (size_t b = a + 1; b < cycles.size() && !patched; ++b) {
                auto& ca = cycles[a];
                auto& cb = cycles[b];
                size_t off_a = rng.next_below(ca.size());
                size_t off_b = rng.next_below(cb.size());
                for (size_t i = 0; i < ca.size() && !patched; ++i)
                    for (size_t j = 0; j < cb.size() && !patched; ++j) {
                        int u = ca[(i + off_a) % ca.size()];
                        int x = cb[(j + off_b) % cb.size()];
                        if (d.has_arc(u, succ[x]) && d.has_arc(x, succ[u])) {
                            std::swap(succ[u], succ[x]);
                            patched = true;
                        }
                    }
            }
        if (!patched) return false;
    }
    return false;
}

}  // namespace

DirectedHamResult directed_ham_cycle(const DiGraph& d, Rng& rng, long long budget) {
    DirectedHamResult res;
    const int n = d.vertex_count();
    if (n < 2) {
        res.status = SearchStatus::absent;
        return res;
    }
    for (int v = 0; v < n; ++v)
        if (d.out_degree(v) == 0 || d.in_degree(v) == 0) {
            // a vertex without successors or predecessors is a hard obstruction
            res.status = n <= 12 ? SearchStatus::absent : SearchStatus::budget_exhausted;
            return res;
        }
    if (n <= 12) {
        std::vector<int> cycle;
        res.status = directed_ham_exhaustive(d, cycle) ? SearchStatus::found : SearchStatus::absent;
        res.cycle = cycle;
        return res;
    }
    std::vector<int> cycle;
    if (directed_ham_backtrack(d, rng, budget, cycle) || directed_ham_patching(d, rng, cycle)) {
        for (size_t i = 0; i < cycle.size(); ++i)
            if (!d.has_arc(cycle[i], cycle[(i + 1) % cycle.size()]))
                throw std::logic_error("directed_ham_cycle: invalid cycle");
        res.status = SearchStatus::found;
        res.cycle = std::move(cycle);
        return res;
    }
    res.status = SearchStatus::budget_exhausted;
    return res;
}

HallMatchResult hall_match(const std::vector<int>& cycle,
                           const std::vector<SquarePathPiece>& pieces, const Bitset& a2,
                           const Graph& g) {
    if (static_cast<int>(cycle.size()) != a2.count())
        throw std::invalid_argument("hall_match: |cycle edges| must equal |A2|");
    const int n_edges = static_cast<int>(cycle.size());
    auto a2_list = a2.to_vector();
    std::vector<int> pos(g.vertex_count(), -1);
    for (size_t i = 0; i < a2_list.size(); ++i) pos[a2_list[i]] = static_cast<int>(i);

    std::vector<Bitset> rows;
    for (int i = 0; i < n_edges; ++i) {
        const auto& f = pieces[cycle[i]];
        const auto& fp = pieces[cycle[(i + 1) % n_edges]];
        Bitset common = g.common_neighborhood(
            {f.second_last(), f.last(), fp.first(), fp.second()}, a2);
        Bitset row(static_cast<int>(a2_list.size()));
        common.for_each([&](int v) { row.set(pos[v]); });
        rows.push_back(std::move(row));
    }
    auto match = max_bipartite_matching(rows, static_cast<int>(a2_list.size()));
    HallMatchResult res;
    if (match.size != n_edges) {
        res.hall = hall_violation(rows, static_cast<int>(a2_list.size()), match);
        return res;
    }
    res.success = true;
    for (int i = 0; i < n_edges; ++i) res.connector.push_back(a2_list[match.left_match[i]]);
    return res;
}

ExtremalResult run_extremal_pipeline(const Graph& g, const StabilityWitness& w, int k, double p,
                                     Seed seed, const ExtremalConfig& cfg) {
    ExtremalResult res;
    res.seed = seed.base;
    const int n = g.vertex_count();
    if ((w.a | w.b) != Bitset::full(n) || w.a.intersects(w.b))
        throw std::invalid_argument("run_extremal_pipeline: witness must partition V");
    if (k < 2) throw std::invalid_argument("run_extremal_pipeline: k must be >= 2");

    // four rounds whose union is distributed exactly as G(n,p)
    std::array<Graph, 4> rounds;
    for (int i = 0; i < 4; ++i) {
        double q = 1.0 - std::pow(1.0 - p, cfg.round_shares[i]);
        rounds[i] = gnp(n, q, seed.child("round", i));
    }

    EmbedState st;
    Rng rng(seed.child("searches"));
    if (!balance_partition(g, w, k, rounds[0], rounds[1], st, res.stages, rng, cfg)) return res;
    if (!cover_low_degree(g, w, k, rounds[0], st, res.stages, rng, cfg)) return res;

    auto factor = find_pk2_factor(rounds[2], st.b2, k, rng, cfg);
    if (!factor.success) {
        res.stages.push_back({"factor", false,
                              std::to_string(factor.residual) + " vertices uncovered"});
        return res;
    }
    st.f3.pieces = std::move(factor.pieces);
    res.stages.push_back({"factor", true, std::to_string(st.f3.pieces.size()) + " pieces"});

    std::vector<SquarePathPiece> pieces;
    for (auto* fam : {&st.f1, &st.f2, &st.f3})
        for (auto& piece : fam->pieces) pieces.push_back(piece);
    if (static_cast<long long>(pieces.size()) != st.a2.count())
        throw std::logic_error("pipeline: |F| != |A2|");

    DiGraph aux = build_aux_digraph(pieces, rounds[3]);
    auto ham = directed_ham_cycle(aux, rng, cfg.digraph_budget);
    if (ham.status != SearchStatus::found) {
        res.stages.push_back({"digraph", false, std::string("directed Hamilton cycle: ") +
                                                    to_string(ham.status)});
        return res;
    }
    res.stages.push_back({"digraph", true, ""});

    auto match = hall_match(ham.cycle, pieces, st.a2, g);
    if (!match.success) {
        res.stages.push_back({"hall", false,
                              "deficient Hall set of " +
                                  std::to_string(match.hall ? match.hall->left_set.size() : 0) +
                                  " cycle edges"});
        return res;
    }
    res.stages.push_back({"hall", true, ""});

    // assembly: pieces in cycle order, one connector vertex after each
    std::vector<int> ordering;
    for (size_t i = 0; i < ham.cycle.size(); ++i) {
        const auto& piece = pieces[ham.cycle[i]];
        for (int v : piece.vertices) ordering.push_back(v);
        ordering.push_back(match.connector[i]);
        for (const auto& [e, tag] : piece.edge_provenance)
            res.edge_tags.emplace_back(e.first, e.second, tag);
        const auto& next = pieces[ham.cycle[(i + 1) % ham.cycle.size()]];
        res.edge_tags.emplace_back(piece.last(), next.first(), rnd_edge(4));
        for (int endpoint : {piece.second_last(), piece.last(), next.first(), next.second()})
            res.edge_tags.emplace_back(match.connector[i], endpoint, det_edge());
    }
    if (static_cast<int>(ordering.size()) != n)
        throw std::logic_error("pipeline: assembled ordering does not span V");

    Graph u = g;
    for (const auto& r : rounds) u = graph_union(u, r);
    res.union_graph = std::move(u);
    if (!verify_square_cycle(res.union_graph, ordering))
        throw std::logic_error("pipeline: assembled ordering failed verification");
    res.ordering = std::move(ordering);
    res.success = true;
    res.stages.push_back({"verified", true, ""});
    return res;
}

}  // namespace perturb
