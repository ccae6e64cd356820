#include "doctest.h"

#include "perturb/gadget.hpp"
#include "perturb/generators.hpp"

#include <cmath>

using namespace perturb;

namespace {

Graph complete_between(const SuperRegularInstance& inst) {
    GraphBuilder b(inst.total_vertices());
    for (int i = 0; i < inst.k; ++i)
        for (int j = i + 1; j < inst.k; ++j)
            inst.usets[i].for_each([&](int u) {
                inst.usets[j].for_each([&](int v) { b.add_edge(u, v); });
            });
    return b.build();
}

}  // namespace

TEST_CASE("gen_super_regular_instance: parameter checks and invariants") {
    CHECK_THROWS(gen_super_regular_instance(2, 506, 0.3, 0.05, 0.2, Seed{1}));  // delta0 < 2 delta1
    CHECK_THROWS(gen_super_regular_instance(1, 506, 0.3, 0.2, 0.05, Seed{1}));

    auto inst = gen_super_regular_instance(2, 506, 0.3, 0.2, 0.05, Seed{1});
    CHECK(inst.m >= static_cast<int>((1 - 0.2) * 506));
    CHECK(inst.m <= static_cast<int>((1 - 0.05) * 506) + 1);
    CHECK((506 - inst.m) % 10 == 0);
    std::string why;
    CHECK(check_instance_invariants(inst, &why));

    SUBCASE("d = 1 gives complete bipartite pairs") {
        auto full = gen_super_regular_instance(2, 86, 1.0, 0.3, 0.05, Seed{2});
        full.vset.for_each([&](int v) {
            for (int i = 0; i < 2; ++i)
                CHECK(intersection_count(full.bip.neighbors(v), full.usets[i]) == full.m);
        });
        CHECK(check_instance_invariants(full));
    }
}

TEST_CASE("plan_gadget_bookkeeping closes the counts exactly") {
    for (int k : {2, 3}) {
        for (int n : {200, 506, 1000, 2000}) {
            const int mod = 6 * k - 2;
            for (int gap = mod; gap <= n / 5; gap += mod) {
                int m = n - gap;
                if (m < static_cast<int>(0.8 * n)) break;
                auto plan = plan_gadget_bookkeeping(k, n, m);
                CHECK(plan.z == k * (m - 2 - plan.m0));
                CHECK(plan.s_c == plan.m0 - plan.t);
                CHECK(plan.z + plan.n_e == plan.s_c + 2);
                // V-count: 4 ends + 4z + 2nE + (t-1) singles = n + 4
                CHECK(4 + 4 * plan.z + 2 * plan.n_e + (plan.t - 1) == n + 4);
                CHECK(plan.n_e >= 0);
                CHECK(plan.n_e <= 3 * k - 2);
                double delta = static_cast<double>(n + 2 - m) / n;
                CHECK(std::abs(plan.t - (1 - 4.0 * k / (3 * k - 1) * delta) * n) <= 6 * k + 6);
            }
        }
    }
}

TEST_CASE("F membership oracle and F-tilde") {
    auto inst = gen_super_regular_instance(2, 86, 1.0, 0.3, 0.05, Seed{3});
    auto f = build_F(inst);
    std::vector<int> tuple{inst.u_begin(0), inst.u_begin(1) + 3};
    CHECK(f.contains(tuple));

    auto ftilde = sample_F_tilde(inst, Graph::empty(inst.total_vertices()));
    CHECK_FALSE(ftilde.contains(tuple));  // p = 0: no pattern support

    GraphBuilder b(inst.total_vertices());
    b.add_edge(tuple[0], tuple[1]);
    Graph one_edge = b.build();
    auto ftilde2 = sample_F_tilde(inst, one_edge);
    CHECK(ftilde2.contains(tuple));
}

TEST_CASE("exact k=2 hypergraph statistics behave like p^(2k-3)") {
    const int n = 506;
    auto inst = gen_super_regular_instance(2, n, 0.3, 0.2, 0.05, Seed{4});
    const double p = 40.0 / n;
    Graph overlay = gnp_bipartite_between(inst.total_vertices(), inst.usets[0], inst.usets[1], p,
                                          Seed{4}.child("ov"));
    auto st = exact_f_stats_k2(inst, overlay);
    CHECK(st.f_edges > 0);
    double ratio = static_cast<double>(st.f_tilde_edges) / static_cast<double>(st.f_edges);
    CHECK(ratio > 0.5 * p);
    CHECK(ratio < 2.0 * p);
    // minimum-degree floor with the instance's effective epsilon
    double eps = std::min(0.5 * inst.d, inst.d * (1 - std::pow(2.0, -0.5)));
    CHECK(static_cast<double>(st.min_degree_f) >= (1 - 2 * eps) * inst.m);
}

TEST_CASE("random_greedy_transversal on a complete instance reaches any target") {
    auto inst = gen_super_regular_instance(2, 86, 1.0, 0.3, 0.05, Seed{5});
    Graph overlay = complete_between(inst);
    Rng rng(Seed{6});
    auto res = random_greedy_transversal(inst, overlay, 30, Bitset(inst.total_vertices()), rng);
    CHECK_FALSE(res.starved);
    CHECK(res.family.size() == 30);
    Bitset seen(inst.total_vertices());
    for (const auto& c : res.family.copies) {
        for (int i = 0; i < 2; ++i) {
            CHECK(inst.usets[i].test(c[i]));
            CHECK_FALSE(seen.test(c[i]));
            seen.set(c[i]);
        }
    }
}

TEST_CASE("random_greedy_transversal starves at p=0") {
    auto inst = gen_super_regular_instance(2, 86, 1.0, 0.3, 0.05, Seed{7});
    Rng rng(Seed{8});
    auto res = random_greedy_transversal(inst, Graph::empty(inst.total_vertices()), 5,
                                         Bitset(inst.total_vertices()), rng);
    CHECK(res.starved);
    CHECK(res.family.size() == 0);
}

TEST_CASE("build_linkgraphs: complete and empty extremes") {
    auto inst = gen_super_regular_instance(2, 86, 1.0, 0.3, 0.05, Seed{9});
    Graph overlay = complete_between(inst);
    Rng rng(Seed{10});
    auto fam = random_greedy_transversal(inst, overlay, 20, Bitset(inst.total_vertices()), rng);
    REQUIRE(fam.family.size() == 20);

    Rng rng2(Seed{11});
    auto lg_full = build_linkgraphs(fam.family, inst, 1.0, rng2, nullptr);
    CHECK(lg_full.fstar.edge_count() == 20 * 19 / 2);  // d=1: complete F*
    CHECK(lg_full.fbar.arc_count() == 20 * 19);

    Rng rng3(Seed{12});
    auto lg_none = build_linkgraphs(fam.family, inst, 0.0, rng3, nullptr);
    CHECK(lg_none.fbar.arc_count() == 0);

    // F* minimum degree stays near-complete on generated instances
    auto inst2 = gen_super_regular_instance(2, 506, 0.3, 0.2, 0.05, Seed{90});
    Graph ov2 = gnp_bipartite_between(inst2.total_vertices(), inst2.usets[0], inst2.usets[1],
                                      0.05, Seed{91});
    Rng rng4(Seed{92});
    auto fam2 = random_greedy_transversal(inst2, ov2, 60, Bitset(inst2.total_vertices()), rng4);
    REQUIRE_FALSE(fam2.starved);
    Rng rng5(Seed{93});
    auto lg2 = build_linkgraphs(fam2.family, inst2, 0.1, rng5, nullptr);
    int s = fam2.family.size();
    for (int i = 0; i < s; ++i) CHECK(lg2.fstar.degree(i) >= static_cast<int>(0.96 * s) - 1);
}

TEST_CASE("dfs_random_greedy_path walks a complete link graph without backtracking") {
    auto inst = gen_super_regular_instance(2, 86, 1.0, 0.3, 0.05, Seed{13});
    Rng rng(Seed{14});
    auto fam =
        random_greedy_transversal(inst, complete_between(inst), 25, Bitset(inst.total_vertices()), rng);
    Rng rng2(Seed{15});
    auto lg = build_linkgraphs(fam.family, inst, 1.0, rng2, nullptr);
    Rng rng3(Seed{16});
    auto dfs = dfs_random_greedy_path(lg, 20, 10, rng3);
    REQUIRE(dfs.success);
    CHECK(dfs.dead_ends == 0);
    CHECK(static_cast<int>(dfs.path.size()) == 20);

    Rng rng4(Seed{17});
    auto lg0 = build_linkgraphs(fam.family, inst, 0.0, rng4, nullptr);
    Rng rng5(Seed{18});
    auto dfs0 = dfs_random_greedy_path(lg0, 20, 5, rng5);
    CHECK_FALSE(dfs0.success);
    CHECK(dfs0.dead_ends >= 5);
}

TEST_CASE("multipartite pipeline succeeds deterministically at d=1, p=1") {
    auto inst = gen_super_regular_instance(2, 86, 1.0, 0.3, 0.05, Seed{19});
    auto res = run_multipartite_pipeline(inst, 1.0, Seed{20});
    REQUIRE(res.success);
    CHECK(verify_square_path(res.union_graph, res.sequence, true));
    CHECK(static_cast<int>(res.sequence.size()) == inst.total_vertices());
    CHECK(res.sequence[0] == inst.x_tuple.second);
    CHECK(res.sequence[1] == inst.x_tuple.first);
    CHECK(res.sequence[res.sequence.size() - 2] == inst.y_tuple.first);
    CHECK(res.sequence.back() == inst.y_tuple.second);
}

TEST_CASE("multipartite pipeline reports the anchor stage at p=0") {
    auto inst = gen_super_regular_instance(2, 86, 1.0, 0.3, 0.05, Seed{21});
    auto res = run_multipartite_pipeline(inst, 0.0, Seed{22});
    REQUIRE_FALSE(res.success);
    REQUIRE_FALSE(res.stages.empty());
    CHECK(res.stages.back().stage == "anchor-x");
    CHECK_FALSE(res.stages.back().success);
}

TEST_CASE("multipartite pipeline at k=3, small desk instance") {
    auto inst = gen_super_regular_instance(3, 260, 0.5, 0.25, 0.06, Seed{23});
    double p = 24.0 * std::pow(260.0, -2.0 / 3.0);
    int wins = 0;
    for (uint64_t s = 0; s < 5; ++s) {
        auto res = run_multipartite_pipeline(inst, p, Seed{s}.child("k3"));
        if (res.success) {
            ++wins;
            CHECK(verify_square_path(res.union_graph, res.sequence, true));
        }
    }
    CHECK(wins >= 3);
}

TEST_CASE("bipartite split fractions stay in the admissible band") {
    for (int m : {1500, 1700, 2000}) {
        auto [q1, q2] = bipartite_split_fractions(2000, m, 0.2, 0.05);
        CHECK(q1 >= 1.0 / 7);
        CHECK(q1 <= 3.0 / 7);
        CHECK(q2 >= 1.0 / 7);
        CHECK(q2 <= 3.0 / 7);
    }
}

TEST_CASE("bipartite pipeline at a reduced desk scale") {
    const int n = 700;
    const int total = 2 * n;
    Bitset v(total), u(total);
    for (int i = 0; i < n; ++i) v.set(i);
    for (int i = n; i < total; ++i) u.set(i);
    Graph host = gnp_bipartite_between(total, v, u, 0.6, Seed{24});
    std::pair<int, int> x{0, 1}, y{n, n + 1};
    double p = 140.0 / n;
    int wins = 0;
    for (uint64_t s = 0; s < 4; ++s) {
        auto res = run_bipartite_pipeline(host, u, v, x, y, p, Seed{s}.child("bip"));
        if (res.success) {
            ++wins;
            CHECK(verify_square_path(res.union_graph, res.sequence, true));
            CHECK(static_cast<int>(res.sequence.size()) == total);
            CHECK(res.sequence[0] == x.second);
            CHECK(res.sequence.back() == y.second);
        }
    }
    CHECK(wins >= 2);
}

TEST_CASE("sublinear square paths: trivial and failure modes") {
    auto res = find_sublinear_square_paths(Graph::complete(40), 2, 1, 0.5, Seed{25});
    CHECK(res.success);

    // p = 0 with a large minimum degree still needs random sub-paths
    auto ext = extremal_bipartite(Rational(49, 100), 100);
    auto res0 = find_sublinear_square_paths(ext.graph, 2, 1, 0.0, Seed{26});
    CHECK_FALSE(res0.success);
}

TEST_CASE("sublinear square paths at k=2 desk scale") {
    const int n = 800;
    const int m = static_cast<int>(std::pow(n, 0.4));
    GraphBuilder b(n);
    for (int i = 0; i < n; ++i)
        for (int d = 1; d <= (m + 1) / 2; ++d) b.add_edge(i, (i + d) % n);
    Graph g = b.build();
    double p = 10.0 * std::log(n) / n;
    int wins = 0;
    for (uint64_t s = 0; s < 10; ++s) {
        auto res = find_sublinear_square_paths(g, 2, 1, p, Seed{s}.child("sub"));
        if (res.success) {
            ++wins;
            Bitset seen(n);
            for (const auto& piece : res.pieces) {
                for (int v2 : piece.vertices) {
                    CHECK_FALSE(seen.test(v2));
                    seen.set(v2);
                }
            }
        }
    }
    CHECK(wins >= 8);
}
