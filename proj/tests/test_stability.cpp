#include "doctest.h"

#include "perturb/generators.hpp"
#include "perturb/stability.hpp"

using namespace perturb;

TEST_CASE("verify_stable on H_{1/3} and swaps") {
    auto h = extremal_bipartite(Rational(1, 3), 9);
    StabilityWitness w{h.a, h.b, Rational(1, 3), Rational(1, 100)};
    CHECK(verify_stable(h.graph, w));

    StabilityWitness swapped{h.b, h.a, Rational(1, 3), Rational(1, 100)};
    CHECK_FALSE(verify_stable(h.graph, swapped));  // size condition fails
}

TEST_CASE("verify_stable rejects non-partitions") {
    auto h = extremal_bipartite(Rational(1, 3), 9);
    Bitset a = h.a;
    Bitset b = h.b;
    b.reset(b.next(0));
    CHECK_FALSE(verify_stable(h.graph, {a, b, Rational(1, 3), Rational(1, 100)}));
}

TEST_CASE("each stability condition can fail alone") {
    const int n = 60;
    const Rational alpha(1, 3), beta(1, 50);
    auto h = extremal_bipartite(alpha, n);

    SUBCASE("dense B interior") {
        GraphBuilder gb(h.graph);
        auto bs = h.b.to_vector();
        for (size_t i = 0; i < bs.size(); ++i)
            for (size_t j = i + 1; j < bs.size(); ++j) gb.add_edge(bs[i], bs[j]);
        CHECK_FALSE(verify_stable(gb.build(), {h.a, h.b, alpha, beta}));
    }
    SUBCASE("low bipartite minimum degree") {
        GraphBuilder gb(h.graph);
        int a0 = h.a.next(0);
        auto bs = h.b.to_vector();
        // strip a0 down to far below alpha n / 4
        for (size_t i = 0; i + 4 < bs.size(); ++i) gb.remove_edge(a0, bs[i]);
        CHECK_FALSE(verify_stable(gb.build(), {h.a, h.b, alpha, beta}));
    }
}

TEST_CASE("find_stable_partition: exhaustive recovers H_{1/4} classes at n=16") {
    auto h = extremal_bipartite(Rational(1, 4), 16);
    auto w = find_stable_partition(h.graph, Rational(1, 4), Rational(1, 20));
    REQUIRE(w.has_value());
    CHECK(verify_stable(h.graph, *w));
    CHECK(w->a.count() == 4);
}

TEST_CASE("find_stable_partition: generator round trip at n=120") {
    auto inst = stable_instance(Rational(1, 3), Rational(1, 50), 120, 0.0005, Seed{11});
    auto w = find_stable_partition(inst.graph, Rational(1, 3), Rational(1, 50));
    REQUIRE(w.has_value());
    CHECK(verify_stable(inst.graph, *w));
}

TEST_CASE("find_stable_partition: dense random graphs are not near-extremal") {
    Graph g = gnp(200, 0.5, Seed{21});
    StablePartitionOptions opts;
    opts.budget = 30000;
    auto w = find_stable_partition(g, Rational(1, 3), Rational(1, 100), opts);
    // recorded as an expectation, not a proof of instability
    CHECK_FALSE(w.has_value());
}
