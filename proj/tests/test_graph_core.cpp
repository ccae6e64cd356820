#include "doctest.h"

#include "perturb/generators.hpp"
#include "perturb/graph.hpp"
#include "perturb/powers.hpp"

#include <sstream>

using namespace perturb;

TEST_CASE("graph invariants: symmetry, no loops, edge count") {
    GraphBuilder b(5);
    b.add_edge(0, 1);
    b.add_edge(1, 2);
    b.add_edge(4, 0);
    Graph g = b.build();
    CHECK(g.edge_count() == 3);
    for (int u = 0; u < 5; ++u) {
        CHECK_FALSE(g.has_edge(u, u));
        for (int v = 0; v < 5; ++v) CHECK(g.has_edge(u, v) == g.has_edge(v, u));
    }
    long long total = 0;
    for (int v = 0; v < 5; ++v) total += g.degree(v);
    CHECK(total == 2 * g.edge_count());
    CHECK_THROWS(b.add_edge(2, 2));
}

TEST_CASE("union: identity, absorbing, and C6 chords") {
    Graph e5 = Graph::empty(5);
    CHECK(graph_union(e5, e5) == e5);
    Graph k5 = Graph::complete(5);
    CHECK(graph_union(k5, e5) == k5);

    GraphBuilder c6(6);
    for (int i = 0; i < 6; ++i) c6.add_edge(i, (i + 1) % 6);
    GraphBuilder chords(6);
    for (int i = 0; i < 6; ++i) {
        int j = (i + 2) % 6;
        if (!chords.has_edge(i, j)) chords.add_edge(i, j);
    }
    Graph sq = graph_union(c6.build(), chords.build());
    CHECK(sq == square_of_cycle(6));

    CHECK_THROWS(graph_union(e5, Graph::empty(6)));
}

TEST_CASE("union is commutative, associative, idempotent on random pairs") {
    for (uint64_t s = 0; s < 6; ++s) {
        Graph a = gnp(12, 0.3, Seed{s}.child("a"));
        Graph b = gnp(12, 0.3, Seed{s}.child("b"));
        Graph c = gnp(12, 0.3, Seed{s}.child("c"));
        CHECK(graph_union(a, b) == graph_union(b, a));
        CHECK(graph_union(graph_union(a, b), c) == graph_union(a, graph_union(b, c)));
        CHECK(graph_union(a, a) == a);
    }
}

TEST_CASE("degree_into") {
    Graph k4 = Graph::complete(4);
    CHECK(k4.degree_into(0, Bitset::of(4, {1, 2})) == 2);
    Graph e = Graph::empty(6);
    CHECK(e.degree_into(3, Bitset::full(6)) == 0);

    Graph c8sq = square_of_cycle(8);
    CHECK(c8sq.degree_into(0, Bitset::of(8, {1, 2, 3, 4})) == 2);

    // full set recovers the plain degree
    Graph g = gnp(10, 0.5, Seed{7});
    for (int v = 0; v < 10; ++v) CHECK(g.degree_into(v, Bitset::full(10)) == g.degree(v));
    CHECK_THROWS(g.degree_into(10, Bitset::full(10)));
}

TEST_CASE("common_neighborhood") {
    Graph k5 = Graph::complete(5);
    CHECK(k5.common_neighborhood({0, 1}, Bitset::full(5)) == Bitset::of(5, {2, 3, 4}));

    GraphBuilder star(5);  // K_{1,4} centered at 0
    for (int i = 1; i < 5; ++i) star.add_edge(0, i);
    CHECK(star.build().common_neighborhood({1, 2}, Bitset::full(5)) == Bitset::of(5, {0}));

    // C7^2 by brute force
    Graph c7 = square_of_cycle(7);
    Bitset expect(7);
    for (int v = 0; v < 7; ++v)
        if (v != 0 && v != 3 && c7.has_edge(0, v) && c7.has_edge(3, v)) expect.set(v);
    CHECK(c7.common_neighborhood({0, 3}, Bitset::full(7)) == expect);
    CHECK(expect == Bitset::of(7, {1, 2, 5}));

    // empty list returns the filter set
    CHECK(k5.common_neighborhood({}, Bitset::of(5, {0, 4})) == Bitset::of(5, {0, 4}));
    CHECK_THROWS(k5.common_neighborhood({1, 1}, Bitset::full(5)));
}

TEST_CASE("bipartite_density") {
    // complete bipartite on its classes
    auto ext = extremal_bipartite(Rational(1, 3), 9);
    CHECK(ext.graph.bipartite_density(ext.a, ext.b) == Rational(1));
    // restriction of a complete bipartite graph stays density one
    Bitset a2(9);
    a2.set(0);
    a2.set(1);
    CHECK(ext.graph.bipartite_density(a2, ext.b) == Rational(1));

    Graph e = Graph::empty(6);
    CHECK(e.bipartite_density(Bitset::of(6, {0, 1}), Bitset::of(6, {2, 3})) == Rational(0));

    Graph k34 = graph_union(extremal_bipartite(Rational(3, 7), 7).graph, Graph::empty(7));
    CHECK(k34.bipartite_density(Bitset::of(7, {0, 1, 2}), Bitset::of(7, {3, 4, 5, 6})) ==
          Rational(1));

    CHECK_THROWS(e.bipartite_density(Bitset::of(6, {0}), Bitset::of(6, {0, 1})));
    CHECK_THROWS(e.bipartite_density(Bitset(6), Bitset::of(6, {1})));
}

TEST_CASE("edge list round trip, comments, digraph variant") {
    Graph g = gnp(20, 0.3, Seed{42});
    std::ostringstream os;
    write_edge_list(os, g);
    std::istringstream is("# comment line\n\n" + os.str());
    CHECK(read_edge_list(is) == g);

    std::istringstream bad("3 1\n2 1\n");
    CHECK_THROWS(read_edge_list(bad));

    DiGraph d = gnp_directed(9, 0.4, Seed{43});
    std::ostringstream os2;
    write_edge_list(os2, d);
    std::istringstream is2(os2.str());
    DiGraph d2 = read_edge_list_digraph(is2);
    CHECK(d2.arc_count() == d.arc_count());
    for (int u = 0; u < 9; ++u)
        for (int v = 0; v < 9; ++v)
            if (u != v) CHECK(d.has_arc(u, v) == d2.has_arc(u, v));
}

TEST_CASE("rational parsing") {
    CHECK(parse_rational("1/3") == Rational(1, 3));
    CHECK(parse_rational("0.3333") == Rational(3333, 10000));
    CHECK(parse_rational("2") == Rational(2));
    CHECK(parse_rational("-0.5") == Rational(-1, 2));
    CHECK_THROWS(parse_rational("1/0"));
}
