#include "doctest.h"

#include "perturb/generators.hpp"
#include "perturb/powers.hpp"
#include "perturb/search.hpp"

using namespace perturb;

TEST_CASE("find_embedding places a square path in a complete host") {
    EmbedPattern pat;
    pat.size = 5;
    add_square_path_edges(pat, 0, 5);
    pat.domains.assign(5, Bitset::full(8));
    Rng rng(Seed{1});
    auto r = find_embedding(Graph::complete(8), pat, rng);
    REQUIRE(r.status == EmbedStatus::found);
    CHECK(verify_square_path(Graph::complete(8), r.vertices));
}

TEST_CASE("find_embedding respects domains and distinctness") {
    EmbedPattern pat;
    pat.size = 2;
    pat.require_edge(0, 1);
    pat.domains = {Bitset::of(6, {0, 1}), Bitset::of(6, {0, 1})};
    GraphBuilder b(6);
    b.add_edge(0, 1);
    Rng rng(Seed{2});
    auto r = find_embedding(b.build(), pat, rng);
    REQUIRE(r.status == EmbedStatus::found);
    CHECK(((r.vertices[0] == 0 && r.vertices[1] == 1) ||
           (r.vertices[0] == 1 && r.vertices[1] == 0)));

    // empty host graph: exhaustion reports absent_in_sample
    auto r2 = find_embedding(Graph::empty(6), pat, rng);
    CHECK(r2.status == EmbedStatus::absent_in_sample);
}

TEST_CASE("find_embedding budget exhaustion is distinct from absence") {
    EmbedPattern pat;
    pat.size = 4;
    add_square_path_edges(pat, 0, 4);
    pat.domains.assign(4, Bitset::full(40));
    Graph sparse = gnp(40, 0.08, Seed{3});
    Rng rng(Seed{4});
    auto r = find_embedding(sparse, pat, rng, 2);
    CHECK(r.status != EmbedStatus::found);
    // with budget 2 the search cannot have exhausted a 40-vertex domain
    CHECK(r.status == EmbedStatus::budget_exhausted);
}

TEST_CASE("find_linked_squares: degenerate s=1,k=2 reduces to an edge in a set") {
    LinkedBlocks spec;
    spec.lengths = {2};
    spec.domains = {Bitset::of(10, {2, 3, 4})};
    GraphBuilder b(10);
    b.add_edge(3, 4);
    b.add_edge(0, 1);  // outside the domain
    Rng rng(Seed{5});
    auto r = find_linked_squares(b.build(), spec, rng);
    REQUIRE(r.status == EmbedStatus::found);
    CHECK(((r.blocks[0][0] == 3 && r.blocks[0][1] == 4) ||
           (r.blocks[0][0] == 4 && r.blocks[0][1] == 3)));
}

TEST_CASE("find_linked_squares: complete sample yields any requested shape") {
    LinkedBlocks spec;
    spec.lengths = {3, 3, 3};
    spec.domains.assign(3, Bitset::full(20));
    spec.links = {true, true};
    Rng rng(Seed{6});
    auto r = find_linked_squares(Graph::complete(20), spec, rng);
    REQUIRE(r.status == EmbedStatus::found);
    // blocks are squares of paths and the linking edges exist
    Graph host = Graph::complete(20);
    for (const auto& blk : r.blocks) CHECK(verify_square_path(host, blk));
}

TEST_CASE("find_linked_squares: empty sample with k>=3 blocks is absent") {
    LinkedBlocks spec;
    spec.lengths = {3};
    spec.domains = {Bitset::full(12)};
    Rng rng(Seed{7});
    CHECK(find_linked_squares(Graph::empty(12), spec, rng).status ==
          EmbedStatus::absent_in_sample);
}

TEST_CASE("linked squares respect per-block domains and the link flags") {
    // two blocks in disjoint domains, joined only when the flag says so
    GraphBuilder b(8);
    // block structures inside {0..3} and {4..7}
    b.add_edge(0, 1);
    b.add_edge(4, 5);
    Graph host = b.build();
    LinkedBlocks spec;
    spec.lengths = {2, 2};
    spec.domains = {Bitset::of(8, {0, 1, 2, 3}), Bitset::of(8, {4, 5, 6, 7})};
    spec.links = {true};
    Rng rng(Seed{8});
    CHECK(find_linked_squares(host, spec, rng).status == EmbedStatus::absent_in_sample);

    spec.links = {false};
    auto r = find_linked_squares(host, spec, rng);
    REQUIRE(r.status == EmbedStatus::found);
    CHECK(spec.domains[0].test(r.blocks[0][0]));
    CHECK(spec.domains[1].test(r.blocks[1][0]));
}
