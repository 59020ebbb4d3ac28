#include <stdexcept>
#include <vector>

#include "ccn/graph.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace ccn;

TEST_CASE("degrees on the small fixtures") {
  const CellGraph star = oracle::load_fixture("fig1_g1.json");
  CHECK(star.degree(2) == 3);
  CHECK(star.degree(1) == 1);
  CHECK(CellGraph::from_edge_list(2, {{1, 2}}).degree(1) == 1);
  CHECK(oracle::load_fixture("fig2.json").degree(2) == 6);
}

TEST_CASE("input sets are sorted and exclude loops") {
  std::vector<std::pair<int, int>> e{{3, 1}, {1, 2}};
  std::vector<int> loops{1};
  const CellGraph g = CellGraph::from_edge_list(3, e, loops);
  CHECK(g.inputs(1) == std::vector<Vertex>{2, 3});
  CHECK(g.degree(1) == 2);
  CHECK(g.has_loop(1));
  CHECK_FALSE(g.has_loop(2));
  CHECK(g.edges().front() == Edge{1, 2});
  CHECK(g.edge_index(3, 1) == 1);
  CHECK(g.edge_index(2, 3) == -1);
}

TEST_CASE("regularity") {
  CHECK(is_regular(ring(5)) == 2);
  CHECK(is_regular(complete(4)) == 3);
  CHECK_FALSE(is_regular(oracle::load_fixture("fig2.json")).has_value());
  CHECK(is_regular(petersen()) == 3);
  CHECK(is_regular(oracle::load_fixture("fig1_g3.json")) == 3);
}

TEST_CASE("bipartition") {
  const auto p = bipartition(path(3));
  REQUIRE(p);
  CHECK(p->part1 == std::vector<Vertex>{1, 3});
  CHECK(p->part2 == std::vector<Vertex>{2});
  CHECK_FALSE(bipartition(complete(3)));

  const auto f2 = bipartition(oracle::load_fixture("fig2.json"));
  REQUIRE(f2);
  CHECK(f2->part1 == std::vector<Vertex>{1, 3, 5, 7, 8, 9, 10});
  CHECK(f2->part2 == std::vector<Vertex>{2, 4, 6});
  CHECK(f2->side(4) == 2);
  CHECK(f2->side(10) == 1);

  std::vector<std::pair<int, int>> e{{1, 2}};
  std::vector<int> loops{2};
  CHECK_FALSE(bipartition(CellGraph::from_edge_list(2, e, loops)));
}

TEST_CASE("bipartition agrees with a brute-force odd-cycle search") {
  for (const char* name : {"fig1_g1.json", "fig1_g2.json", "fig1_g3.json", "fig3.json", "fig4.json", "fig5.json",
                           "ring4.json"}) {
    const CellGraph g = oracle::load_fixture(name);
    CHECK_MESSAGE(bipartition(g).has_value() == !oracle::has_odd_cycle(g), name);
  }
  for (const CellGraph& g : {cube(), complete_bipartite(2, 3), complete(4), ring(7), ring(8), star(5),
                             complete_bipartite_minus_matching(4), path(6)})
    CHECK(bipartition(g).has_value() == !oracle::has_odd_cycle(g));
}

TEST_CASE("(d,m)-graphs") {
  CHECK(is_dm_graph(cube()) == DmParams{3, 4});
  CHECK(is_dm_graph(oracle::load_fixture("fig3.json")) == DmParams{3, 4});
  CHECK(is_dm_graph(complete_bipartite_minus_matching(4)) == DmParams{3, 4});
  CHECK(is_dm_graph(ring(4)) == DmParams{2, 2});
  CHECK_FALSE(is_dm_graph(ring(5)));
  CHECK_FALSE(is_dm_graph(complete_bipartite(2, 3)));
}

TEST_CASE("the two (3,4) fixtures are isomorphic") {
  // Q3 and K_{4,4} minus a perfect matching are the same graph; the
  // automorphism group of Q3 has order 48.
  CHECK(oracle::automorphisms(cube()).size() == 48);
  CHECK(oracle::automorphisms(complete_bipartite_minus_matching(4)).size() == 48);
}

TEST_CASE("named constructors") {
  const CellGraph r = ring(4);
  CHECK(r.edges() == std::vector<Edge>{{1, 2}, {1, 4}, {2, 3}, {3, 4}});
  CHECK(complete_bipartite(2, 3).edges().size() == 6);
  CHECK(complete(5).edges().size() == 10);
  CHECK(is_complete(complete(5)));
  CHECK_FALSE(is_complete(ring(4)));
  CHECK(star(4).degree(1) == 3);
  CHECK(cube().edges().size() == 12);
  CHECK(petersen().edges().size() == 15);
  CHECK(oracle::automorphisms(ring(6)).size() == 12);
}

TEST_CASE("construction errors") {
  CHECK_THROWS_AS(CellGraph::from_edge_list(3, {{1, 2}, {2, 1}, {2, 3}}), std::invalid_argument);
  CHECK_THROWS_AS(CellGraph::from_edge_list(3, {{1, 4}, {2, 3}}), std::invalid_argument);
  CHECK_THROWS_AS(CellGraph::from_edge_list(4, {{1, 2}, {3, 4}}), std::invalid_argument);
  CHECK_THROWS(ring(2));
  CHECK_THROWS(ring(5).degree(6));
}

TEST_CASE("component counting") {
  std::vector<Edge> e{{1, 2}, {3, 4}};
  CHECK(count_components(5, e) == 3);
  CHECK(count_components(3, std::vector<Edge>{}) == 3);
}
