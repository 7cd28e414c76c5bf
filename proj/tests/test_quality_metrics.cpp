#include <doctest.h>

#include <random>

#include "pnucleus/quality_metrics.hpp"
#include "test_util.hpp"

using namespace pnucleus;
namespace tu = pnucleus::testutil;

TEST_CASE("pd") {
  SUBCASE("uniform K4 at 0.5") {
    ProbabilisticGraph g = tu::complete_graph(4, 0.5);
    CHECK(pd(SubgraphView::full(g)) == doctest::Approx(0.5));
  }
  SUBCASE("example block sums to 0.81") {
    ProbabilisticGraph g = tu::example_graph();
    SubgraphView block = induced_edge_subgraph(g, tu::example_block_edges(g));
    CHECK(pd(block) == doctest::Approx(0.81).epsilon(1e-12));
  }
  SUBCASE("single certain edge") {
    ProbabilisticGraph g = ProbabilisticGraph::from_edges({{0, 1, 1.0}});
    CHECK(pd(SubgraphView::full(g)) == doctest::Approx(1.0));
  }
  SUBCASE("needs two vertices") {
    ProbabilisticGraph g = ProbabilisticGraph::from_edges({{0, 1, 1.0}});
    CHECK_THROWS_AS(pd(induced_edge_subgraph(g, {})), DomainError);
  }
}

TEST_CASE("pcc") {
  SUBCASE("a certain triangle clusters perfectly") {
    ProbabilisticGraph g = tu::complete_graph(3, 1.0);
    CHECK(pcc(SubgraphView::full(g)) == doctest::Approx(1.0));
  }
  SUBCASE("an open path does not cluster") {
    ProbabilisticGraph g =
        ProbabilisticGraph::from_edges({{0, 1, 1.0}, {1, 2, 1.0}});
    CHECK(pcc(SubgraphView::full(g)) == doctest::Approx(0.0));
  }
  SUBCASE("uniform K4 at 0.5") {
    ProbabilisticGraph g = tu::complete_graph(4, 0.5);
    // numerator 3 * 4 * 0.125 = 1.5, denominator 12 * 0.25 = 3
    CHECK(pcc(SubgraphView::full(g)) == doctest::Approx(0.5));
  }
  SUBCASE("no wedges") {
    ProbabilisticGraph g = ProbabilisticGraph::from_edges({{0, 1, 1.0}});
    CHECK_THROWS_AS(pcc(SubgraphView::full(g)), DomainError);
  }
}

TEST_CASE("metrics are invariant under vertex relabeling") {
  std::mt19937_64 rng(173);
  for (int trial = 0; trial < 10; ++trial) {
    ProbabilisticGraph g = tu::random_graph(rng, 9, 0.6);
    // relabel v -> 1000 - 7v (order-reversing, keeps labels distinct)
    tu::EdgeSpec relabeled;
    for (const ProbEdge& e : g.edges())
      relabeled.push_back({1000 - 7 * g.label(e.u), 1000 - 7 * g.label(e.v),
                           e.p});
    ProbabilisticGraph h = ProbabilisticGraph::from_edges(relabeled);
    SubgraphView vg = SubgraphView::full(g), vh = SubgraphView::full(h);
    CHECK(pd(vg) == doctest::Approx(pd(vh)).epsilon(1e-12));
    if (tu::brute_triangle_count(g) > 0)
      CHECK(pcc(vg) == doctest::Approx(pcc(vh)).epsilon(1e-12));
  }
}

TEST_CASE("scaling all probabilities scales pd linearly") {
  std::mt19937_64 rng(179);
  ProbabilisticGraph g = tu::random_graph(rng, 10, 0.5, 0.5, 1.0);
  for (double c : {0.25, 0.5, 0.9}) {
    tu::EdgeSpec scaled;
    for (const ProbEdge& e : g.edges())
      scaled.push_back({g.label(e.u), g.label(e.v), c * e.p});
    ProbabilisticGraph h = ProbabilisticGraph::from_edges(scaled);
    CHECK(pd(SubgraphView::full(h)) ==
          doctest::Approx(c * pd(SubgraphView::full(g))).epsilon(1e-12));
  }
}

TEST_CASE("certain graphs reduce pcc to the clustering coefficient") {
  std::mt19937_64 rng(181);
  for (int trial = 0; trial < 10; ++trial) {
    ProbabilisticGraph g = tu::random_graph(rng, 10, 0.5, 0, 1, true);
    std::size_t tris = tu::brute_triangle_count(g);
    // closed triples over connected triples, counted by hand
    std::size_t wedges = 0;
    for (VertexId u = 0; u < g.vertex_count(); ++u) {
      std::size_t d = g.degree(u);
      wedges += d * (d - 1) / 2;
    }
    if (wedges == 0) continue;
    CHECK(pcc(SubgraphView::full(g)) ==
          doctest::Approx(3.0 * static_cast<double>(tris) /
                          static_cast<double>(wedges))
              .epsilon(1e-12));
  }
}
