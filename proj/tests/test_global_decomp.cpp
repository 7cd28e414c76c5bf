#include <doctest.h>

#include <random>
#include <set>

#include "pnucleus/det_nucleus.hpp"
#include "pnucleus/global_decomp.hpp"
#include "pnucleus/oracle.hpp"
#include "test_util.hpp"

using namespace pnucleus;
namespace tu = pnucleus::testutil;

namespace {

NucleusScores exact_scores(const TriangleIndex& idx, double theta) {
  return compute_scores(idx, theta, Hyperparams{}, ScoreBackend::exact);
}

std::set<VertexLabel> label_set(const ProbabilisticGraph& g,
                                const std::vector<VertexId>& vs) {
  std::set<VertexLabel> out;
  for (VertexId v : vs) out.insert(g.label(v));
  return out;
}

std::set<std::vector<EdgeId>> edge_sets_at(const std::vector<Nucleus>& nuclei,
                                           int k) {
  std::set<std::vector<EdgeId>> out;
  for (const Nucleus& nuc : nuclei)
    if (nuc.k == k) out.insert(nuc.edges);
  return out;
}

// A chain of three K4s glued on two different triangles: one deterministic
// 1-nucleus, but no single seed closure covers it.
ProbabilisticGraph clique_chain(double p = 1.0) {
  std::set<std::pair<unsigned, unsigned>> pairs;
  auto add_k4 = [&pairs](std::initializer_list<unsigned> vs) {
    std::vector<unsigned> v(vs);
    for (std::size_t i = 0; i < v.size(); ++i)
      for (std::size_t j = i + 1; j < v.size(); ++j)
        pairs.insert({std::min(v[i], v[j]), std::max(v[i], v[j])});
  };
  add_k4({0, 1, 2, 3});
  add_k4({1, 2, 3, 4});
  add_k4({2, 3, 4, 5});
  tu::EdgeSpec edges;
  for (auto [u, v] : pairs) edges.push_back({u, v, p});
  return ProbabilisticGraph::from_edges(edges);
}

}  // namespace

TEST_CASE("FG on the example graph with the oracle backend") {
  ProbabilisticGraph g = tu::example_graph();
  TriangleIndex idx = TriangleIndex::build(g);
  NucleusScores scores = exact_scores(idx, 0.42);
  GlobalOptions opts;
  opts.keep_nonmaximal = true;
  FgResult fg = fg_decompose(idx, scores, 0.42, oracle_estimator(idx), opts);

  REQUIRE(fg.nuclei.size() == 2);
  std::set<std::set<VertexLabel>> got;
  for (const Nucleus& nuc : fg.nuclei) {
    CHECK(nuc.k == 1);
    CHECK(nuc.mode == Mode::global);
    CHECK(nuc.edges.size() == 6);
    got.insert(label_set(g, nuc.vertices));
  }
  std::set<std::set<VertexLabel>> expect{{1, 2, 3, 5}, {1, 2, 3, 4}};
  CHECK(got == expect);

  // the nine-edge block candidate was generated but rejected (true tail 0.3)
  CHECK(fg.raw_accepted.size() == 2);
}

TEST_CASE("FG on the example graph with the Monte-Carlo backend") {
  ProbabilisticGraph g = tu::example_graph();
  TriangleIndex idx = TriangleIndex::build(g);
  NucleusScores scores = exact_scores(idx, 0.42);
  SamplingConfig cfg;
  cfg.n_override = 150;
  cfg.base_seed = 7;
  FgResult fg = fg_decompose(idx, scores, 0.42, cfg);
  REQUIRE(fg.nuclei.size() == 2);
  std::set<std::set<VertexLabel>> got;
  for (const Nucleus& nuc : fg.nuclei) got.insert(label_set(g, nuc.vertices));
  CHECK(got == std::set<std::set<VertexLabel>>{{1, 2, 3, 5}, {1, 2, 3, 4}});
}

TEST_CASE("WG on the example graph keeps the whole block") {
  ProbabilisticGraph g = tu::example_graph();
  TriangleIndex idx = TriangleIndex::build(g);
  NucleusScores scores = exact_scores(idx, 0.42);
  auto wg = wg_decompose(idx, scores, 0.42, oracle_estimator(idx));
  REQUIRE(wg.size() == 1);
  CHECK(wg[0].k == 1);
  CHECK(wg[0].mode == Mode::weakly_global);
  CHECK(wg[0].edges.size() == 9);
  CHECK(label_set(g, wg[0].vertices) == std::set<VertexLabel>{1, 2, 3, 4, 5});
}

TEST_CASE("K5 at 0.6 with theta 0.01: no weakly-global nucleus at level 2") {
  ProbabilisticGraph g = tu::complete_graph(5, 0.6);
  TriangleIndex idx = TriangleIndex::build(g);
  NucleusScores scores = exact_scores(idx, 0.01);
  REQUIRE(scores.max_score() == 2);
  auto wg = wg_decompose(idx, scores, 0.01, oracle_estimator(idx));
  for (const Nucleus& nuc : wg) CHECK(nuc.k < 2);
  // level 1 survives: a single 4-clique world is likely enough at 0.01
  CHECK(!wg.empty());
}

TEST_CASE("certain K5 at level 2 is accepted by FG") {
  ProbabilisticGraph g = tu::complete_graph(5, 1.0);
  TriangleIndex idx = TriangleIndex::build(g);
  NucleusScores scores = exact_scores(idx, 0.5);
  SamplingConfig cfg;
  cfg.n_override = 10;
  FgResult fg = fg_decompose(idx, scores, 0.5, cfg);
  auto at2 = edge_sets_at(fg.nuclei, 2);
  REQUIRE(at2.size() == 1);
  CHECK(at2.begin()->size() == 10);
}

TEST_CASE("clique chain consolidates to the deterministic component") {
  ProbabilisticGraph g = clique_chain();
  TriangleIndex idx = TriangleIndex::build(g);
  NucleusScores scores = exact_scores(idx, 0.5);
  SamplingConfig cfg;
  cfg.n_override = 4;
  GlobalOptions opts;
  opts.keep_nonmaximal = true;
  FgResult fg = fg_decompose(idx, scores, 0.5, cfg, 1, opts);

  auto at1 = edge_sets_at(fg.nuclei, 1);
  REQUIRE(at1.size() == 1);
  CHECK(at1.begin()->size() == 12);  // the whole chain
  // raw candidates include the partial closures that were merged away
  CHECK(fg.raw_accepted.size() > 1);
}

TEST_CASE("certain graphs: FG and WG equal the deterministic components") {
  std::mt19937_64 rng(157);
  SamplingConfig cfg;
  cfg.n_override = 4;
  for (int trial = 0; trial < 12; ++trial) {
    ProbabilisticGraph g = tu::random_graph(rng, 9, 0.55, 0, 1, true);
    TriangleIndex idx = TriangleIndex::build(g);
    NucleusScores scores = exact_scores(idx, 0.5);
    FgResult fg = fg_decompose(idx, scores, 0.5, cfg);
    auto wg = wg_decompose(idx, scores, 0.5, cfg);
    for (int k = 1; k <= scores.max_score(); ++k) {
      auto det = edge_sets_at(assemble_nuclei(idx, scores, k), k);
      CHECK(edge_sets_at(fg.nuclei, k) == det);
      CHECK(edge_sets_at(wg, k) == det);
    }
  }
}

TEST_CASE("structural containment in the local decomposition") {
  std::mt19937_64 rng(163);
  for (int trial = 0; trial < 8; ++trial) {
    ProbabilisticGraph g = tu::random_small_graph(rng, 7, 14);
    TriangleIndex idx = TriangleIndex::build(g);
    NucleusScores scores = exact_scores(idx, 0.25);
    if (scores.max_score() < 1) continue;
    FgResult fg = fg_decompose(idx, scores, 0.25, oracle_estimator(idx));
    auto wg = wg_decompose(idx, scores, 0.25, oracle_estimator(idx));
    for (int k = 1; k <= scores.max_score(); ++k) {
      auto locals = assemble_nuclei(idx, scores, k);
      auto contained_in_some = [&locals](const std::vector<EdgeId>& edges) {
        for (const Nucleus& ln : locals)
          if (std::includes(ln.edges.begin(), ln.edges.end(), edges.begin(),
                            edges.end()))
            return true;
        return false;
      };
      for (const Nucleus& nuc : fg.nuclei)
        if (nuc.k == k) CHECK(contained_in_some(nuc.edges));
      for (const Nucleus& nuc : wg)
        if (nuc.k == k) CHECK(contained_in_some(nuc.edges));
      // and every global nucleus sits inside some weakly-global one
      for (const Nucleus& gn : fg.nuclei) {
        if (gn.k != k) continue;
        bool inside = false;
        for (const Nucleus& wn : wg) {
          if (wn.k != k) continue;
          if (std::includes(wn.edges.begin(), wn.edges.end(), gn.edges.begin(),
                            gn.edges.end())) {
            inside = true;
            break;
          }
        }
        CHECK(inside);
      }
    }
  }
}

TEST_CASE("FG candidates are 4-clique closed") {
  std::mt19937_64 rng(167);
  for (int trial = 0; trial < 6; ++trial) {
    ProbabilisticGraph g = tu::random_small_graph(rng, 7, 14);
    TriangleIndex idx = TriangleIndex::build(g);
    NucleusScores scores = exact_scores(idx, 0.2);
    FgResult fg = fg_decompose(idx, scores, 0.2, oracle_estimator(idx));
    for (const Nucleus& nuc : fg.nuclei) {
      std::set<EdgeId> edges(nuc.edges.begin(), nuc.edges.end());
      for (TriangleId t : nuc.triangles) {
        int inside = 0;
        for (const Extension& ex : idx.extensions(t)) {
          const CliqueRecord& cq = idx.clique(ex.clique);
          bool all = true;
          for (EdgeId e : cq.edge) all = all && edges.count(e);
          if (all) ++inside;
        }
        CHECK(inside >= nuc.k);
      }
    }
  }
}

TEST_CASE("oracle and sampling backends agree away from the threshold") {
  // Every true probability of the example graph sits at distance >= 0.08
  // from theta = 0.42, so sharp estimates reproduce the exact output.
  ProbabilisticGraph g = tu::example_graph();
  TriangleIndex idx = TriangleIndex::build(g);
  NucleusScores scores = exact_scores(idx, 0.42);
  SamplingConfig cfg;
  cfg.n_override = 2000;
  cfg.base_seed = 1;

  FgResult exact_fg = fg_decompose(idx, scores, 0.42, oracle_estimator(idx));
  FgResult mc_fg = fg_decompose(idx, scores, 0.42, cfg);
  REQUIRE(exact_fg.nuclei.size() == mc_fg.nuclei.size());
  for (std::size_t i = 0; i < exact_fg.nuclei.size(); ++i)
    CHECK(exact_fg.nuclei[i].edges == mc_fg.nuclei[i].edges);

  auto exact_wg = wg_decompose(idx, scores, 0.42, oracle_estimator(idx));
  auto mc_wg = wg_decompose(idx, scores, 0.42, cfg);
  REQUIRE(exact_wg.size() == mc_wg.size());
  for (std::size_t i = 0; i < exact_wg.size(); ++i)
    CHECK(exact_wg[i].edges == mc_wg[i].edges);
}

TEST_CASE("global decompositions are deterministic across worker counts") {
  ProbabilisticGraph g = tu::example_graph();
  TriangleIndex idx = TriangleIndex::build(g);
  NucleusScores scores = exact_scores(idx, 0.42);
  SamplingConfig cfg;
  cfg.n_override = 150;
  cfg.base_seed = 11;
  FgResult a = fg_decompose(idx, scores, 0.42, cfg, 1);
  FgResult b = fg_decompose(idx, scores, 0.42, cfg, 4);
  REQUIRE(a.nuclei.size() == b.nuclei.size());
  for (std::size_t i = 0; i < a.nuclei.size(); ++i)
    CHECK(a.nuclei[i].edges == b.nuclei[i].edges);
  auto wa = wg_decompose(idx, scores, 0.42, cfg, 1);
  auto wb = wg_decompose(idx, scores, 0.42, cfg, 4);
  REQUIRE(wa.size() == wb.size());
  for (std::size_t i = 0; i < wa.size(); ++i) CHECK(wa[i].edges == wb[i].edges);
}
