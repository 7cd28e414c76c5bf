#include "pnucleus/oracle.hpp"

#include <algorithm>

#include "pnucleus/parallel.hpp"

namespace pnucleus {

namespace {

constexpr std::size_t kWorldsPerBlock = 1 << 13;

struct Histograms {
  // hist[t][s] accumulates Pr(world) for worlds where the mode's level for
  // triangle t equals s.
  std::vector<std::vector<long double>> hist;

  explicit Histograms(const TriangleIndex& idx) {
    hist.resize(idx.triangle_count());
    for (TriangleId t = 0; t < idx.triangle_count(); ++t)
      hist[t].assign(idx.rec(t).ext_count + 1, 0.0L);
  }

  void merge(const Histograms& other) {
    for (std::size_t t = 0; t < hist.size(); ++t)
      for (std::size_t s = 0; s < hist[t].size(); ++s)
        hist[t][s] += other.hist[t][s];
  }
};

void accumulate_block(const WorldScope& scope, const SubgraphView& h,
                      Mode mode, std::uint64_t begin, std::uint64_t end,
                      Histograms& out) {
  const TriangleIndex& idx = scope.index();
  const auto& edge_ids = h.edge_ids();
  const auto& edges = idx.graph().edges();
  const std::size_t E = edge_ids.size();
  const auto& tris = scope.tris();
  WorldGraph w(idx.graph());
  DetScratch scratch;
  for (std::uint64_t subset = begin; subset < end; ++subset) {
    w.clear_all();
    long double prob = 1.0L;
    for (std::size_t i = 0; i < E; ++i) {
      double p = edges[edge_ids[i]].p;
      if ((subset >> i) & 1) {
        w.set(edge_ids[i]);
        prob *= p;
      } else {
        prob *= (1.0L - p);
      }
    }
    switch (mode) {
      case Mode::local: {
        // presence + 4-clique support; no peel needed
        scratch.tri_present.assign(tris.size(), 0);
        for (std::size_t pos = 0; pos < tris.size(); ++pos) {
          const TriangleRecord& r = idx.rec(tris[pos]);
          scratch.tri_present[pos] =
              w.has(r.e_uv) && w.has(r.e_uw) && w.has(r.e_vw);
        }
        scratch.support.assign(tris.size(), 0);
        for (const auto& scq : scope.cliques()) {
          const CliqueRecord& cq = idx.clique(scq.id);
          bool all = true;
          for (EdgeId e : cq.edge) all = all && w.has(e);
          if (!all) continue;
          for (std::uint32_t pos : scq.member_pos) ++scratch.support[pos];
        }
        for (std::size_t pos = 0; pos < tris.size(); ++pos)
          if (scratch.tri_present[pos])
            out.hist[tris[pos]][static_cast<std::size_t>(scratch.support[pos])] +=
                prob;
        break;
      }
      case Mode::weakly_global: {
        det_scores_into(scope, w, scratch);
        for (std::size_t pos = 0; pos < tris.size(); ++pos)
          if (scratch.score[pos] != kAbsentInWorld)
            out.hist[tris[pos]][static_cast<std::size_t>(scratch.score[pos])] +=
                prob;
        break;
      }
      case Mode::global: {
        WorldNucleusEval ev = evaluate_world_nucleus(scope, w, scratch);
        if (!ev.structure_ok()) break;
        for (std::size_t pos = 0; pos < tris.size(); ++pos)
          if (scratch.tri_present[pos])
            out.hist[tris[pos]][static_cast<std::size_t>(ev.min_support)] += prob;
        break;
      }
    }
  }
}

void check_budget(const SubgraphView& h, OracleBudget budget) {
  if (h.edge_count() > budget.max_edges)
    throw BudgetError("subgraph has " + std::to_string(h.edge_count()) +
                      " edges, enumeration budget is " +
                      std::to_string(budget.max_edges));
}

}  // namespace

ExactTailTable exact_tail_table(const TriangleIndex& idx,
                                const SubgraphView& h, Mode mode,
                                OracleBudget budget, int threads) {
  check_budget(h, budget);
  const WorldScope scope = WorldScope::of(idx, h);
  const std::uint64_t worlds = std::uint64_t{1} << h.edge_count();
  const std::size_t blocks =
      static_cast<std::size_t>((worlds + kWorldsPerBlock - 1) / kWorldsPerBlock);

  // Fixed-size blocks keep the summation order independent of the worker
  // count: block results are reduced in block order.
  std::vector<Histograms> partial(blocks, Histograms(idx));
  parallel_for(blocks, threads, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t b = lo; b < hi; ++b) {
      std::uint64_t begin = static_cast<std::uint64_t>(b) * kWorldsPerBlock;
      std::uint64_t end = std::min<std::uint64_t>(worlds, begin + kWorldsPerBlock);
      accumulate_block(scope, h, mode, begin, end, partial[b]);
    }
  });
  Histograms total(idx);
  for (const Histograms& p : partial) total.merge(p);

  std::vector<std::vector<double>> tails(idx.triangle_count());
  for (TriangleId t = 0; t < idx.triangle_count(); ++t) {
    const auto& hist = total.hist[t];
    std::vector<double> ts(hist.size(), 0.0);
    long double acc = 0.0L;
    for (std::size_t s = hist.size(); s-- > 0;) {
      acc += hist[s];
      ts[s] = static_cast<double>(acc);
    }
    tails[t] = std::move(ts);
  }
  return ExactTailTable(mode, std::move(tails));
}

double exact_tail(const TriangleIndex& idx, const SubgraphView& h,
                  TriangleId t, int k, Mode mode, OracleBudget budget) {
  idx.rec(t);  // validates the id
  return exact_tail_table(idx, h, mode, budget).tail(t, k);
}

double total_world_probability(const SubgraphView& h, OracleBudget budget) {
  check_budget(h, budget);
  const auto& edge_ids = h.edge_ids();
  const auto& edges = h.parent().edges();
  const std::uint64_t worlds = std::uint64_t{1} << edge_ids.size();
  long double total = 0.0L;
  for (std::uint64_t subset = 0; subset < worlds; ++subset) {
    long double prob = 1.0L;
    for (std::size_t i = 0; i < edge_ids.size(); ++i) {
      double p = edges[edge_ids[i]].p;
      prob *= ((subset >> i) & 1) ? static_cast<long double>(p) : 1.0L - p;
    }
    total += prob;
  }
  return static_cast<double>(total);
}

TailEstimator oracle_estimator(const TriangleIndex& idx, OracleBudget budget,
                               int threads) {
  return [&idx, budget, threads](const SubgraphView& h,
                                 std::span<const TriangleId> tris, int k,
                                 Mode mode) {
    ExactTailTable table = exact_tail_table(idx, h, mode, budget, threads);
    std::vector<double> out;
    out.reserve(tris.size());
    for (TriangleId t : tris) out.push_back(table.tail(t, k));
    return out;
  };
}

}  // namespace pnucleus
