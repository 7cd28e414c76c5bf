#include "pnucleus/global_decomp.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "pnucleus/det_nucleus.hpp"

namespace pnucleus {

namespace {

struct Candidate {
  std::vector<EdgeId> edges;     // sorted
  std::vector<TriangleId> tris;  // structural triangles of the edge set
};

// A local nucleus viewed as a candidate pool, with edge incidence lists so
// closures grow incrementally instead of rescanning the scope.
struct FgScope {
  WorldScope world;
  std::vector<std::uint32_t> edge_pos;               // parent edge -> index
  std::vector<std::vector<std::uint32_t>> edge_tris;  // per edge: positions
  std::vector<std::vector<std::uint32_t>> edge_cliques;

  explicit FgScope(const TriangleIndex& idx, const SubgraphView& view)
      : world(WorldScope::of(idx, view)) {
    edge_pos.assign(idx.graph().edge_count(), WorldScope::npos);
    for (std::size_t i = 0; i < world.edges().size(); ++i)
      edge_pos[world.edges()[i]] = static_cast<std::uint32_t>(i);
    edge_tris.resize(world.edges().size());
    edge_cliques.resize(world.edges().size());
    for (std::size_t pos = 0; pos < world.tris().size(); ++pos) {
      const TriangleRecord& r = idx.rec(world.tris()[pos]);
      for (EdgeId e : {r.e_uv, r.e_uw, r.e_vw})
        edge_tris[edge_pos[e]].push_back(static_cast<std::uint32_t>(pos));
    }
    for (std::size_t ci = 0; ci < world.cliques().size(); ++ci) {
      const CliqueRecord& cq = idx.clique(world.cliques()[ci].id);
      for (EdgeId e : cq.edge)
        edge_cliques[edge_pos[e]].push_back(static_cast<std::uint32_t>(ci));
    }
  }
};

// Incremental closure: adds whole 4-cliques until every triangle inside the
// edge set lies in at least k of its cliques, or reports failure. Buffers
// are reused across candidates through touched-lists.
class ClosureWork {
 public:
  explicit ClosureWork(const FgScope& sc)
      : sc_(sc),
        in_edge_(sc.world.edges().size(), 0),
        tri_missing_(sc.world.tris().size(), 3),
        clique_missing_(sc.world.cliques().size(), 6),
        have_(sc.world.tris().size(), 0) {}

  // seed_edges are scope edge indices; returns nullopt when infeasible.
  std::optional<Candidate> close(const std::vector<std::uint32_t>& seed_edges,
                                 int k) {
    reset();
    for (std::uint32_t e : seed_edges) add_edge(e);
    for (;;) {
      bool any_deficient = false;
      bool grew = false;
      // index loop: present_ grows while expanding
      for (std::size_t i = 0; i < present_.size(); ++i) {
        std::uint32_t pos = present_[i];
        if (have_[pos] >= k) continue;
        any_deficient = true;
        for (std::uint32_t ci : sc_.world.tri_cliques(pos))
          grew = add_clique(ci) || grew;
      }
      if (!any_deficient) break;
      if (!grew) return std::nullopt;
    }
    Candidate cand;
    cand.edges.reserve(added_edges_.size());
    for (std::uint32_t e : added_edges_) cand.edges.push_back(sc_.world.edges()[e]);
    std::sort(cand.edges.begin(), cand.edges.end());
    cand.tris.reserve(present_.size());
    for (std::uint32_t pos : present_) cand.tris.push_back(sc_.world.tris()[pos]);
    std::sort(cand.tris.begin(), cand.tris.end());
    return cand;
  }

 private:
  void reset() {
    for (std::uint32_t e : added_edges_) in_edge_[e] = 0;
    for (std::uint32_t pos : touched_tris_) {
      tri_missing_[pos] = 3;
      have_[pos] = 0;
    }
    for (std::uint32_t ci : touched_cliques_) clique_missing_[ci] = 6;
    added_edges_.clear();
    touched_tris_.clear();
    touched_cliques_.clear();
    present_.clear();
  }

  void add_edge(std::uint32_t e) {
    if (in_edge_[e]) return;
    in_edge_[e] = 1;
    added_edges_.push_back(e);
    for (std::uint32_t pos : sc_.edge_tris[e]) {
      if (tri_missing_[pos] == 3) touched_tris_.push_back(pos);
      if (--tri_missing_[pos] == 0) present_.push_back(pos);
    }
    for (std::uint32_t ci : sc_.edge_cliques[e]) {
      if (clique_missing_[ci] == 6) touched_cliques_.push_back(ci);
      if (--clique_missing_[ci] == 0)
        for (std::uint32_t mp : sc_.world.cliques()[ci].member_pos) ++have_[mp];
    }
  }

  // true when the clique contributed at least one new edge
  bool add_clique(std::uint32_t ci) {
    bool grew = false;
    const CliqueRecord& cq = sc_.world.index().clique(sc_.world.cliques()[ci].id);
    for (EdgeId e : cq.edge) {
      std::uint32_t idx = sc_.edge_pos[e];
      if (!in_edge_[idx]) {
        add_edge(idx);
        grew = true;
      }
    }
    return grew;
  }

  const FgScope& sc_;
  std::vector<std::uint8_t> in_edge_;
  std::vector<std::int8_t> tri_missing_;
  std::vector<std::int8_t> clique_missing_;
  std::vector<std::int32_t> have_;
  std::vector<std::uint32_t> added_edges_, touched_tris_, touched_cliques_;
  std::vector<std::uint32_t> present_;  // triangle positions fully inside
};

bool accepted(const TriangleIndex& idx, const Candidate& cand, int k,
              double theta, const TailEstimator& tails) {
  SubgraphView view(idx.graph(), cand.edges);
  std::vector<double> est = tails(view, cand.tris, k, Mode::global);
  for (double p : est)
    if (!(p >= theta)) return false;
  return true;
}

bool share_triangle(const Candidate& a, const Candidate& b) {
  std::size_t i = 0, j = 0;
  while (i < a.tris.size() && j < b.tris.size()) {
    if (a.tris[i] == b.tris[j]) return true;
    a.tris[i] < b.tris[j] ? ++i : ++j;
  }
  return false;
}

Nucleus to_nucleus(const TriangleIndex& idx, const Candidate& cand, Mode mode,
                   int k, double theta) {
  Nucleus nuc;
  nuc.mode = mode;
  nuc.k = k;
  nuc.theta = theta;
  nuc.triangles = cand.tris;
  nuc.edges = cand.edges;
  for (EdgeId e : nuc.edges) {
    nuc.vertices.push_back(idx.graph().edges()[e].u);
    nuc.vertices.push_back(idx.graph().edges()[e].v);
  }
  std::sort(nuc.vertices.begin(), nuc.vertices.end());
  nuc.vertices.erase(std::unique(nuc.vertices.begin(), nuc.vertices.end()),
                     nuc.vertices.end());
  return nuc;
}

}  // namespace

FgResult fg_decompose(const TriangleIndex& idx, const NucleusScores& scores,
                      double theta, const TailEstimator& tails,
                      const GlobalOptions& opts) {
  FgResult result;
  const int k_max = scores.max_score();
  for (int k = k_max; k >= 1; --k) {
    std::vector<Candidate> level_accepted;
    for (const Nucleus& ln : assemble_nuclei(idx, scores, k)) {
      SubgraphView view(idx.graph(), ln.edges);
      FgScope sc(idx, view);
      ClosureWork closure(sc);

      // one candidate per seed triangle: the closure of its cliques
      std::set<std::vector<std::uint32_t>> seen_seeds;
      std::set<std::vector<EdgeId>> seen;
      std::vector<Candidate> pool;
      std::vector<std::uint32_t> seed_edges;
      for (std::size_t pos = 0; pos < sc.world.tris().size(); ++pos) {
        const auto& cliques = sc.world.tri_cliques(pos);
        if (cliques.empty()) continue;
        seed_edges.clear();
        for (std::uint32_t ci : cliques) {
          const CliqueRecord& cq = idx.clique(sc.world.cliques()[ci].id);
          for (EdgeId e : cq.edge) seed_edges.push_back(sc.edge_pos[e]);
        }
        std::sort(seed_edges.begin(), seed_edges.end());
        seed_edges.erase(std::unique(seed_edges.begin(), seed_edges.end()),
                         seed_edges.end());
        if (!seen_seeds.insert(seed_edges).second) continue;
        auto cand = closure.close(seed_edges, k);
        if (!cand) continue;
        if (seen.insert(cand->edges).second) pool.push_back(std::move(*cand));
      }

      std::vector<Candidate> ok;
      for (Candidate& cand : pool)
        if (accepted(idx, cand, k, theta, tails)) ok.push_back(std::move(cand));

      if (opts.keep_nonmaximal)
        for (const Candidate& cand : ok)
          result.raw_accepted.push_back(
              to_nucleus(idx, cand, Mode::global, k, scores.theta));

      // Verified-union consolidation: merge overlapping accepted candidates
      // whenever the closed union passes the same test. At p = 1 the union
      // of two accepted candidates always passes, so the output collapses to
      // the deterministic nucleus components.
      std::set<std::vector<EdgeId>> rejected_unions;
      bool merged = true;
      while (merged) {
        merged = false;
        std::sort(ok.begin(), ok.end(),
                  [](const Candidate& a, const Candidate& b) {
                    return a.edges < b.edges;
                  });
        for (std::size_t i = 0; i < ok.size() && !merged; ++i) {
          for (std::size_t j = i + 1; j < ok.size() && !merged; ++j) {
            if (!share_triangle(ok[i], ok[j])) continue;
            seed_edges.clear();
            for (EdgeId e : ok[i].edges) seed_edges.push_back(sc.edge_pos[e]);
            for (EdgeId e : ok[j].edges) seed_edges.push_back(sc.edge_pos[e]);
            std::sort(seed_edges.begin(), seed_edges.end());
            seed_edges.erase(std::unique(seed_edges.begin(), seed_edges.end()),
                             seed_edges.end());
            auto uni = closure.close(seed_edges, k);
            if (!uni) continue;
            if (uni->edges == ok[i].edges || uni->edges == ok[j].edges) {
              // one candidate swallows the other; maximality pass handles it
              continue;
            }
            if (rejected_unions.count(uni->edges)) continue;
            if (accepted(idx, *uni, k, theta, tails)) {
              ok.erase(ok.begin() + static_cast<std::ptrdiff_t>(j));
              ok.erase(ok.begin() + static_cast<std::ptrdiff_t>(i));
              ok.push_back(std::move(*uni));
              merged = true;
            } else {
              rejected_unions.insert(uni->edges);
            }
          }
        }
      }
      for (Candidate& cand : ok) level_accepted.push_back(std::move(cand));
    }

    // Across scopes at this k: drop duplicates and non-maximal candidates.
    std::sort(level_accepted.begin(), level_accepted.end(),
              [](const Candidate& a, const Candidate& b) {
                return a.edges < b.edges;
              });
    level_accepted.erase(
        std::unique(level_accepted.begin(), level_accepted.end(),
                    [](const Candidate& a, const Candidate& b) {
                      return a.edges == b.edges;
                    }),
        level_accepted.end());
    std::vector<bool> dominated(level_accepted.size(), false);
    for (std::size_t i = 0; i < level_accepted.size(); ++i)
      for (std::size_t j = 0; j < level_accepted.size(); ++j) {
        if (i == j || dominated[i]) continue;
        if (level_accepted[i].edges.size() < level_accepted[j].edges.size() &&
            std::includes(level_accepted[j].edges.begin(),
                          level_accepted[j].edges.end(),
                          level_accepted[i].edges.begin(),
                          level_accepted[i].edges.end()))
          dominated[i] = true;
      }
    for (std::size_t i = 0; i < level_accepted.size(); ++i)
      if (!dominated[i])
        result.nuclei.push_back(to_nucleus(idx, level_accepted[i], Mode::global,
                                           k, scores.theta));
  }
  return result;
}

std::vector<Nucleus> wg_decompose(const TriangleIndex& idx,
                                  const NucleusScores& scores, double theta,
                                  const TailEstimator& tails) {
  std::vector<Nucleus> result;
  const int k_max = scores.max_score();
  for (int k = k_max; k >= 1; --k) {
    std::vector<Nucleus> level;
    for (const Nucleus& ln : assemble_nuclei(idx, scores, k)) {
      SubgraphView view(idx.graph(), ln.edges);
      WorldScope sc = WorldScope::of(idx, view);
      std::vector<double> est = tails(view, sc.tris(), k, Mode::weakly_global);

      std::vector<std::uint8_t> qual(sc.tris().size(), 0);
      for (std::size_t pos = 0; pos < sc.tris().size(); ++pos)
        qual[pos] = est[pos] >= theta;

      // Components of qualifying triangles through 4-cliques whose four
      // triangles all qualify.
      std::vector<std::uint32_t> parent(sc.tris().size());
      std::iota(parent.begin(), parent.end(), 0);
      auto find = [&parent](std::uint32_t x) {
        while (parent[x] != x) {
          parent[x] = parent[parent[x]];
          x = parent[x];
        }
        return x;
      };
      for (const auto& scq : sc.cliques()) {
        bool all = true;
        for (std::uint32_t pos : scq.member_pos) all = all && qual[pos];
        if (!all) continue;
        std::uint32_t root = find(scq.member_pos[0]);
        for (int m = 1; m < 4; ++m) parent[find(scq.member_pos[m])] = root;
      }
      std::vector<std::int32_t> group_of(sc.tris().size(), -1);
      std::vector<Candidate> comps;
      for (std::size_t pos = 0; pos < sc.tris().size(); ++pos) {
        if (!qual[pos]) continue;
        std::uint32_t root = find(static_cast<std::uint32_t>(pos));
        if (group_of[root] < 0) {
          group_of[root] = static_cast<std::int32_t>(comps.size());
          comps.emplace_back();
        }
        comps[group_of[root]].tris.push_back(sc.tris()[pos]);
      }
      for (Candidate& comp : comps) {
        for (TriangleId t : comp.tris) {
          const TriangleRecord& r = idx.rec(t);
          comp.edges.push_back(r.e_uv);
          comp.edges.push_back(r.e_uw);
          comp.edges.push_back(r.e_vw);
        }
        std::sort(comp.edges.begin(), comp.edges.end());
        comp.edges.erase(std::unique(comp.edges.begin(), comp.edges.end()),
                         comp.edges.end());
        level.push_back(to_nucleus(idx, comp, Mode::weakly_global, k,
                                   scores.theta));
      }
    }
    std::sort(level.begin(), level.end(),
              [](const Nucleus& a, const Nucleus& b) { return a.edges < b.edges; });
    level.erase(std::unique(level.begin(), level.end(),
                            [](const Nucleus& a, const Nucleus& b) {
                              return a.edges == b.edges;
                            }),
                level.end());
    for (Nucleus& nuc : level) result.push_back(std::move(nuc));
  }
  return result;
}

FgResult fg_decompose(const TriangleIndex& idx, const NucleusScores& scores,
                      double theta, const SamplingConfig& cfg, int threads,
                      const GlobalOptions& opts) {
  return fg_decompose(idx, scores, theta, mc_estimator(idx, cfg, threads), opts);
}

std::vector<Nucleus> wg_decompose(const TriangleIndex& idx,
                                  const NucleusScores& scores, double theta,
                                  const SamplingConfig& cfg, int threads) {
  return wg_decompose(idx, scores, theta, mc_estimator(idx, cfg, threads));
}

}  // namespace pnucleus
