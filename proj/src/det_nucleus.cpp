#include "pnucleus/det_nucleus.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

namespace pnucleus {

WorldGraph WorldGraph::all_of(const SubgraphView& h) {
  WorldGraph w(h.parent());
  for (EdgeId e : h.edge_ids()) w.set(e);
  return w;
}

std::size_t WorldGraph::present_count() const {
  std::size_t n = 0;
  for (std::uint64_t word : bits_) n += std::popcount(word);
  return n;
}

WorldScope WorldScope::of(const TriangleIndex& idx, const SubgraphView& h) {
  WorldScope sc;
  sc.idx_ = &idx;
  sc.edges_ = h.edge_ids();
  sc.tri_pos_.assign(idx.triangle_count(), npos);
  for (TriangleId t = 0; t < idx.triangle_count(); ++t) {
    const TriangleRecord& r = idx.rec(t);
    if (h.contains(r.e_uv) && h.contains(r.e_uw) && h.contains(r.e_vw)) {
      sc.tri_pos_[t] = static_cast<std::uint32_t>(sc.tris_.size());
      sc.tris_.push_back(t);
    }
  }
  sc.tri_cliques_.resize(sc.tris_.size());
  for (CliqueId q = 0; q < idx.clique_count(); ++q) {
    const CliqueRecord& cq = idx.clique(q);
    bool inside = true;
    for (EdgeId e : cq.edge) inside = inside && h.contains(e);
    if (!inside) continue;
    ScopeClique scq;
    scq.id = q;
    for (int m = 0; m < 4; ++m) scq.member_pos[m] = sc.tri_pos_[cq.tri[m]];
    std::uint32_t ci = static_cast<std::uint32_t>(sc.cliques_.size());
    for (std::uint32_t pos : scq.member_pos) sc.tri_cliques_[pos].push_back(ci);
    sc.cliques_.push_back(scq);
  }
  return sc;
}

WorldScope WorldScope::full(const TriangleIndex& idx) {
  return of(idx, SubgraphView::full(idx.graph()));
}

namespace {

void mark_presence(const WorldScope& sc, const WorldGraph& w, DetScratch& s) {
  const TriangleIndex& idx = sc.index();
  s.tri_present.assign(sc.tris().size(), 0);
  s.clique_present.assign(sc.cliques().size(), 0);
  for (std::size_t pos = 0; pos < sc.tris().size(); ++pos) {
    const TriangleRecord& r = idx.rec(sc.tris()[pos]);
    s.tri_present[pos] = w.has(r.e_uv) && w.has(r.e_uw) && w.has(r.e_vw);
  }
  for (std::size_t ci = 0; ci < sc.cliques().size(); ++ci) {
    const CliqueRecord& cq = idx.clique(sc.cliques()[ci].id);
    bool all = true;
    for (EdgeId e : cq.edge) all = all && w.has(e);
    s.clique_present[ci] = all;
  }
}

void count_support(const WorldScope& sc, DetScratch& s) {
  s.support.assign(sc.tris().size(), 0);
  for (std::size_t ci = 0; ci < sc.cliques().size(); ++ci) {
    if (!s.clique_present[ci]) continue;
    for (std::uint32_t pos : sc.cliques()[ci].member_pos) ++s.support[pos];
  }
}

std::uint32_t uf_find(std::vector<std::uint32_t>& parent, std::uint32_t x) {
  while (parent[x] != x) {
    parent[x] = parent[parent[x]];
    x = parent[x];
  }
  return x;
}

}  // namespace

void det_scores_into(const WorldScope& sc, const WorldGraph& w,
                     DetScratch& s) {
  const std::size_t n = sc.tris().size();
  mark_presence(sc, w, s);
  count_support(sc, s);
  s.score.assign(n, kAbsentInWorld);
  s.processed.assign(n, 0);
  // clique_present doubles as the alive flag during the peel. The queue is
  // lazy: an entry is live iff the triangle's support still equals the
  // bucket index; updates never drop a support below the active level, so
  // the cursor only moves up.
  std::int32_t max_support = 0;
  for (std::size_t pos = 0; pos < n; ++pos)
    if (s.tri_present[pos]) max_support = std::max(max_support, s.support[pos]);
  if (s.buckets.size() < static_cast<std::size_t>(max_support) + 1)
    s.buckets.resize(static_cast<std::size_t>(max_support) + 1);
  for (std::int32_t b = 0; b <= max_support; ++b) s.buckets[b].clear();
  for (std::size_t pos = 0; pos < n; ++pos)
    if (s.tri_present[pos])
      s.buckets[s.support[pos]].push_back(static_cast<std::uint32_t>(pos));
  for (std::int32_t level = 0; level <= max_support; ++level) {
    auto& bucket = s.buckets[static_cast<std::size_t>(level)];
    for (std::size_t i = 0; i < bucket.size(); ++i) {  // grows while draining
      std::uint32_t pos = bucket[i];
      if (s.processed[pos] || s.support[pos] != level) continue;
      s.score[pos] = level;
      s.processed[pos] = 1;
      for (std::uint32_t ci : sc.tri_cliques(pos)) {
        if (!s.clique_present[ci]) continue;
        s.clique_present[ci] = 0;
        for (std::uint32_t other : sc.cliques()[ci].member_pos) {
          if (other == pos || s.processed[other]) continue;
          if (s.support[other] > level) {
            --s.support[other];
            s.buckets[s.support[other]].push_back(other);
          }
        }
      }
    }
  }
}

std::vector<std::int32_t> det_scores(const TriangleIndex& idx,
                                     const WorldGraph& w) {
  WorldScope sc = WorldScope::full(idx);
  DetScratch s;
  det_scores_into(sc, w, s);
  std::vector<std::int32_t> out(idx.triangle_count(), kNoScore);
  for (std::size_t pos = 0; pos < sc.tris().size(); ++pos)
    out[sc.tris()[pos]] = s.score[pos];
  return out;
}

WorldNucleusEval evaluate_world_nucleus(const WorldScope& sc,
                                        const WorldGraph& w, DetScratch& s) {
  WorldNucleusEval ev;
  for (EdgeId e : sc.edges())
    if (w.has(e)) {
      ev.any_edge = true;
      break;
    }
  if (!ev.any_edge) return ev;
  mark_presence(sc, w, s);
  count_support(sc, s);

  const std::size_t n = sc.tris().size();
  ev.min_support = 0;
  bool first = true;
  for (std::size_t pos = 0; pos < n; ++pos) {
    if (!s.tri_present[pos]) continue;
    ev.any_triangle = true;
    if (first || s.support[pos] < ev.min_support)
      ev.min_support = s.support[pos];
    first = false;
  }
  if (!ev.any_triangle) return ev;

  // union-find over present triangles through present cliques
  const TriangleIndex& idx = sc.index();
  s.uf_parent.resize(n);
  std::iota(s.uf_parent.begin(), s.uf_parent.end(), 0);
  s.edge_covered.assign(sc.edges().size(), 0);
  for (std::size_t ci = 0; ci < sc.cliques().size(); ++ci) {
    if (!s.clique_present[ci]) continue;
    const WorldScope::ScopeClique& scq = sc.cliques()[ci];
    std::uint32_t root = uf_find(s.uf_parent, scq.member_pos[0]);
    for (int m = 1; m < 4; ++m) {
      std::uint32_t r2 = uf_find(s.uf_parent, scq.member_pos[m]);
      s.uf_parent[r2] = root;
    }
    for (EdgeId e : idx.clique(scq.id).edge) {
      auto it = std::lower_bound(sc.edges().begin(), sc.edges().end(), e);
      s.edge_covered[static_cast<std::size_t>(it - sc.edges().begin())] = 1;
    }
  }

  ev.edges_covered = true;
  for (std::size_t i = 0; i < sc.edges().size(); ++i)
    if (w.has(sc.edges()[i]) && !s.edge_covered[i]) {
      ev.edges_covered = false;
      break;
    }

  ev.connected = true;
  std::uint32_t root = 0;
  first = true;
  for (std::size_t pos = 0; pos < n; ++pos) {
    if (!s.tri_present[pos]) continue;
    std::uint32_t r = uf_find(s.uf_parent, static_cast<std::uint32_t>(pos));
    if (first) {
      root = r;
      first = false;
    } else if (r != root) {
      ev.connected = false;
      break;
    }
  }
  return ev;
}

bool is_k_nucleus(const TriangleIndex& idx, const WorldGraph& w, int k) {
  WorldScope sc = WorldScope::full(idx);
  DetScratch s;
  WorldNucleusEval ev = evaluate_world_nucleus(sc, w, s);
  return ev.structure_ok() && ev.min_support >= k;
}

std::optional<int> max_k_nucleus_containing(const TriangleIndex& idx,
                                            const WorldGraph& w,
                                            TriangleId t) {
  const TriangleRecord& r = idx.rec(t);
  if (!(w.has(r.e_uv) && w.has(r.e_uw) && w.has(r.e_vw))) return std::nullopt;
  return det_scores(idx, w)[t];
}

}  // namespace pnucleus
