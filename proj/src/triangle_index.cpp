#include "pnucleus/triangle_index.hpp"

#include <algorithm>

#include "pnucleus/parallel.hpp"

namespace pnucleus {

namespace {

// Walks the sorted adjacencies of the triangle's vertices in lockstep and
// emits each common neighbor (ascending) with the three connecting edges.
template <typename Emit>
void for_common_neighbors(const ProbabilisticGraph& g, VertexId u, VertexId v,
                          VertexId w, Emit&& emit) {
  auto a = g.neighbors(u);
  auto b = g.neighbors(v);
  auto c = g.neighbors(w);
  std::size_t i = 0, j = 0, k = 0;
  while (i < a.size() && j < b.size() && k < c.size()) {
    VertexId x = a[i].v, y = b[j].v, z = c[k].v;
    if (x == y && y == z) {
      emit(x, a[i], b[j], c[k]);
      ++i, ++j, ++k;
    } else {
      VertexId m = std::max({x, y, z});
      while (i < a.size() && a[i].v < m) ++i;
      while (j < b.size() && b[j].v < m) ++j;
      while (k < c.size() && c[k].v < m) ++k;
    }
  }
}

}  // namespace

TriangleIndex TriangleIndex::build(const ProbabilisticGraph& g, int threads) {
  TriangleIndex idx;
  idx.g_ = &g;
  const std::size_t n = g.vertex_count();

  // Degree-ordered forward adjacency; each triangle is found once at its
  // lowest-rank vertex.
  std::vector<std::uint32_t> rank(n);
  {
    std::vector<VertexId> order(n);
    for (VertexId u = 0; u < n; ++u) order[u] = u;
    std::sort(order.begin(), order.end(), [&g](VertexId a, VertexId b) {
      auto da = g.degree(a), db = g.degree(b);
      return da != db ? da < db : a < b;
    });
    for (std::uint32_t r = 0; r < n; ++r) rank[order[r]] = r;
  }
  std::vector<std::vector<VertexId>> fwd(n);
  for (VertexId u = 0; u < n; ++u) {
    for (const Neighbor& nb : g.neighbors(u))
      if (rank[nb.v] > rank[u]) fwd[u].push_back(nb.v);
    // already ascending by vertex id (adjacency is sorted)
  }

  std::vector<Triangle> tris;
  for (VertexId u = 0; u < n; ++u) {
    for (VertexId v : fwd[u]) {
      const auto& fu = fwd[u];
      const auto& fv = fwd[v];
      std::size_t i = 0, j = 0;
      while (i < fu.size() && j < fv.size()) {
        if (fu[i] == fv[j]) {
          VertexId t[3] = {u, v, fu[i]};
          std::sort(t, t + 3);
          tris.push_back({t[0], t[1], t[2]});
          ++i, ++j;
        } else if (fu[i] < fv[j]) {
          ++i;
        } else {
          ++j;
        }
      }
    }
  }
  std::sort(tris.begin(), tris.end(), [](const Triangle& a, const Triangle& b) {
    return std::tie(a.u, a.v, a.w) < std::tie(b.u, b.v, b.w);
  });

  const std::size_t T = tris.size();
  idx.tris_.resize(T);
  std::vector<std::uint32_t> ext_count(T, 0);
  parallel_for(T, threads, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t t = lo; t < hi; ++t) {
      std::uint32_t cnt = 0;
      for_common_neighbors(g, tris[t].u, tris[t].v, tris[t].w,
                           [&](VertexId, const Neighbor&, const Neighbor&,
                               const Neighbor&) { ++cnt; });
      ext_count[t] = cnt;
    }
  });
  std::vector<std::uint32_t> ext_start(T + 1, 0);
  for (std::size_t t = 0; t < T; ++t) ext_start[t + 1] = ext_start[t] + ext_count[t];
  idx.exts_.resize(ext_start[T]);

  parallel_for(T, threads, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t t = lo; t < hi; ++t) {
      const Triangle& tr = tris[t];
      TriangleRecord r;
      r.tri = tr;
      r.e_uv = *g.find_edge(tr.u, tr.v);
      r.e_uw = *g.find_edge(tr.u, tr.w);
      r.e_vw = *g.find_edge(tr.v, tr.w);
      r.tri_prob = g.edges()[r.e_uv].p * g.edges()[r.e_uw].p * g.edges()[r.e_vw].p;
      r.ext_begin = ext_start[t];
      r.ext_count = ext_count[t];
      std::uint32_t at = r.ext_begin;
      for_common_neighbors(
          g, tr.u, tr.v, tr.w,
          [&](VertexId z, const Neighbor& nu, const Neighbor& nv,
              const Neighbor& nw) {
            idx.exts_[at].z = z;
            idx.exts_[at].prob = nu.p * nv.p * nw.p;
            idx.exts_[at].clique = 0;  // filled below
            ++at;
          });
      idx.tris_[t] = r;
    }
  });

  // Register each 4-clique once, owned by its lexicographically smallest
  // triangle (extension vertex above the triangle's top vertex). Triangles
  // are visited in canonical order, so owners come first and the other three
  // member slots can be resolved immediately.
  auto slot_of = [&idx](TriangleId t, VertexId z) -> std::uint32_t {
    const TriangleRecord& r = idx.tris_[t];
    const Extension* base = idx.exts_.data() + r.ext_begin;
    auto it = std::lower_bound(
        base, base + r.ext_count, z,
        [](const Extension& e, VertexId v) { return e.z < v; });
    return static_cast<std::uint32_t>(it - base);
  };
  for (TriangleId t = 0; t < T; ++t) {
    const TriangleRecord& r = idx.tris_[t];
    for (std::uint32_t s = 0; s < r.ext_count; ++s) {
      Extension& ex = idx.exts_[r.ext_begin + s];
      if (ex.z < r.tri.w) continue;  // owner view only
      CliqueRecord cq;
      const VertexId u = r.tri.u, v = r.tri.v, w = r.tri.w, z = ex.z;
      cq.tri = {t, *idx.find(u, v, z), *idx.find(u, w, z), *idx.find(v, w, z)};
      cq.slot = {s, slot_of(cq.tri[1], w), slot_of(cq.tri[2], v),
                 slot_of(cq.tri[3], u)};
      cq.edge = {r.e_uv, r.e_uw,          r.e_vw,
                 *g.find_edge(u, z), *g.find_edge(v, z), *g.find_edge(w, z)};
      CliqueId id = static_cast<CliqueId>(idx.cliques_.size());
      for (int m = 0; m < 4; ++m)
        idx.exts_[idx.tris_[cq.tri[m]].ext_begin + cq.slot[m]].clique = id;
      idx.cliques_.push_back(cq);
    }
  }
  return idx;
}

const TriangleRecord& TriangleIndex::rec(TriangleId t) const {
  if (t >= tris_.size())
    throw IndexError("triangle id " + std::to_string(t) + " out of range");
  return tris_[t];
}

std::span<const Extension> TriangleIndex::extensions(TriangleId t) const {
  const TriangleRecord& r = rec(t);
  return {exts_.data() + r.ext_begin, r.ext_count};
}

std::optional<TriangleId> TriangleIndex::find(VertexId a, VertexId b,
                                              VertexId c) const {
  VertexId s[3] = {a, b, c};
  std::sort(s, s + 3);
  Triangle probe{s[0], s[1], s[2]};
  auto it = std::lower_bound(
      tris_.begin(), tris_.end(), probe,
      [](const TriangleRecord& r, const Triangle& q) {
        return std::tie(r.tri.u, r.tri.v, r.tri.w) < std::tie(q.u, q.v, q.w);
      });
  if (it != tris_.end() && it->tri == probe)
    return static_cast<TriangleId>(it - tris_.begin());
  return std::nullopt;
}

ExtensionProfile TriangleIndex::profile(TriangleId t) const {
  const TriangleRecord& r = rec(t);
  ExtensionProfile p;
  p.tri_prob = r.tri_prob;
  p.ext_probs.reserve(r.ext_count);
  p.ext_vertices.reserve(r.ext_count);
  for (const Extension& e : extensions(t)) {
    p.ext_probs.push_back(e.prob);
    p.ext_vertices.push_back(e.z);
  }
  return p;
}

std::vector<std::pair<TriangleId, CliqueId>> TriangleIndex::neighbor_triangles(
    TriangleId t) const {
  std::vector<std::pair<TriangleId, CliqueId>> out;
  for (const Extension& e : extensions(t)) {
    const CliqueRecord& cq = cliques_[e.clique];
    for (TriangleId other : cq.tri)
      if (other != t) out.emplace_back(other, e.clique);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace pnucleus
