#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "pnucleus/graph.hpp"

namespace pnucleus {

using TriangleId = std::uint32_t;
using CliqueId = std::uint32_t;

struct Triangle {
  VertexId u, v, w;  // u < v < w
  friend bool operator==(const Triangle&, const Triangle&) = default;
};

// One 4-clique extension of a triangle: the common neighbor z together with
// the joint probability of the three edges connecting z to the triangle.
struct Extension {
  VertexId z;
  double prob;      // p(u,z) * p(v,z) * p(w,z)
  CliqueId clique;  // the 4-clique this extension completes
};

struct TriangleRecord {
  Triangle tri;
  EdgeId e_uv, e_uw, e_vw;
  double tri_prob;  // product of the triangle's own three edge probabilities
  std::uint32_t ext_begin;
  std::uint32_t ext_count;
};

// A 4-clique, seen once; each of its four triangles references it through
// one extension slot.
struct CliqueRecord {
  std::array<TriangleId, 4> tri;
  std::array<std::uint32_t, 4> slot;  // extension index within tri[i]
  std::array<EdgeId, 6> edge;
};

// Value type handed to the support model: a triangle's own probability plus
// the probabilities of each of its 4-clique extensions, in ascending order
// of extension vertex.
struct ExtensionProfile {
  double tri_prob = 1.0;
  std::vector<double> ext_probs;
  std::vector<VertexId> ext_vertices;
};

// Triangles of a graph, each with its 4-clique extension profile, plus
// triangle adjacency through shared 4-cliques. Immutable once built.
class TriangleIndex {
 public:
  static TriangleIndex build(const ProbabilisticGraph& g, int threads = 1);

  const ProbabilisticGraph& graph() const { return *g_; }

  std::size_t triangle_count() const { return tris_.size(); }
  const TriangleRecord& rec(TriangleId t) const;
  std::span<const Extension> extensions(TriangleId t) const;

  std::size_t clique_count() const { return cliques_.size(); }
  const CliqueRecord& clique(CliqueId c) const { return cliques_[c]; }

  std::optional<TriangleId> find(VertexId a, VertexId b, VertexId c) const;

  ExtensionProfile profile(TriangleId t) const;

  // The other three triangles of every 4-clique containing t, each paired
  // with the shared clique id.
  std::vector<std::pair<TriangleId, CliqueId>> neighbor_triangles(
      TriangleId t) const;

 private:
  const ProbabilisticGraph* g_ = nullptr;
  std::vector<TriangleRecord> tris_;  // sorted by (u,v,w); find() binary-searches
  std::vector<Extension> exts_;
  std::vector<CliqueRecord> cliques_;
};

}  // namespace pnucleus
