#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "pnucleus/nucleus.hpp"
#include "pnucleus/triangle_index.hpp"

namespace pnucleus {

// One deterministic instantiation of a (sub)graph: a presence bit per parent
// edge. Triangle and 4-clique queries are answered with respect to present
// edges only.
class WorldGraph {
 public:
  explicit WorldGraph(const ProbabilisticGraph& g)
      : g_(&g), bits_((g.edge_count() + 63) / 64, 0) {}

  // The world in which every edge of the view is present.
  static WorldGraph all_of(const SubgraphView& h);

  const ProbabilisticGraph& graph() const { return *g_; }
  bool has(EdgeId e) const { return (bits_[e >> 6] >> (e & 63)) & 1u; }
  void set(EdgeId e) { bits_[e >> 6] |= std::uint64_t{1} << (e & 63); }
  void clear_all() { std::fill(bits_.begin(), bits_.end(), 0); }
  std::size_t present_count() const;

 private:
  const ProbabilisticGraph* g_;
  std::vector<std::uint64_t> bits_;
};

// The triangles, 4-cliques, and edges of one subgraph, precomputed once so
// per-world work is proportional to the subgraph, not the parent graph.
// Triangles are addressed by scope position; cliques carry their members'
// positions.
class WorldScope {
 public:
  static WorldScope of(const TriangleIndex& idx, const SubgraphView& h);
  static WorldScope full(const TriangleIndex& idx);

  const TriangleIndex& index() const { return *idx_; }
  const std::vector<EdgeId>& edges() const { return edges_; }
  const std::vector<TriangleId>& tris() const { return tris_; }
  // position of a triangle within the scope, or npos
  static constexpr std::uint32_t npos = ~std::uint32_t{0};
  std::uint32_t pos_of(TriangleId t) const { return tri_pos_[t]; }

  struct ScopeClique {
    CliqueId id;
    std::array<std::uint32_t, 4> member_pos;
  };
  const std::vector<ScopeClique>& cliques() const { return cliques_; }
  // scope-clique indices containing the triangle at a scope position
  const std::vector<std::uint32_t>& tri_cliques(std::uint32_t pos) const {
    return tri_cliques_[pos];
  }

 private:
  const TriangleIndex* idx_ = nullptr;
  std::vector<EdgeId> edges_;
  std::vector<TriangleId> tris_;
  std::vector<std::uint32_t> tri_pos_;  // parent-sized
  std::vector<ScopeClique> cliques_;
  std::vector<std::vector<std::uint32_t>> tri_cliques_;
};

inline constexpr int kAbsentInWorld = -1;

// Reusable buffers for per-world computations; one instance per worker.
struct DetScratch {
  std::vector<std::uint8_t> tri_present, clique_present, processed;
  std::vector<std::uint8_t> edge_covered;
  std::vector<std::int32_t> support, score;  // by scope position
  std::vector<std::uint32_t> uf_parent;
  std::vector<std::vector<std::uint32_t>> buckets;  // lazy peel queue
};

// Deterministic (3,4)-nucleusness of every scope triangle present in the
// world, by min-support peeling; kAbsentInWorld where an edge is missing.
// Results land in scratch.score, indexed by scope position.
void det_scores_into(const WorldScope& scope, const WorldGraph& w,
                     DetScratch& scratch);

// Whole-graph convenience: scores by triangle id, kNoScore when absent.
std::vector<std::int32_t> det_scores(const TriangleIndex& idx,
                                     const WorldGraph& w);

struct WorldNucleusEval {
  bool any_edge = false;
  bool any_triangle = false;
  bool edges_covered = false;   // every present edge lies in a present 4-clique
  bool connected = false;       // present triangles pairwise 4-clique-connected
  std::int32_t min_support = 0; // over present triangles, when any
  bool structure_ok() const {
    return any_edge && any_triangle && edges_covered && connected;
  }
};

// Leaves per-position presence flags in scratch.tri_present.
WorldNucleusEval evaluate_world_nucleus(const WorldScope& scope,
                                        const WorldGraph& w,
                                        DetScratch& scratch);

// Whether the whole world is a deterministic k-nucleus: a union of
// 4-cliques, every triangle supported by at least k 4-cliques, and all
// triangles 4-clique-connected. An edgeless world is not a k-nucleus.
bool is_k_nucleus(const TriangleIndex& idx, const WorldGraph& w, int k);

// Largest k such that some subgraph of w containing t is a deterministic
// k-nucleus (equals the peeling score); empty when t is not present in w.
std::optional<int> max_k_nucleus_containing(const TriangleIndex& idx,
                                            const WorldGraph& w, TriangleId t);

}  // namespace pnucleus
