#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pnucleus/errors.hpp"

namespace pnucleus {

// Internal vertex ids are contiguous 0..n-1; the original input labels are
// kept for reporting.
using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;
using VertexLabel = std::uint64_t;

struct ProbEdge {
  VertexId u;  // u < v
  VertexId v;
  double p;  // existence probability, in (0,1]
};

struct Neighbor {
  VertexId v;
  EdgeId edge;
  double p;
};

// Immutable undirected graph whose edges carry independent existence
// probabilities. Safe for concurrent reads once constructed.
class ProbabilisticGraph {
 public:
  // Parses lines of the form "u v p" (whitespace separated, '#' comments,
  // blank lines ignored, LF/CRLF). Vertex labels are arbitrary non-negative
  // integers; they are remapped to 0..n-1 in ascending label order.
  static ProbabilisticGraph load_edge_list(std::istream& in);

  // Same validation as load_edge_list, for programmatic construction.
  // Each tuple index doubles as the "line number" in error messages.
  static ProbabilisticGraph from_edges(
      const std::vector<std::tuple<VertexLabel, VertexLabel, double>>& edges);

  std::size_t vertex_count() const { return labels_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  const std::vector<ProbEdge>& edges() const { return edges_; }
  const ProbEdge& edge(EdgeId e) const;

  std::span<const Neighbor> neighbors(VertexId u) const;
  std::size_t degree(VertexId u) const { return neighbors(u).size(); }

  // Binary search over the sorted adjacency of u.
  std::optional<EdgeId> find_edge(VertexId u, VertexId v) const;

  VertexLabel label(VertexId u) const { return labels_[u]; }
  std::optional<VertexId> vertex_of_label(VertexLabel l) const;

  // Canonical edge list in the original labeling, one "u v p" line per edge.
  void write_edge_list(std::ostream& out) const;

 private:
  ProbabilisticGraph() = default;
  // (u label, v label, probability, line number) — already validated
  static ProbabilisticGraph build(
      std::vector<std::tuple<VertexLabel, VertexLabel, double, std::size_t>>
          raw);
  void build_adjacency();

  std::vector<VertexLabel> labels_;  // ascending
  std::vector<ProbEdge> edges_;      // sorted by (u,v)
  std::vector<Neighbor> adj_;        // per-vertex slices, sorted by neighbor
  std::vector<std::uint32_t> adj_start_;
};

// Read-only selection of a subset of a parent graph's edges. The vertex set
// is the set of endpoints of the selected edges.
class SubgraphView {
 public:
  SubgraphView(const ProbabilisticGraph& g, std::vector<EdgeId> edge_ids);
  static SubgraphView full(const ProbabilisticGraph& g);

  const ProbabilisticGraph& parent() const { return *g_; }
  bool contains(EdgeId e) const { return mask_[e] != 0; }
  const std::vector<EdgeId>& edge_ids() const { return edge_ids_; }
  std::size_t edge_count() const { return edge_ids_.size(); }
  const std::vector<VertexId>& vertex_ids() const { return vertices_; }
  const std::vector<std::uint8_t>& mask() const { return mask_; }

 private:
  const ProbabilisticGraph* g_;
  std::vector<EdgeId> edge_ids_;  // sorted, deduplicated
  std::vector<std::uint8_t> mask_;
  std::vector<VertexId> vertices_;  // sorted endpoints of selected edges
};

SubgraphView induced_edge_subgraph(const ProbabilisticGraph& g,
                                   std::vector<EdgeId> edge_ids);

}  // namespace pnucleus
