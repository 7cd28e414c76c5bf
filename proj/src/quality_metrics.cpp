#include "pnucleus/quality_metrics.hpp"

#include <algorithm>
#include <unordered_map>

namespace pnucleus {

double pd(const SubgraphView& h) {
  const std::size_t nv = h.vertex_ids().size();
  if (nv < 2) throw DomainError("pd needs at least 2 vertices");
  double sum = 0.0;
  for (EdgeId e : h.edge_ids()) sum += h.parent().edges()[e].p;
  return sum / (0.5 * static_cast<double>(nv) * static_cast<double>(nv - 1));
}

double pcc(const SubgraphView& h) {
  const ProbabilisticGraph& g = h.parent();

  // Adjacency restricted to the view, per vertex, sorted by neighbor.
  std::unordered_map<VertexId, std::vector<std::pair<VertexId, double>>> adj;
  for (EdgeId e : h.edge_ids()) {
    const ProbEdge& ed = g.edges()[e];
    adj[ed.u].emplace_back(ed.v, ed.p);
    adj[ed.v].emplace_back(ed.u, ed.p);
  }
  for (auto& [v, ns] : adj) std::sort(ns.begin(), ns.end());

  double wedge_sum = 0.0;
  for (const auto& [v, ns] : adj) {
    double s = 0.0, sq = 0.0;
    for (const auto& [w, p] : ns) {
      s += p;
      sq += p * p;
    }
    wedge_sum += 0.5 * (s * s - sq);
  }
  if (wedge_sum <= 0.0) throw DomainError("pcc needs at least one wedge");

  double tri_sum = 0.0;
  for (const auto& [u, ns] : adj) {
    for (std::size_t i = 0; i < ns.size(); ++i) {
      if (ns[i].first <= u) continue;  // count each triangle at its lowest vertex
      for (std::size_t j = i + 1; j < ns.size(); ++j) {
        const auto& a = ns[i];
        const auto& b = ns[j];
        auto it = adj.find(a.first);
        auto pos = std::lower_bound(
            it->second.begin(), it->second.end(),
            std::pair<VertexId, double>(b.first, 0.0),
            [](const auto& x, const auto& y) { return x.first < y.first; });
        if (pos != it->second.end() && pos->first == b.first)
          tri_sum += a.second * b.second * pos->second;
      }
    }
  }
  return 3.0 * tri_sum / wedge_sum;
}

}  // namespace pnucleus
