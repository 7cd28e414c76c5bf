#include "pnucleus/graph.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <tuple>

namespace pnucleus {

namespace {

bool parse_label(const std::string& tok, VertexLabel& out) {
  if (tok.empty()) return false;
  auto res = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return res.ec == std::errc() && res.ptr == tok.data() + tok.size();
}

bool parse_prob(const std::string& tok, double& out) {
  try {
    std::size_t pos = 0;
    out = std::stod(tok, &pos);
    return pos == tok.size();
  } catch (const std::exception&) {
    return false;
  }
}

}  // namespace

ProbabilisticGraph ProbabilisticGraph::build(
    std::vector<std::tuple<VertexLabel, VertexLabel, double, std::size_t>>
        raw) {
  // Remap labels to 0..n-1 in ascending label order, then canonicalize.
  std::map<VertexLabel, VertexId> remap;
  for (const auto& [u, v, p, line] : raw) {
    remap.emplace(u, 0);
    remap.emplace(v, 0);
  }
  std::vector<VertexLabel> labels;
  labels.reserve(remap.size());
  for (auto& [label, id] : remap) {
    id = static_cast<VertexId>(labels.size());
    labels.push_back(label);
  }

  std::vector<std::tuple<VertexId, VertexId, double, std::size_t>> canon;
  canon.reserve(raw.size());
  for (const auto& [u, v, p, line] : raw) {
    VertexId a = remap[u], b = remap[v];
    if (a > b) std::swap(a, b);
    canon.emplace_back(a, b, p, line);
  }
  std::sort(canon.begin(), canon.end(), [](const auto& x, const auto& y) {
    return std::pair(std::get<0>(x), std::get<1>(x)) <
           std::pair(std::get<0>(y), std::get<1>(y));
  });
  for (std::size_t i = 1; i < canon.size(); ++i) {
    if (std::get<0>(canon[i]) == std::get<0>(canon[i - 1]) &&
        std::get<1>(canon[i]) == std::get<1>(canon[i - 1])) {
      std::size_t line =
          std::max(std::get<3>(canon[i]), std::get<3>(canon[i - 1]));
      throw DuplicateEdge(
          "duplicate edge " + std::to_string(labels[std::get<0>(canon[i])]) +
              " " + std::to_string(labels[std::get<1>(canon[i])]),
          line);
    }
  }

  ProbabilisticGraph g;
  g.labels_ = std::move(labels);
  g.edges_.reserve(canon.size());
  for (const auto& [u, v, p, line] : canon) g.edges_.push_back({u, v, p});
  g.build_adjacency();
  return g;
}

ProbabilisticGraph ProbabilisticGraph::load_edge_list(std::istream& in) {
  std::vector<std::tuple<VertexLabel, VertexLabel, double, std::size_t>> raw;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream ls(line);
    std::vector<std::string> toks;
    std::string tok;
    while (ls >> tok) {
      if (tok[0] == '#') break;
      toks.push_back(tok);
    }
    if (toks.empty()) continue;
    if (toks.size() != 3)
      throw ParseError("expected 'u v p', got " + std::to_string(toks.size()) +
                           " fields",
                       lineno);
    VertexLabel u, v;
    double p;
    if (!parse_label(toks[0], u))
      throw ParseError("bad vertex id '" + toks[0] + "'", lineno);
    if (!parse_label(toks[1], v))
      throw ParseError("bad vertex id '" + toks[1] + "'", lineno);
    if (!parse_prob(toks[2], p))
      throw ParseError("bad probability '" + toks[2] + "'", lineno);
    if (u == v)
      throw SelfLoop("self loop at vertex " + std::to_string(u), lineno);
    if (!(p > 0.0) || p > 1.0)
      throw BadProbability("probability " + toks[2] + " outside (0,1]",
                           lineno);
    raw.emplace_back(u, v, p, lineno);
  }
  return build(std::move(raw));
}

ProbabilisticGraph ProbabilisticGraph::from_edges(
    const std::vector<std::tuple<VertexLabel, VertexLabel, double>>& edges) {
  std::vector<std::tuple<VertexLabel, VertexLabel, double, std::size_t>> raw;
  raw.reserve(edges.size());
  std::size_t i = 0;
  for (const auto& [u, v, p] : edges) {
    ++i;
    if (u == v) throw SelfLoop("self loop at vertex " + std::to_string(u), i);
    if (!(p > 0.0) || p > 1.0)
      throw BadProbability("probability " + std::to_string(p) +
                               " outside (0,1]",
                           i);
    raw.emplace_back(u, v, p, i);
  }
  return build(std::move(raw));
}

void ProbabilisticGraph::build_adjacency() {
  const std::size_t n = labels_.size();
  std::vector<std::uint32_t> deg(n + 1, 0);
  for (const ProbEdge& e : edges_) {
    ++deg[e.u];
    ++deg[e.v];
  }
  adj_start_.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) adj_start_[i + 1] = adj_start_[i] + deg[i];
  adj_.resize(adj_start_[n]);
  std::vector<std::uint32_t> cursor(adj_start_.begin(), adj_start_.end() - 1);
  for (EdgeId e = 0; e < edges_.size(); ++e) {
    const ProbEdge& ed = edges_[e];
    adj_[cursor[ed.u]++] = {ed.v, e, ed.p};
    adj_[cursor[ed.v]++] = {ed.u, e, ed.p};
  }
  for (std::size_t i = 0; i < n; ++i)
    std::sort(adj_.begin() + adj_start_[i], adj_.begin() + adj_start_[i + 1],
              [](const Neighbor& a, const Neighbor& b) { return a.v < b.v; });
}

const ProbEdge& ProbabilisticGraph::edge(EdgeId e) const {
  if (e >= edges_.size())
    throw IndexError("edge id " + std::to_string(e) + " out of range");
  return edges_[e];
}

std::span<const Neighbor> ProbabilisticGraph::neighbors(VertexId u) const {
  if (u >= labels_.size())
    throw IndexError("vertex id " + std::to_string(u) + " out of range");
  return {adj_.data() + adj_start_[u], adj_start_[u + 1] - adj_start_[u]};
}

std::optional<EdgeId> ProbabilisticGraph::find_edge(VertexId u,
                                                    VertexId v) const {
  auto ns = neighbors(u);
  auto it = std::lower_bound(
      ns.begin(), ns.end(), v,
      [](const Neighbor& a, VertexId b) { return a.v < b; });
  if (it != ns.end() && it->v == v) return it->edge;
  return std::nullopt;
}

std::optional<VertexId> ProbabilisticGraph::vertex_of_label(
    VertexLabel l) const {
  auto it = std::lower_bound(labels_.begin(), labels_.end(), l);
  if (it != labels_.end() && *it == l)
    return static_cast<VertexId>(it - labels_.begin());
  return std::nullopt;
}

void ProbabilisticGraph::write_edge_list(std::ostream& out) const {
  out.precision(17);
  for (const ProbEdge& e : edges_)
    out << labels_[e.u] << ' ' << labels_[e.v] << ' ' << e.p << '\n';
}

SubgraphView::SubgraphView(const ProbabilisticGraph& g,
                           std::vector<EdgeId> edge_ids)
    : g_(&g), edge_ids_(std::move(edge_ids)) {
  std::sort(edge_ids_.begin(), edge_ids_.end());
  edge_ids_.erase(std::unique(edge_ids_.begin(), edge_ids_.end()),
                  edge_ids_.end());
  mask_.assign(g.edge_count(), 0);
  for (EdgeId e : edge_ids_) {
    if (e >= g.edge_count())
      throw IndexError("edge id " + std::to_string(e) + " out of range");
    mask_[e] = 1;
  }
  for (EdgeId e : edge_ids_) {
    vertices_.push_back(g.edges()[e].u);
    vertices_.push_back(g.edges()[e].v);
  }
  std::sort(vertices_.begin(), vertices_.end());
  vertices_.erase(std::unique(vertices_.begin(), vertices_.end()),
                  vertices_.end());
}

SubgraphView SubgraphView::full(const ProbabilisticGraph& g) {
  std::vector<EdgeId> all(g.edge_count());
  for (EdgeId e = 0; e < all.size(); ++e) all[e] = e;
  return SubgraphView(g, std::move(all));
}

SubgraphView induced_edge_subgraph(const ProbabilisticGraph& g,
                                   std::vector<EdgeId> edge_ids) {
  return SubgraphView(g, std::move(edge_ids));
}

}  // namespace pnucleus
