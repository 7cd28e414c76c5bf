#include "pnucleus/local_decomp.hpp"

#include <algorithm>
#include <numeric>

#include "pnucleus/bucket_queue.hpp"
#include "pnucleus/parallel.hpp"

namespace pnucleus {

const char* to_string(Mode m) {
  switch (m) {
    case Mode::local: return "local";
    case Mode::global: return "global";
    case Mode::weakly_global: return "weakly-global";
  }
  return "?";
}

const char* to_string(ScoreBackend b) {
  return b == ScoreBackend::exact ? "exact" : "hybrid";
}

namespace {

std::optional<int> bound_for(double tri_prob, std::span<const double> ext,
                             double theta, const Hyperparams& hp,
                             ScoreBackend backend, int k_cap) {
  if (backend == ScoreBackend::exact)
    return dp_max_k(tri_prob, ext, theta, k_cap);
  return max_k(tri_prob, ext, theta, select_method(ext, hp));
}

}  // namespace

NucleusScores compute_scores(const TriangleIndex& idx, double theta,
                             const Hyperparams& hp, ScoreBackend backend,
                             int threads) {
  if (!(theta > 0.0 && theta <= 1.0))
    throw DomainError("theta must lie in (0,1]");
  hp.validate();
  const std::size_t T = idx.triangle_count();

  NucleusScores out;
  out.theta = theta;
  out.score.assign(T, kNoScore);

  std::vector<std::int32_t> bound(T, kNoScore);
  parallel_for(T, threads, [&](std::size_t lo, std::size_t hi) {
    std::vector<double> probs;
    for (std::size_t t = lo; t < hi; ++t) {
      const TriangleRecord& r = idx.rec(t);
      probs.clear();
      for (const Extension& ex : idx.extensions(static_cast<TriangleId>(t)))
        probs.push_back(ex.prob);
      auto b = bound_for(r.tri_prob, probs, theta, hp, backend, -1);
      if (b) bound[t] = *b;
    }
  });

  // Peel: finalize the unprocessed triangle of minimum bound, destroy its
  // surviving 4-cliques, and recompute the bound of each co-member that
  // still sits above the current level. Recomputed bounds are clamped into
  // [level, old bound] so the finalization sequence stays non-decreasing.
  std::vector<std::uint8_t> alive;  // per extension slot, flattened
  {
    std::size_t total = 0;
    for (std::size_t t = 0; t < T; ++t) total += idx.rec(t).ext_count;
    alive.assign(total, 1);
  }
  std::vector<std::uint8_t> clique_alive(idx.clique_count(), 1);
  std::vector<std::uint8_t> processed(T, 0);

  BucketQueue queue;
  for (TriangleId t = 0; t < T; ++t)
    if (bound[t] != kNoScore) queue.push(t, bound[t]);

  std::vector<double> alive_probs;
  while (auto top = queue.pop_min()) {
    auto [t, level] = *top;
    out.score[t] = level;
    processed[t] = 1;
    const TriangleRecord& r = idx.rec(t);
    for (std::uint32_t s = 0; s < r.ext_count; ++s) {
      const Extension& ex = idx.extensions(t)[s];
      if (!clique_alive[ex.clique]) continue;
      clique_alive[ex.clique] = 0;
      const CliqueRecord& cq = idx.clique(ex.clique);
      for (int m = 0; m < 4; ++m) {
        TriangleId other = cq.tri[m];
        if (other == t) continue;
        alive[idx.rec(other).ext_begin + cq.slot[m]] = 0;
        if (processed[other] || bound[other] == kNoScore) continue;
        if (bound[other] > level) {
          const TriangleRecord& ro = idx.rec(other);
          alive_probs.clear();
          for (std::uint32_t s2 = 0; s2 < ro.ext_count; ++s2)
            if (alive[ro.ext_begin + s2])
              alive_probs.push_back(idx.extensions(other)[s2].prob);
          auto raw = bound_for(ro.tri_prob, alive_probs, theta, hp, backend,
                               bound[other]);
          int nb = std::clamp(raw.value_or(0), level, static_cast<int>(bound[other]));
          if (nb != bound[other]) {
            queue.update(other, bound[other], nb);
            bound[other] = nb;
          }
        }
      }
    }
  }
  return out;
}

std::vector<Nucleus> assemble_nuclei(const TriangleIndex& idx,
                                     const NucleusScores& scores, int k) {
  if (k < 1) throw DomainError("nuclei are materialized for k >= 1 only");
  const std::size_t T = idx.triangle_count();
  auto member = [&](TriangleId t) {
    return scores.score[t] != kNoScore && scores.score[t] >= k;
  };

  std::vector<std::uint32_t> parent(T);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&parent](std::uint32_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (CliqueId q = 0; q < idx.clique_count(); ++q) {
    const CliqueRecord& cq = idx.clique(q);
    bool all = true;
    for (TriangleId t : cq.tri) all = all && member(t);
    if (!all) continue;
    std::uint32_t root = find(cq.tri[0]);
    for (int m = 1; m < 4; ++m) parent[find(cq.tri[m])] = root;
  }

  std::vector<std::vector<TriangleId>> groups;
  std::vector<std::int32_t> group_of(T, -1);
  for (TriangleId t = 0; t < T; ++t) {
    if (!member(t)) continue;
    std::uint32_t root = find(t);
    if (group_of[root] < 0) {
      group_of[root] = static_cast<std::int32_t>(groups.size());
      groups.emplace_back();
    }
    groups[group_of[root]].push_back(t);
  }

  std::vector<Nucleus> out;
  out.reserve(groups.size());
  for (auto& tris : groups) {
    Nucleus nuc;
    nuc.mode = Mode::local;
    nuc.k = k;
    nuc.theta = scores.theta;
    nuc.triangles = std::move(tris);
    for (TriangleId t : nuc.triangles) {
      const TriangleRecord& r = idx.rec(t);
      nuc.edges.push_back(r.e_uv);
      nuc.edges.push_back(r.e_uw);
      nuc.edges.push_back(r.e_vw);
    }
    std::sort(nuc.edges.begin(), nuc.edges.end());
    nuc.edges.erase(std::unique(nuc.edges.begin(), nuc.edges.end()),
                    nuc.edges.end());
    for (EdgeId e : nuc.edges) {
      nuc.vertices.push_back(idx.graph().edges()[e].u);
      nuc.vertices.push_back(idx.graph().edges()[e].v);
    }
    std::sort(nuc.vertices.begin(), nuc.vertices.end());
    nuc.vertices.erase(std::unique(nuc.vertices.begin(), nuc.vertices.end()),
                       nuc.vertices.end());
    out.push_back(std::move(nuc));
  }
  std::sort(out.begin(), out.end(), [](const Nucleus& a, const Nucleus& b) {
    return a.edges < b.edges;
  });
  return out;
}

}  // namespace pnucleus
