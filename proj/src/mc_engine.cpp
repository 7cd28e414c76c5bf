#include "pnucleus/mc_engine.hpp"

#include <cmath>

#include "pnucleus/parallel.hpp"

namespace pnucleus {

namespace {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t required_samples(double epsilon, double delta) {
  if (!(epsilon > 0.0 && epsilon <= 1.0))
    throw DomainError("epsilon must lie in (0,1]");
  if (!(delta > 0.0 && delta <= 1.0))
    throw DomainError("delta must lie in (0,1]");
  double bound = std::log(2.0 / delta) / (2.0 * epsilon * epsilon);
  double n = std::ceil(bound - 1e-9);
  return n < 1.0 ? 1 : static_cast<std::uint64_t>(n);
}

std::uint64_t SamplingConfig::effective_samples() const {
  if (n_override) return *n_override;
  return std::max<std::uint64_t>(required_samples(epsilon, delta), 200);
}

double sample_unit(std::uint64_t base_seed, std::uint64_t sample_index,
                   std::uint64_t edge_index) {
  std::uint64_t h = mix64(base_seed ^ (0xA24BAED4963EE407ull * (sample_index + 1)));
  h = mix64(h ^ (0x9FB21C651E98DF25ull * (edge_index + 1)));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

WorldGraph sample_world(const SubgraphView& h, std::uint64_t sample_index,
                        const SamplingConfig& cfg) {
  WorldGraph w(h.parent());
  const auto& edges = h.parent().edges();
  for (EdgeId e : h.edge_ids())
    if (sample_unit(cfg.base_seed, sample_index, e) < edges[e].p) w.set(e);
  return w;
}

std::vector<double> estimate_tails(const TriangleIndex& idx,
                                   const SubgraphView& h,
                                   std::span<const TriangleId> triangles,
                                   int k, Mode mode, const SamplingConfig& cfg,
                                   int threads) {
  if (mode == Mode::local)
    throw DomainError("estimate_tails serves the global modes; the local tail is exact");
  const std::uint64_t n = cfg.effective_samples();
  const std::size_t m = triangles.size();
  if (threads < 1) threads = 1;
  std::vector<std::vector<std::uint64_t>> hits(
      static_cast<std::size_t>(threads), std::vector<std::uint64_t>(m, 0));

  const WorldScope scope = WorldScope::of(idx, h);
  std::vector<std::uint32_t> pos(m);
  for (std::size_t i = 0; i < m; ++i) pos[i] = scope.pos_of(triangles[i]);

  parallel_for_workers(static_cast<std::size_t>(n), threads,
               [&](std::size_t worker, std::size_t lo, std::size_t hi) {
                 auto& local = hits[worker];
                 DetScratch scratch;
                 for (std::size_t s = lo; s < hi; ++s) {
                   WorldGraph w = sample_world(h, s, cfg);
                   if (mode == Mode::weakly_global) {
                     det_scores_into(scope, w, scratch);
                     for (std::size_t i = 0; i < m; ++i) {
                       if (pos[i] == WorldScope::npos) continue;
                       std::int32_t sc = scratch.score[pos[i]];
                       if (sc != kAbsentInWorld && sc >= k) ++local[i];
                     }
                   } else {
                     WorldNucleusEval ev = evaluate_world_nucleus(scope, w, scratch);
                     if (!ev.structure_ok() || ev.min_support < k) continue;
                     for (std::size_t i = 0; i < m; ++i)
                       if (pos[i] != WorldScope::npos && scratch.tri_present[pos[i]])
                         ++local[i];
                   }
                 }
               });

  std::vector<double> tails(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    std::uint64_t total = 0;
    for (const auto& local : hits) total += local[i];
    tails[i] = static_cast<double>(total) / static_cast<double>(n);
  }
  return tails;
}

TailEstimator mc_estimator(const TriangleIndex& idx, SamplingConfig cfg,
                           int threads) {
  return [&idx, cfg, threads](const SubgraphView& h,
                              std::span<const TriangleId> tris, int k,
                              Mode mode) {
    return estimate_tails(idx, h, tris, k, mode, cfg, threads);
  };
}

}  // namespace pnucleus
