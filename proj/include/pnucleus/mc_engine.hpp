#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "pnucleus/det_nucleus.hpp"
#include "pnucleus/nucleus.hpp"

namespace pnucleus {

// Hoeffding sample count: smallest n with ceil((1/2eps^2) ln(2/delta)); the
// ceiling backs off by 1e-9 so mathematically integral bounds stay put.
std::uint64_t required_samples(double epsilon, double delta);

struct SamplingConfig {
  double epsilon = 0.1;
  double delta = 0.1;
  std::optional<std::uint64_t> n_override;
  std::uint64_t base_seed = 0;

  // n_override wins; otherwise max(required_samples, 200), mirroring the
  // practice of sampling more than the bound demands.
  std::uint64_t effective_samples() const;
};

// Counter-based stream split: every (seed, sample, edge) triple gets an
// independent uniform draw, so results cannot depend on evaluation order or
// worker count.
double sample_unit(std::uint64_t base_seed, std::uint64_t sample_index,
                   std::uint64_t edge_index);

// One possible world of h: each edge kept independently with its probability.
WorldGraph sample_world(const SubgraphView& h, std::uint64_t sample_index,
                        const SamplingConfig& cfg);

// Monte-Carlo estimate of Pr(X >= k) for each listed triangle, all served by
// a single pass of n sampled worlds. mode selects the indicator: global
// requires the whole world to be a deterministic k-nucleus, weakly-global
// requires a deterministic k-nucleus subgraph containing the triangle.
std::vector<double> estimate_tails(const TriangleIndex& idx,
                                   const SubgraphView& h,
                                   std::span<const TriangleId> triangles,
                                   int k, Mode mode, const SamplingConfig& cfg,
                                   int threads = 1);

TailEstimator mc_estimator(const TriangleIndex& idx, SamplingConfig cfg,
                           int threads = 1);

}  // namespace pnucleus
