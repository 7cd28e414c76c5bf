#pragma once

#include "pnucleus/local_decomp.hpp"
#include "pnucleus/mc_engine.hpp"

namespace pnucleus {

struct GlobalOptions {
  bool keep_nonmaximal = false;  // also surface raw accepted candidates
};

struct FgResult {
  std::vector<Nucleus> nuclei;        // consolidated, maximal accepted only
  std::vector<Nucleus> raw_accepted;  // filled when keep_nonmaximal is set
};

// FG: for each k up to the largest local score, grow 4-clique-closed
// candidates inside each local nucleus, estimate Pr(X >= k) under the global
// indicator for every triangle of the candidate, and keep candidates where
// all of them clear theta. Overlapping accepted candidates are merged when
// the merged candidate also passes ("verified-union consolidation"), then
// non-maximal survivors are dropped.
FgResult fg_decompose(const TriangleIndex& idx, const NucleusScores& scores,
                      double theta, const TailEstimator& tails,
                      const GlobalOptions& opts = {});

// WG: for each local nucleus, estimate Pr(X >= k) under the weakly-global
// indicator for every triangle of the nucleus subgraph and emit connected
// unions (through 4-cliques whose four triangles all qualify) of triangles
// clearing theta.
std::vector<Nucleus> wg_decompose(const TriangleIndex& idx,
                                  const NucleusScores& scores, double theta,
                                  const TailEstimator& tails);

// Monte-Carlo backed conveniences.
FgResult fg_decompose(const TriangleIndex& idx, const NucleusScores& scores,
                      double theta, const SamplingConfig& cfg, int threads = 1,
                      const GlobalOptions& opts = {});
std::vector<Nucleus> wg_decompose(const TriangleIndex& idx,
                                  const NucleusScores& scores, double theta,
                                  const SamplingConfig& cfg, int threads = 1);

}  // namespace pnucleus
