#pragma once

#include <functional>
#include <span>
#include <vector>

#include "pnucleus/det_nucleus.hpp"
#include "pnucleus/nucleus.hpp"

namespace pnucleus {

// Guard on the 2^|E| enumeration cost.
struct OracleBudget {
  unsigned max_edges = 20;
};

// Exact tails from one full possible-world enumeration: tail(t, k) is the
// probability that triangle t is present and satisfies the mode's indicator
// at level k. Triangles outside the enumerated subgraph have tail 0.
class ExactTailTable {
 public:
  ExactTailTable(Mode mode, std::vector<std::vector<double>> tails)
      : mode_(mode), tails_(std::move(tails)) {}

  Mode mode() const { return mode_; }

  double tail(TriangleId t, int k) const {
    const auto& ts = tails_[t];
    if (ts.empty()) return 0.0;
    if (k <= 0) return ts[0];
    if (static_cast<std::size_t>(k) >= ts.size()) return 0.0;
    return ts[static_cast<std::size_t>(k)];
  }

 private:
  Mode mode_;
  std::vector<std::vector<double>> tails_;  // [triangle][k]
};

// Enumerates every possible world of h (2^|E(h)| of them) once and
// accumulates per-triangle indicator histograms in extended precision.
// Throws BudgetError beyond the budget.
ExactTailTable exact_tail_table(const TriangleIndex& idx,
                                const SubgraphView& h, Mode mode,
                                OracleBudget budget = {}, int threads = 1);

double exact_tail(const TriangleIndex& idx, const SubgraphView& h,
                  TriangleId t, int k, Mode mode, OracleBudget budget = {});

// Sum of Pr(world) over all worlds of h; equals 1 up to rounding.
double total_world_probability(const SubgraphView& h, OracleBudget budget = {});

// Tail oracle with the estimate_tails signature, for swapping exact values
// into the global decompositions on small inputs.
TailEstimator oracle_estimator(const TriangleIndex& idx,
                               OracleBudget budget = {}, int threads = 1);

}  // namespace pnucleus
