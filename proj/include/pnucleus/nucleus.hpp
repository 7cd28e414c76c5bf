#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "pnucleus/triangle_index.hpp"

namespace pnucleus {

enum class Mode { local, global, weakly_global };

const char* to_string(Mode m);

inline constexpr int kNoScore = -1;

// Per-triangle nucleusness at a fixed theta. kNoScore marks triangles whose
// own existence probability is below theta; every scored triangle has a
// value in [0, extension count].
struct NucleusScores {
  double theta = 0.0;
  std::vector<std::int32_t> score;

  int max_score() const {
    int m = 0;
    for (std::int32_t s : score) m = std::max(m, static_cast<int>(s));
    return m;
  }
};

// A mode-tagged maximal connected subgraph at level k: member triangles,
// the union of their edges, and the endpoint vertex set.
struct Nucleus {
  Mode mode = Mode::local;
  int k = 0;
  double theta = 0.0;
  std::vector<TriangleId> triangles;
  std::vector<EdgeId> edges;
  std::vector<VertexId> vertices;
};

// Tail probability source for the global decompositions: Monte-Carlo
// estimates in production, exact enumeration on oracle-sized inputs.
using TailEstimator =
    std::function<std::vector<double>(const SubgraphView&,
                                      std::span<const TriangleId>, int, Mode)>;

}  // namespace pnucleus
