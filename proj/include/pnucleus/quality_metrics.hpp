#pragma once

#include "pnucleus/graph.hpp"

namespace pnucleus {

// Probabilistic density: sum of edge probabilities over the number of vertex
// pairs. Needs at least two vertices.
double pd(const SubgraphView& h);

// Probabilistic clustering coefficient: 3 * sum over triangles of the
// product of their edge probabilities, over the sum over wedges (unordered
// neighbor pairs around a center) of the product of the two wedge edge
// probabilities. Needs at least one wedge.
double pcc(const SubgraphView& h);

}  // namespace pnucleus
