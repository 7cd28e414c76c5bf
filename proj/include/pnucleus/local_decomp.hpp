#pragma once

#include "pnucleus/nucleus.hpp"
#include "pnucleus/support_model.hpp"

namespace pnucleus {

// exact runs the dynamic program everywhere; hybrid picks an approximation
// per triangle (and per update) through select_method.
enum class ScoreBackend { exact, hybrid };

const char* to_string(ScoreBackend b);

// Peeling decomposition: every triangle with existence probability >= theta
// receives its nucleusness; the rest stay at kNoScore. Initialization is
// parallel over triangles, the peel itself is sequential and deterministic
// (minimum bound first, lowest triangle id on ties).
NucleusScores compute_scores(const TriangleIndex& idx, double theta,
                             const Hyperparams& hp, ScoreBackend backend,
                             int threads = 1);

// Connected components of triangles scoring >= k, linked through 4-cliques
// whose four triangles all score >= k. Requires k >= 1 (level-0 nuclei are
// not materialized; raw scores expose level 0).
std::vector<Nucleus> assemble_nuclei(const TriangleIndex& idx,
                                     const NucleusScores& scores, int k);

}  // namespace pnucleus
