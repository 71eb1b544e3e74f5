#pragma once

#include <string>
#include <vector>

#include "diffrf/forest.hpp"
#include "diffrf/matrix.hpp"

namespace diffrf {

struct ScoreVector {
  std::vector<double> scores;
  std::string kind;  // point-wise | collective | frequency | iforest
};

// Weighted squared distance of x to the leaf centroid,
// delta = (1/d) sum_j ((x_j - M_j) / sigma)^2 with the leaf's pooled sigma.
double leaf_distance(const Tree& tree, std::size_t leaf, const double* x, std::size_t dims);

// Per-tree similarity 2^(-alpha * delta) in (0, 1]; underflows to 0 silently.
double tree_similarity(const Tree& tree, const double* x, std::size_t dims, double alpha);

// pwas(x) = -mean over trees of 2^(-alpha * delta_T(x)), in [-1, 0].
// -1 means x sits at every tree's leaf centroid; near 0 means far from all.
ScoreVector pointwise_score(const Forest& forest, const DataMatrix& X);

// All three scores from one routing pass. The batch X is the collective
// context: per tree, pass 1 routes all of X and counts leaf visits giving
// f_X = |S_X| / |X|; pass 2 emits per-instance terms. Per-tree ratio
// nu = f_n / f_X is uncapped. cas(x) = -mean_T delta_T(x) * nu_T(x);
// frequency score = -mean_T nu_T(x).
struct BatchScores {
  ScoreVector pointwise;
  ScoreVector frequency;
  ScoreVector collective;
};
BatchScores score_batch(const Forest& forest, const DataMatrix& X);

ScoreVector frequency_score(const Forest& forest, const DataMatrix& X);
ScoreVector collective_scores(const Forest& forest, const DataMatrix& X);

}  // namespace diffrf
