#include "diffrf/scoring.hpp"

#include <cmath>

#include "diffrf/threading.hpp"

namespace diffrf {

double leaf_distance(const Tree& tree, std::size_t leaf, const double* x, std::size_t dims) {
  const double* c = tree.centroids.data() + leaf * dims;
  double inv = 1.0 / tree.sigma[leaf];
  double acc = 0.0;
  for (std::size_t j = 0; j < dims; ++j) {
    double e = (x[j] - c[j]) * inv;
    acc += e * e;
  }
  return acc / static_cast<double>(dims);
}

double tree_similarity(const Tree& tree, const double* x, std::size_t dims, double alpha) {
  std::size_t leaf = locate_leaf(tree, x);
  return std::exp2(-alpha * leaf_distance(tree, leaf, x, dims));
}

ScoreVector pointwise_score(const Forest& forest, const DataMatrix& X) {
  if (X.rows > 0 && X.dims != forest.dims) throw DataError("pointwise_score: dimension mismatch");
  ScoreVector out;
  out.kind = "point-wise";
  out.scores.resize(X.rows);
  double t = static_cast<double>(forest.trees.size());
  // Instance-parallel: every instance accumulates its tree terms in fixed
  // tree order, so results are independent of the thread count.
  parallel_for(X.rows, forest.config.threads, [&](std::size_t i) {
    const double* x = X.row(i);
    double acc = 0.0;
    for (const auto& tree : forest.trees)
      acc += tree_similarity(tree, x, forest.dims, forest.config.alpha);
    out.scores[i] = -acc / t;
  });
  return out;
}

BatchScores score_batch(const Forest& forest, const DataMatrix& X) {
  if (X.rows == 0) throw DataError("score_batch: empty batch");
  if (X.dims != forest.dims) throw DataError("score_batch: dimension mismatch");
  std::size_t n = X.rows, t = forest.trees.size();

  // Pass 1 (tree-parallel): leaf index per (tree, instance) and visit counts.
  std::vector<std::vector<std::int32_t>> leaf_of(t);
  std::vector<std::vector<double>> fx(t);
  parallel_for(t, forest.config.threads, [&](std::size_t ti) {
    const Tree& tree = forest.trees[ti];
    leaf_of[ti].resize(n);
    std::vector<std::uint32_t> visits(tree.n_leaves(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t leaf = locate_leaf(tree, X.row(i));
      leaf_of[ti][i] = static_cast<std::int32_t>(leaf);
      ++visits[leaf];
    }
    fx[ti].resize(tree.n_leaves(), 0.0);
    for (std::size_t l = 0; l < tree.n_leaves(); ++l)
      fx[ti][l] = static_cast<double>(visits[l]) / static_cast<double>(n);
  });

  BatchScores out;
  out.pointwise.kind = "point-wise";
  out.frequency.kind = "frequency";
  out.collective.kind = "collective";
  out.pointwise.scores.resize(n);
  out.frequency.scores.resize(n);
  out.collective.scores.resize(n);
  double tc = static_cast<double>(t);
  double alpha = forest.config.alpha;

  // Pass 2 (instance-parallel, fixed tree order).
  parallel_for(n, forest.config.threads, [&](std::size_t i) {
    const double* x = X.row(i);
    double sum_sim = 0.0, sum_nu = 0.0, sum_cas = 0.0;
    for (std::size_t ti = 0; ti < t; ++ti) {
      const Tree& tree = forest.trees[ti];
      auto leaf = static_cast<std::size_t>(leaf_of[ti][i]);
      double sim = std::exp2(-alpha * leaf_distance(tree, leaf, x, forest.dims));
      double nu = tree.fn[leaf] / fx[ti][leaf];
      sum_sim += sim;
      sum_nu += nu;
      sum_cas += sim * nu;
    }
    out.pointwise.scores[i] = -sum_sim / tc;
    out.frequency.scores[i] = -sum_nu / tc;
    out.collective.scores[i] = -sum_cas / tc;
  });
  return out;
}

ScoreVector frequency_score(const Forest& forest, const DataMatrix& X) {
  return score_batch(forest, X).frequency;
}

ScoreVector collective_scores(const Forest& forest, const DataMatrix& X) {
  return score_batch(forest, X).collective;
}

}  // namespace diffrf
