#pragma once

#include <cstdint>
#include <vector>

#include "diffrf/matrix.hpp"
#include "diffrf/rng.hpp"

namespace diffrf {

struct ForestConfig {
  std::size_t trees = 128;
  std::size_t sample_size = 256;  // psi
  double alpha = 1.0;
  double height_factor = 1.0;     // h_max = ceil(height_factor * log2(psi))
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

// One randomized partitioning tree. Nodes live in a flat array; leaf payloads
// live in parallel arrays indexed by Node::leaf.
struct Tree {
  struct Node {
    std::int32_t q = -1;     // split dimension
    double p = 0.0;          // split value; x[q] < p goes left
    std::int32_t left = -1;
    std::int32_t right = -1;
    std::int32_t leaf = -1;  // >= 0 iff leaf node
  };
  std::vector<Node> nodes;            // nodes[0] is the root
  std::vector<double> centroids;      // n_leaves x d, flat
  std::vector<double> sigma;          // pooled deviation per leaf (see docs)
  std::vector<double> fn;             // train visit frequency, count / psi
  std::vector<std::uint32_t> counts;  // training instances per leaf
  std::vector<std::uint32_t> depths;  // leaf depth

  std::size_t n_leaves() const { return fn.size(); }
};

struct Forest {
  std::size_t dims = 0;
  std::size_t h_max = 0;
  ForestConfig config;
  std::vector<Tree> trees;
};

// Empirical entropy of a histogram over bin_count uniform-width bins spanning
// [min, max] of the column, normalized to [0, 1] by log2(bin_count). The max
// value goes to the top bin; empty bins contribute nothing; a constant column
// yields 0.
double normalized_entropy(const double* column, std::size_t n, std::size_t bin_count);

// Per-dimension split probabilities for a node sample. Samples of size <= 10
// get the uniform distribution. Larger samples weight each dimension by
// max(1 - entropy, 0.2) with bin_count = clamp(round(0.1 * n), 5, 100);
// constant dimensions get weight 0 before normalization.
std::vector<double> split_distribution(const DataMatrix& sample);

// h_max for a given sample size and height factor, at least 1.
std::size_t max_height(std::size_t psi, double height_factor);

// Seed of the random stream owned by tree `index` within a forest.
std::uint64_t tree_stream_seed(std::uint64_t forest_seed, std::size_t index);

// Builds a single tree from `sample`; f_n uses the given psi as denominator.
// Consumes `rng` exactly like the forest builder does after subsampling.
Tree build_tree(const DataMatrix& sample, std::size_t psi, std::size_t h_max, Rng& rng);

// t trees, each on an independent without-replacement subsample of size psi.
// Bit-identical output for identical (data, config, seed), regardless of
// config.threads.
Forest build_forest(const DataMatrix& train, const ForestConfig& config);

// Index of the leaf x falls in (x[q] < p goes left).
std::size_t locate_leaf(const Tree& tree, const double* x);

struct PopulationStats {
  double mean_leaf_count = 0.0;           // plain mean over all leaves
  std::vector<std::size_t> depth_counts;  // leaves per depth
};
PopulationStats leaf_population_stats(const Forest& forest);

}  // namespace diffrf
