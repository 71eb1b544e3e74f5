#pragma once

#include <cstdint>
#include <vector>

#include "diffrf/matrix.hpp"
#include "diffrf/rng.hpp"
#include "diffrf/scoring.hpp"

namespace diffrf {

// Plain Isolation Forest baseline: uniform split dimension among
// non-constant ones, uniform split value, h_max = ceil(log2 psi).
struct IsoTree {
  struct Node {
    std::int32_t q = -1;
    double p = 0.0;
    std::int32_t left = -1;
    std::int32_t right = -1;
    std::int32_t size = 0;    // leaf sample size, > 0 iff leaf
    std::int32_t depth = 0;   // leaf depth
  };
  std::vector<Node> nodes;
};

struct IsoForest {
  std::size_t dims = 0;
  std::size_t psi = 0;
  std::size_t h_max = 0;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::vector<IsoTree> trees;
};

// Average unsuccessful-search path length; c(1) = 0, c(2) = 1,
// c(m) = 2 (ln(m-1) + gamma) - 2 (m-1)/m otherwise.
double iforest_path_norm(std::size_t m);

IsoForest build_iforest(const DataMatrix& train, std::size_t t, std::size_t psi,
                        std::uint64_t seed, unsigned threads = 1);

// s(x) = 2^(-E[h(x)] / c(psi)) in (0, 1], higher = more anomalous; path
// length at a size-m leaf is extended by c(m).
ScoreVector iforest_score(const IsoForest& forest, const DataMatrix& X);

}  // namespace diffrf
