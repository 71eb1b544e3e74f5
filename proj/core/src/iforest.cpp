#include "diffrf/iforest.hpp"

#include <algorithm>
#include <cmath>

#include "diffrf/forest.hpp"
#include "diffrf/threading.hpp"

namespace diffrf {

namespace {

constexpr double kEulerGamma = 0.5772156649;

struct IsoBuilder {
  const DataMatrix& data;
  std::size_t h_max;
  Rng& rng;
  IsoTree out;
  std::vector<std::size_t> idx;
  std::vector<double> mins, maxs;

  IsoBuilder(const DataMatrix& d, std::size_t h, Rng& r) : data(d), h_max(h), rng(r) {
    idx.resize(d.rows);
    for (std::size_t i = 0; i < d.rows; ++i) idx[i] = i;
    mins.resize(d.dims);
    maxs.resize(d.dims);
    build(0, d.rows, 0);
  }

  std::int32_t make_leaf(std::size_t lo, std::size_t hi, std::size_t depth) {
    std::int32_t me = static_cast<std::int32_t>(out.nodes.size());
    IsoTree::Node node;
    node.size = static_cast<std::int32_t>(hi - lo);
    node.depth = static_cast<std::int32_t>(depth);
    out.nodes.push_back(node);
    return me;
  }

  std::int32_t build(std::size_t lo, std::size_t hi, std::size_t depth) {
    std::size_t n = hi - lo, d = data.dims;
    for (std::size_t j = 0; j < d; ++j) mins[j] = maxs[j] = data.at(idx[lo], j);
    for (std::size_t i = lo + 1; i < hi; ++i) {
      const double* r = data.row(idx[i]);
      for (std::size_t j = 0; j < d; ++j) {
        mins[j] = std::min(mins[j], r[j]);
        maxs[j] = std::max(maxs[j], r[j]);
      }
    }
    std::size_t live = 0;
    for (std::size_t j = 0; j < d; ++j) live += mins[j] < maxs[j] ? 1 : 0;
    if (depth >= h_max || n <= 1 || live == 0) return make_leaf(lo, hi, depth);

    std::size_t pick = static_cast<std::size_t>(rng.bounded(live));
    std::size_t q = 0;
    for (std::size_t j = 0; j < d; ++j) {
      if (mins[j] >= maxs[j]) continue;
      if (pick == 0) {
        q = j;
        break;
      }
      --pick;
    }
    double p = 0.0;
    bool ok = false;
    for (int tries = 0; tries < 32 && !ok; ++tries) {
      p = rng.uniform(mins[q], maxs[q]);
      ok = mins[q] < p && p < maxs[q];
    }
    if (!ok) return make_leaf(lo, hi, depth);

    auto it = std::partition(idx.begin() + lo, idx.begin() + hi,
                             [&](std::size_t i) { return data.at(i, q) < p; });
    std::size_t mid = static_cast<std::size_t>(it - idx.begin());
    if (mid == lo || mid == hi) return make_leaf(lo, hi, depth);

    std::int32_t me = static_cast<std::int32_t>(out.nodes.size());
    out.nodes.emplace_back();
    out.nodes[me].q = static_cast<std::int32_t>(q);
    out.nodes[me].p = p;
    std::int32_t l = build(lo, mid, depth + 1);
    std::int32_t r = build(mid, hi, depth + 1);
    out.nodes[me].left = l;
    out.nodes[me].right = r;
    return me;
  }
};

}  // namespace

double iforest_path_norm(std::size_t m) {
  if (m <= 1) return 0.0;
  if (m == 2) return 1.0;
  double k = static_cast<double>(m - 1);
  return 2.0 * (std::log(k) + kEulerGamma) - 2.0 * k / static_cast<double>(m);
}

IsoForest build_iforest(const DataMatrix& train, std::size_t t, std::size_t psi,
                        std::uint64_t seed, unsigned threads) {
  if (t < 1) throw ConfigError("build_iforest: tree count must be >= 1");
  if (psi < 1 || psi > train.rows)
    throw ConfigError("build_iforest: sample_size must be in [1, rows]");
  IsoForest f;
  f.dims = train.dims;
  f.psi = psi;
  f.h_max = max_height(psi, 1.0);
  f.seed = seed;
  f.threads = threads;
  f.trees.resize(t);
  parallel_for(t, threads, [&](std::size_t i) {
    Rng rng(tree_stream_seed(seed, i));
    auto idx = rng.sample_indices(train.rows, psi);
    DataMatrix sub = take_rows(train, idx);
    IsoBuilder b(sub, f.h_max, rng);
    f.trees[i] = std::move(b.out);
  });
  return f;
}

ScoreVector iforest_score(const IsoForest& forest, const DataMatrix& X) {
  if (X.rows > 0 && X.dims != forest.dims) throw DataError("iforest_score: dimension mismatch");
  ScoreVector out;
  out.kind = "iforest";
  out.scores.resize(X.rows);
  double t = static_cast<double>(forest.trees.size());
  double norm = iforest_path_norm(forest.psi);
  if (norm <= 0.0) norm = 1.0;  // psi = 1 degenerate case
  parallel_for(X.rows, forest.threads, [&](std::size_t i) {
    const double* x = X.row(i);
    double acc = 0.0;
    for (const auto& tree : forest.trees) {
      std::int32_t n = 0;
      while (tree.nodes[n].size == 0) {
        const auto& node = tree.nodes[n];
        n = x[node.q] < node.p ? node.left : node.right;
      }
      acc += tree.nodes[n].depth + iforest_path_norm(static_cast<std::size_t>(tree.nodes[n].size));
    }
    out.scores[i] = std::exp2(-(acc / t) / norm);
  });
  return out;
}

}  // namespace diffrf
