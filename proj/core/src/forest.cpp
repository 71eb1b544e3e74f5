#include "diffrf/forest.hpp"

#include <algorithm>
#include <cmath>

#include "diffrf/threading.hpp"

namespace diffrf {

namespace {

// Pooled standard deviation over every entry of the selected rows, i.e. the
// spread of the flattened submatrix around its grand mean. Unlike a
// per-dimension deviation this keeps the between-dimension spread, so leaves
// far from the origin in one coordinate still get a deviation on the scale of
// the data rather than of the leaf's residual noise.
double pooled_std(const DataMatrix& m, const std::vector<std::size_t>& idx,
                  std::size_t lo, std::size_t hi) {
  std::size_t n = (hi - lo) * m.dims;
  if (n == 0) return 0.0;
  double mean = 0.0;
  for (std::size_t i = lo; i < hi; ++i) {
    const double* r = m.row(idx[i]);
    for (std::size_t j = 0; j < m.dims; ++j) mean += r[j];
  }
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (std::size_t i = lo; i < hi; ++i) {
    const double* r = m.row(idx[i]);
    for (std::size_t j = 0; j < m.dims; ++j) {
      double e = r[j] - mean;
      ss += e * e;
    }
  }
  return std::sqrt(ss / static_cast<double>(n));
}

constexpr double kSigmaFloorRel = 0.8;   // leaf sigma >= rel * tree pooled std
constexpr double kSigmaFloorAbs = 1e-12; // tree pooled std floor

struct TreeBuilder {
  const DataMatrix& data;
  std::size_t psi;
  std::size_t h_max;
  Rng& rng;
  double sigma_floor = 0.0;
  Tree out;
  std::vector<std::size_t> idx;
  std::vector<double> mins, maxs, weights, scratch;

  TreeBuilder(const DataMatrix& d, std::size_t psi_, std::size_t h_, Rng& r)
      : data(d), psi(psi_), h_max(h_), rng(r) {
    idx.resize(d.rows);
    for (std::size_t i = 0; i < d.rows; ++i) idx[i] = i;
    mins.resize(d.dims);
    maxs.resize(d.dims);
    weights.resize(d.dims);
    sigma_floor = kSigmaFloorRel * std::max(pooled_std(d, idx, 0, d.rows), kSigmaFloorAbs);
    build(0, d.rows, 0);
  }

  std::int32_t make_leaf(std::size_t lo, std::size_t hi, std::size_t depth) {
    std::size_t n = hi - lo, d = data.dims;
    std::size_t li = out.n_leaves();
    out.centroids.resize((li + 1) * d, 0.0);
    double* c = out.centroids.data() + li * d;
    for (std::size_t i = lo; i < hi; ++i) {
      const double* r = data.row(idx[i]);
      for (std::size_t j = 0; j < d; ++j) c[j] += r[j];
    }
    for (std::size_t j = 0; j < d; ++j) c[j] /= static_cast<double>(n);
    out.sigma.push_back(std::max(pooled_std(data, idx, lo, hi), sigma_floor));
    out.fn.push_back(static_cast<double>(n) / static_cast<double>(psi));
    out.counts.push_back(static_cast<std::uint32_t>(n));
    out.depths.push_back(static_cast<std::uint32_t>(depth));
    std::int32_t me = static_cast<std::int32_t>(out.nodes.size());
    Tree::Node node;
    node.leaf = static_cast<std::int32_t>(li);
    out.nodes.push_back(node);
    return me;
  }

  std::int32_t build(std::size_t lo, std::size_t hi, std::size_t depth) {
    std::size_t n = hi - lo, d = data.dims;
    for (std::size_t j = 0; j < d; ++j) {
      mins[j] = maxs[j] = data.at(idx[lo], j);
    }
    for (std::size_t i = lo + 1; i < hi; ++i) {
      const double* r = data.row(idx[i]);
      for (std::size_t j = 0; j < d; ++j) {
        mins[j] = std::min(mins[j], r[j]);
        maxs[j] = std::max(maxs[j], r[j]);
      }
    }
    bool splittable = false;
    for (std::size_t j = 0; j < d; ++j) splittable |= mins[j] < maxs[j];
    if (depth >= h_max || n <= 1 || !splittable) return make_leaf(lo, hi, depth);

    double total = 0.0;
    if (n <= 10) {
      for (std::size_t j = 0; j < d; ++j) {
        weights[j] = mins[j] < maxs[j] ? 1.0 : 0.0;
        total += weights[j];
      }
    } else {
      std::size_t bins = static_cast<std::size_t>(
          std::clamp<long>(std::lround(0.1 * static_cast<double>(n)), 5, 100));
      scratch.resize(n);
      for (std::size_t j = 0; j < d; ++j) {
        if (mins[j] == maxs[j]) {
          weights[j] = 0.0;
          continue;
        }
        for (std::size_t i = lo; i < hi; ++i) scratch[i - lo] = data.at(idx[i], j);
        double ee = normalized_entropy(scratch.data(), n, bins);
        weights[j] = std::max(1.0 - ee, 0.2);
        total += weights[j];
      }
    }

    double u = rng.uniform01() * total;
    std::size_t q = 0;
    for (std::size_t j = 0; j < d; ++j) {
      if (weights[j] <= 0.0) continue;
      q = j;
      u -= weights[j];
      if (u < 0.0) break;
    }

    double p = 0.0;
    bool ok = false;
    for (int tries = 0; tries < 32 && !ok; ++tries) {
      p = rng.uniform(mins[q], maxs[q]);
      ok = mins[q] < p && p < maxs[q];
    }
    if (!ok) {
      p = mins[q] + (maxs[q] - mins[q]) / 2.0;
      if (!(mins[q] < p && p < maxs[q])) return make_leaf(lo, hi, depth);
    }

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

double normalized_entropy(const double* column, std::size_t n, std::size_t bin_count) {
  double mn = column[0], mx = column[0];
  for (std::size_t i = 1; i < n; ++i) {
    mn = std::min(mn, column[i]);
    mx = std::max(mx, column[i]);
  }
  if (mn == mx) return 0.0;
  std::vector<std::size_t> hist(bin_count, 0);
  double width = mx - mn;
  for (std::size_t i = 0; i < n; ++i) {
    auto b = static_cast<std::size_t>(static_cast<double>(bin_count) * (column[i] - mn) / width);
    ++hist[std::min(b, bin_count - 1)];
  }
  double h = 0.0;
  for (std::size_t b : hist) {
    if (b == 0) continue;
    double pr = static_cast<double>(b) / static_cast<double>(n);
    h -= pr * std::log2(pr);
  }
  return h / std::log2(static_cast<double>(bin_count));
}

std::vector<double> split_distribution(const DataMatrix& sample) {
  if (sample.rows == 0) throw DataError("split_distribution: empty sample");
  std::size_t d = sample.dims, n = sample.rows;
  std::vector<double> w(d, 0.0);
  if (n <= 10) {
    for (auto& x : w) x = 1.0 / static_cast<double>(d);
    return w;
  }
  std::size_t bins = static_cast<std::size_t>(
      std::clamp<long>(std::lround(0.1 * static_cast<double>(n)), 5, 100));
  std::vector<double> col(n);
  double total = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    double mn = sample.at(0, j), mx = mn;
    for (std::size_t i = 1; i < n; ++i) {
      mn = std::min(mn, sample.at(i, j));
      mx = std::max(mx, sample.at(i, j));
    }
    if (mn == mx) continue;
    for (std::size_t i = 0; i < n; ++i) col[i] = sample.at(i, j);
    w[j] = std::max(1.0 - normalized_entropy(col.data(), n, bins), 0.2);
    total += w[j];
  }
  if (total == 0.0) {
    for (auto& x : w) x = 1.0 / static_cast<double>(d);
    return w;
  }
  for (auto& x : w) x /= total;
  return w;
}

std::size_t max_height(std::size_t psi, double height_factor) {
  double h = std::ceil(height_factor * std::log2(static_cast<double>(psi)));
  return std::max<std::size_t>(1, static_cast<std::size_t>(h));
}

std::uint64_t tree_stream_seed(std::uint64_t forest_seed, std::size_t index) {
  return splitmix64(forest_seed) + static_cast<std::uint64_t>(index);
}

Tree build_tree(const DataMatrix& sample, std::size_t psi, std::size_t h_max, Rng& rng) {
  if (sample.rows == 0) throw DataError("build_tree: empty sample");
  TreeBuilder b(sample, psi, h_max, rng);
  return std::move(b.out);
}

Forest build_forest(const DataMatrix& train, const ForestConfig& config) {
  if (config.trees < 1) throw ConfigError("build_forest: tree count must be >= 1");
  if (config.sample_size < 1 || config.sample_size > train.rows)
    throw ConfigError("build_forest: sample_size must be in [1, rows]");
  if (!(config.alpha > 0.0)) throw ConfigError("build_forest: alpha must be > 0");
  if (!(config.height_factor > 0.0) || config.height_factor > 2.0)
    throw ConfigError("build_forest: height_factor must be in (0, 2]");
  Forest f;
  f.dims = train.dims;
  f.config = config;
  f.h_max = max_height(config.sample_size, config.height_factor);
  f.trees.resize(config.trees);
  parallel_for(config.trees, config.threads, [&](std::size_t i) {
    Rng rng(tree_stream_seed(config.seed, i));
    auto idx = rng.sample_indices(train.rows, config.sample_size);
    DataMatrix sub = take_rows(train, idx);
    f.trees[i] = build_tree(sub, config.sample_size, f.h_max, rng);
  });
  return f;
}

std::size_t locate_leaf(const Tree& tree, const double* x) {
  std::int32_t n = 0;
  while (tree.nodes[n].leaf < 0) {
    const auto& node = tree.nodes[n];
    n = x[node.q] < node.p ? node.left : node.right;
  }
  return static_cast<std::size_t>(tree.nodes[n].leaf);
}

PopulationStats leaf_population_stats(const Forest& forest) {
  PopulationStats s;
  std::size_t total = 0, leaves = 0;
  for (const auto& t : forest.trees) {
    for (std::size_t i = 0; i < t.n_leaves(); ++i) {
      total += t.counts[i];
      std::size_t dep = t.depths[i];
      if (s.depth_counts.size() <= dep) s.depth_counts.resize(dep + 1, 0);
      ++s.depth_counts[dep];
    }
    leaves += t.n_leaves();
  }
  s.mean_leaf_count = leaves == 0 ? 0.0 : static_cast<double>(total) / static_cast<double>(leaves);
  return s;
}

}  // namespace diffrf
