#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "diffrf/forest.hpp"
#include "diffrf/matrix.hpp"
#include "diffrf/rng.hpp"

using namespace diffrf;

namespace {

DataMatrix random_matrix(std::size_t rows, std::size_t dims, std::uint64_t seed,
                         double lo = -5.0, double hi = 5.0) {
  DataMatrix m(rows, dims);
  Rng rng(seed);
  for (auto& v : m.v) v = rng.uniform(lo, hi);
  return m;
}

bool near(double a, double b, double tol = 1e-12) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

// ---------------------------------------------------------------------------
// Reference builder: the same construction contract, written independently
// against explicit per-node member lists with stable splits.

struct RefLeaf {
  std::vector<std::size_t> members;
  std::vector<double> centroid;
  double sigma = 0.0, fn = 0.0;
  std::size_t count = 0, depth = 0;
};

struct RefNode {
  int q = -1;
  double p = 0.0;
  int left = -1, right = -1, leaf = -1;
};

struct RefTree {
  std::vector<RefNode> nodes;
  std::vector<RefLeaf> leaves;
};

double ref_pooled_std(const DataMatrix& data, const std::vector<std::size_t>& rows) {
  std::size_t n = rows.size() * data.dims;
  if (n == 0) return 0.0;
  double mean = 0.0;
  for (std::size_t i : rows)
    for (std::size_t j = 0; j < data.dims; ++j) mean += data.at(i, j);
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (std::size_t i : rows)
    for (std::size_t j = 0; j < data.dims; ++j) {
      double e = data.at(i, j) - mean;
      ss += e * e;
    }
  return std::sqrt(ss / static_cast<double>(n));
}

double ref_entropy(const std::vector<double>& col, std::size_t bins) {
  double mn = *std::min_element(col.begin(), col.end());
  double mx = *std::max_element(col.begin(), col.end());
  if (mn == mx) return 0.0;
  std::vector<std::size_t> hist(bins, 0);
  for (double v : col) {
    auto b = static_cast<std::size_t>(static_cast<double>(bins) * (v - mn) / (mx - mn));
    ++hist[std::min(b, bins - 1)];
  }
  double h = 0.0;
  for (std::size_t c : hist) {
    if (!c) continue;
    double p = static_cast<double>(c) / static_cast<double>(col.size());
    h -= p * std::log2(p);
  }
  return h / std::log2(static_cast<double>(bins));
}

struct RefBuilder {
  const DataMatrix& data;
  std::size_t psi, h_max;
  Rng& rng;
  double sigma_floor;
  RefTree tree;

  RefBuilder(const DataMatrix& d, std::size_t psi_, std::size_t h_, Rng& r)
      : data(d), psi(psi_), h_max(h_), rng(r) {
    std::vector<std::size_t> all(d.rows);
    std::iota(all.begin(), all.end(), std::size_t{0});
    sigma_floor = 0.8 * std::max(ref_pooled_std(d, all), 1e-12);
    build(std::move(all), 0);
  }

  int make_leaf(std::vector<std::size_t> rows, std::size_t depth) {
    RefLeaf leaf;
    leaf.centroid.assign(data.dims, 0.0);
    for (std::size_t i : rows)
      for (std::size_t j = 0; j < data.dims; ++j) leaf.centroid[j] += data.at(i, j);
    for (auto& c : leaf.centroid) c /= static_cast<double>(rows.size());
    leaf.sigma = std::max(ref_pooled_std(data, rows), sigma_floor);
    leaf.fn = static_cast<double>(rows.size()) / static_cast<double>(psi);
    leaf.count = rows.size();
    leaf.depth = depth;
    leaf.members = std::move(rows);
    RefNode node;
    node.leaf = static_cast<int>(tree.leaves.size());
    tree.leaves.push_back(std::move(leaf));
    tree.nodes.push_back(node);
    return static_cast<int>(tree.nodes.size()) - 1;
  }

  int build(std::vector<std::size_t> rows, std::size_t depth) {
    std::size_t n = rows.size(), d = data.dims;
    std::vector<double> mins(d), maxs(d);
    for (std::size_t j = 0; j < d; ++j) mins[j] = maxs[j] = data.at(rows[0], j);
    for (std::size_t i : rows)
      for (std::size_t j = 0; j < d; ++j) {
        mins[j] = std::min(mins[j], data.at(i, j));
        maxs[j] = std::max(maxs[j], data.at(i, j));
      }
    bool splittable = false;
    for (std::size_t j = 0; j < d; ++j) splittable |= mins[j] < maxs[j];
    if (depth >= h_max || n <= 1 || !splittable) return make_leaf(std::move(rows), depth);

    std::vector<double> w(d, 0.0);
    double total = 0.0;
    if (n <= 10) {
      for (std::size_t j = 0; j < d; ++j) {
        w[j] = mins[j] < maxs[j] ? 1.0 : 0.0;
        total += w[j];
      }
    } else {
      auto bins = static_cast<std::size_t>(
          std::clamp<long>(std::lround(0.1 * static_cast<double>(n)), 5, 100));
      std::vector<double> col(n);
      for (std::size_t j = 0; j < d; ++j) {
        if (mins[j] == maxs[j]) continue;
        for (std::size_t i = 0; i < n; ++i) col[i] = data.at(rows[i], j);
        w[j] = std::max(1.0 - ref_entropy(col, bins), 0.2);
        total += w[j];
      }
    }

    double u = rng.uniform01() * total;
    std::size_t q = 0;
    for (std::size_t j = 0; j < d; ++j) {
      if (w[j] <= 0.0) continue;
      q = j;
      u -= w[j];
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
      if (!(mins[q] < p && p < maxs[q])) return make_leaf(std::move(rows), depth);
    }

    std::vector<std::size_t> left, right;
    for (std::size_t i : rows)
      (data.at(i, q) < p ? left : right).push_back(i);
    if (left.empty() || right.empty()) return make_leaf(std::move(rows), depth);

    int me = static_cast<int>(tree.nodes.size());
    RefNode node;
    node.q = static_cast<int>(q);
    node.p = p;
    tree.nodes.push_back(node);
    int l = build(std::move(left), depth + 1);
    int r = build(std::move(right), depth + 1);
    tree.nodes[me].left = l;
    tree.nodes[me].right = r;
    return me;
  }
};

void check_tree_matches(const Tree& got, const RefTree& want, const DataMatrix& sample) {
  REQUIRE(got.nodes.size() == want.nodes.size());
  for (std::size_t i = 0; i < got.nodes.size(); ++i) {
    const auto& g = got.nodes[i];
    const auto& w = want.nodes[i];
    CHECK(g.q == w.q);
    CHECK(g.left == w.left);
    CHECK(g.right == w.right);
    CHECK(g.leaf == w.leaf);
    if (w.q >= 0) CHECK(g.p == w.p);
  }
  REQUIRE(got.n_leaves() == want.leaves.size());
  for (std::size_t li = 0; li < want.leaves.size(); ++li) {
    const auto& leaf = want.leaves[li];
    CHECK(got.counts[li] == leaf.count);
    CHECK(got.depths[li] == leaf.depth);
    CHECK(got.fn[li] == leaf.fn);
    CHECK(near(got.sigma[li], leaf.sigma));
    for (std::size_t j = 0; j < sample.dims; ++j)
      CHECK(near(got.centroids[li * sample.dims + j], leaf.centroid[j]));
    for (std::size_t m : leaf.members)
      CHECK(locate_leaf(got, sample.row(m)) == li);
  }
}

bool forests_equal(const Forest& a, const Forest& b) {
  if (a.dims != b.dims || a.h_max != b.h_max || a.trees.size() != b.trees.size()) return false;
  for (std::size_t t = 0; t < a.trees.size(); ++t) {
    const Tree& x = a.trees[t];
    const Tree& y = b.trees[t];
    if (x.nodes.size() != y.nodes.size() || x.n_leaves() != y.n_leaves()) return false;
    for (std::size_t i = 0; i < x.nodes.size(); ++i) {
      if (x.nodes[i].q != y.nodes[i].q || x.nodes[i].p != y.nodes[i].p ||
          x.nodes[i].left != y.nodes[i].left || x.nodes[i].right != y.nodes[i].right ||
          x.nodes[i].leaf != y.nodes[i].leaf)
        return false;
    }
    if (x.centroids != y.centroids || x.sigma != y.sigma || x.fn != y.fn ||
        x.counts != y.counts || x.depths != y.depths)
      return false;
  }
  return true;
}

}  // namespace

TEST_CASE("normalized_entropy pinned values") {
  SUBCASE("uniform fill of all bins") {
    std::vector<double> col(100);
    for (int i = 0; i < 100; ++i) col[i] = static_cast<double>(i);
    CHECK(normalized_entropy(col.data(), col.size(), 10) == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("constant column") {
    std::vector<double> col(17, 3.5);
    CHECK(normalized_entropy(col.data(), col.size(), 8) == 0.0);
  }
  SUBCASE("two equal bins") {
    std::vector<double> col = {0, 0, 0, 0, 1, 1, 1, 1};
    CHECK(normalized_entropy(col.data(), col.size(), 2) == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("range is [0, 1]") {
    Rng rng(3);
    std::vector<double> col(200);
    for (auto& v : col) v = rng.normal();
    double e = normalized_entropy(col.data(), col.size(), 20);
    CHECK(e >= 0.0);
    CHECK(e <= 1.0);
  }
}

TEST_CASE("split_distribution contract") {
  SUBCASE("small samples are uniform") {
    DataMatrix m = random_matrix(8, 3, 21);
    auto w = split_distribution(m);
    REQUIRE(w.size() == 3);
    for (double x : w) CHECK(x == doctest::Approx(1.0 / 3).epsilon(1e-12));
  }
  SUBCASE("matches the entropy-weight arithmetic") {
    DataMatrix m = random_matrix(20, 2, 22);
    // concentrate dim 0 so its entropy is low
    for (std::size_t i = 0; i + 1 < m.rows; ++i) m.at(i, 0) = 0.0;
    m.at(m.rows - 1, 0) = 1.0;
    auto w = split_distribution(m);
    std::vector<double> c0(20), c1(20);
    for (std::size_t i = 0; i < 20; ++i) {
      c0[i] = m.at(i, 0);
      c1[i] = m.at(i, 1);
    }
    // bins = clamp(round(0.1 * 20), 5, 100) = 5
    double w0 = std::max(1.0 - normalized_entropy(c0.data(), 20, 5), 0.2);
    double w1 = std::max(1.0 - normalized_entropy(c1.data(), 20, 5), 0.2);
    CHECK(w[0] == doctest::Approx(w0 / (w0 + w1)).epsilon(1e-12));
    CHECK(w[1] == doctest::Approx(w1 / (w0 + w1)).epsilon(1e-12));
    CHECK(w[0] > w[1]);
    CHECK(w[0] + w[1] == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("both dims at the floor normalize to one half") {
    // two independent uniform dims, entropy ~1 for both -> floored at 0.2
    DataMatrix m = random_matrix(1000, 2, 23);
    auto w = split_distribution(m);
    CHECK(w[0] == doctest::Approx(0.5).epsilon(1e-9));
  }
  SUBCASE("constant dimension gets zero weight") {
    DataMatrix m = random_matrix(30, 2, 24);
    for (std::size_t i = 0; i < m.rows; ++i) m.at(i, 1) = 2.0;
    auto w = split_distribution(m);
    CHECK(w[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(w[1] == 0.0);
  }
}

TEST_CASE("max_height pins") {
  CHECK(max_height(256, 1.0) == 8);
  CHECK(max_height(256, 1.2) == 10);  // ceil(9.6)
  CHECK(max_height(1000, 1.0) == 10);
  CHECK(max_height(1, 1.0) == 1);
  CHECK(max_height(2, 1.0) == 1);
  CHECK(max_height(512, 0.5) == 5);
}

TEST_CASE("single instance becomes one leaf") {
  DataMatrix m(1, 3);
  m.at(0, 0) = 1.0;
  m.at(0, 1) = -2.0;
  m.at(0, 2) = 0.5;
  Rng rng(1);
  Tree t = build_tree(m, 4, 3, rng);
  REQUIRE(t.nodes.size() == 1);
  REQUIRE(t.n_leaves() == 1);
  CHECK(t.fn[0] == 0.25);
  CHECK(t.counts[0] == 1);
  CHECK(t.depths[0] == 0);
  CHECK(t.centroids[0] == 1.0);
  CHECK(t.centroids[1] == -2.0);
  CHECK(t.centroids[2] == 0.5);
}

TEST_CASE("identical rows become one full leaf") {
  DataMatrix m(8, 2);
  for (std::size_t i = 0; i < 8; ++i) {
    m.at(i, 0) = 3.0;
    m.at(i, 1) = -1.0;
  }
  Rng rng(2);
  Tree t = build_tree(m, 8, 5, rng);
  REQUIRE(t.n_leaves() == 1);
  CHECK(t.fn[0] == 1.0);
  CHECK(t.counts[0] == 8);
}

TEST_CASE("reference builder agreement") {
  SUBCASE("single trees across sizes") {
    struct Case {
      std::size_t rows, dims, h_max;
      std::uint64_t seed;
    };
    for (Case c : {Case{8, 2, 3, 101}, Case{8, 1, 3, 102}, Case{6, 2, 4, 103},
                   Case{40, 3, 6, 104}, Case{64, 2, 6, 105}, Case{200, 4, 8, 106}}) {
      DataMatrix sample = random_matrix(c.rows, c.dims, c.seed);
      Rng r1(c.seed * 7 + 1), r2(c.seed * 7 + 1);
      Tree got = build_tree(sample, c.rows, c.h_max, r1);
      RefBuilder ref(sample, c.rows, c.h_max, r2);
      check_tree_matches(got, ref.tree, sample);
    }
  }
  SUBCASE("whole forest including subsampling") {
    DataMatrix train = random_matrix(64, 2, 200);
    ForestConfig fc;
    fc.trees = 2;
    fc.sample_size = 8;
    fc.seed = 77;
    Forest forest = build_forest(train, fc);
    REQUIRE(forest.trees.size() == 2);
    for (std::size_t i = 0; i < fc.trees; ++i) {
      Rng rng(tree_stream_seed(fc.seed, i));
      auto idx = rng.sample_indices(train.rows, fc.sample_size);
      DataMatrix sub = take_rows(train, idx);
      RefBuilder ref(sub, fc.sample_size, forest.h_max, rng);
      check_tree_matches(forest.trees[i], ref.tree, sub);
    }
  }
}

TEST_CASE("forest structural invariants") {
  DataMatrix train = random_matrix(500, 3, 31);
  ForestConfig fc;
  fc.trees = 16;
  fc.sample_size = 64;
  fc.seed = 5;
  Forest f = build_forest(train, fc);
  CHECK(f.h_max == 6);
  for (const Tree& t : f.trees) {
    std::size_t count_sum = 0;
    double fn_sum = 0.0;
    for (std::size_t i = 0; i < t.n_leaves(); ++i) {
      count_sum += t.counts[i];
      fn_sum += t.fn[i];
      CHECK(t.depths[i] <= f.h_max);
      CHECK(t.sigma[i] > 0.0);
      CHECK(t.counts[i] >= 1);
    }
    CHECK(count_sum == fc.sample_size);
    CHECK(fn_sum == doctest::Approx(1.0).epsilon(1e-9));
    // children come after their parent, so the layout is acyclic
    for (std::size_t i = 0; i < t.nodes.size(); ++i) {
      if (t.nodes[i].leaf >= 0) continue;
      CHECK(t.nodes[i].left > static_cast<std::int32_t>(i));
      CHECK(t.nodes[i].right > static_cast<std::int32_t>(i));
    }
  }
}

TEST_CASE("build determinism and thread invariance") {
  DataMatrix train = random_matrix(300, 2, 41);
  ForestConfig fc;
  fc.trees = 8;
  fc.sample_size = 128;
  fc.seed = 9;
  fc.threads = 1;
  Forest a = build_forest(train, fc);
  Forest b = build_forest(train, fc);
  CHECK(forests_equal(a, b));
  fc.threads = 4;
  Forest c = build_forest(train, fc);
  CHECK(forests_equal(a, c));
}

TEST_CASE("build_forest validates its config") {
  DataMatrix train = random_matrix(32, 2, 51);
  ForestConfig fc;
  fc.trees = 4;
  fc.sample_size = 64;  // more than rows
  CHECK_THROWS_AS(build_forest(train, fc), ConfigError);
  fc.sample_size = 0;
  CHECK_THROWS_AS(build_forest(train, fc), ConfigError);
  fc.sample_size = 16;
  fc.trees = 0;
  CHECK_THROWS_AS(build_forest(train, fc), ConfigError);
  fc.trees = 4;
  fc.alpha = 0.0;
  CHECK_THROWS_AS(build_forest(train, fc), ConfigError);
  fc.alpha = 1.0;
  fc.height_factor = 0.0;
  CHECK_THROWS_AS(build_forest(train, fc), ConfigError);
  fc.height_factor = 2.5;
  CHECK_THROWS_AS(build_forest(train, fc), ConfigError);
  fc.height_factor = 2.0;
  CHECK_NOTHROW(build_forest(train, fc));
}

TEST_CASE("locate_leaf follows the comparison contract") {
  // hand-built stump: split on dim 0 at 0.5
  Tree t;
  t.nodes.resize(3);
  t.nodes[0].q = 0;
  t.nodes[0].p = 0.5;
  t.nodes[0].left = 1;
  t.nodes[0].right = 2;
  t.nodes[1].leaf = 0;
  t.nodes[2].leaf = 1;
  t.centroids = {0.0, 1.0};
  t.sigma = {1.0, 1.0};
  t.fn = {0.5, 0.5};
  t.counts = {1, 1};
  t.depths = {1, 1};
  double left_pt[1] = {0.2};
  double right_pt[1] = {0.5};  // boundary goes right
  CHECK(locate_leaf(t, left_pt) == 0);
  CHECK(locate_leaf(t, right_pt) == 1);
}

TEST_CASE("leaf_population_stats") {
  // identical rows: every tree is a single leaf holding psi instances
  DataMatrix m(40, 2);
  for (std::size_t i = 0; i < m.rows; ++i) {
    m.at(i, 0) = 1.0;
    m.at(i, 1) = 2.0;
  }
  ForestConfig fc;
  fc.trees = 4;
  fc.sample_size = 16;
  fc.seed = 3;
  Forest f = build_forest(m, fc);
  PopulationStats stats = leaf_population_stats(f);
  CHECK(stats.mean_leaf_count == doctest::Approx(16.0));
  REQUIRE(stats.depth_counts.size() == 1);
  CHECK(stats.depth_counts[0] == 4);
}
