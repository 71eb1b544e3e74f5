#include "diffrf/tuning.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "diffrf/scoring.hpp"
#include "diffrf/threading.hpp"

namespace diffrf {

const std::vector<double> kDefaultAlphaGrid = {1e-12, 1e-9, 1e-6, 1e-4, 1e-3, 1e-2, 0.05,
                                               0.1,   0.5,  1.0,  2.0,  5.0,  10.0, 100.0};

double distribution_distance(const std::vector<double>& test_scores,
                             const std::vector<double>& train_scores) {
  if (test_scores.empty() || train_scores.empty())
    throw DataError("distribution_distance: empty score sample");
  std::vector<double> sorted_train(train_scores);
  std::sort(sorted_train.begin(), sorted_train.end());
  const std::size_t n = sorted_train.size();
  double total = 0.0;
  for (std::size_t i = 95; i <= 99; ++i) {
    std::size_t rank = (i * n + 99) / 100;  // ceil(i n / 100), 1-indexed
    double threshold = sorted_train[rank - 1];
    std::size_t above = 0;
    for (double s : test_scores) above += s > threshold ? 1 : 0;
    double pct = 100.0 * static_cast<double>(above) / static_cast<double>(test_scores.size());
    total += std::abs(pct - static_cast<double>(100 - i));
  }
  return total;
}

std::vector<std::vector<std::size_t>> shuffled_folds(std::size_t rows, std::size_t fold_count,
                                                     Rng& rng) {
  if (fold_count == 0 || fold_count > rows)
    throw ConfigError("shuffled_folds: fold count must be in [1, rows]");
  auto perm = rng.sample_indices(rows, rows);
  std::vector<std::vector<std::size_t>> folds(fold_count);
  std::size_t base = rows / fold_count, extra = rows % fold_count, pos = 0;
  for (std::size_t f = 0; f < fold_count; ++f) {
    std::size_t len = base + (f < extra ? 1 : 0);
    folds[f].assign(perm.begin() + static_cast<std::ptrdiff_t>(pos),
                    perm.begin() + static_cast<std::ptrdiff_t>(pos + len));
    pos += len;
  }
  return folds;
}

std::vector<std::vector<std::size_t>> partition(std::size_t rows, std::size_t psi, Rng& rng) {
  if (psi == 0) throw ConfigError("partition: sample_size must be positive");
  if (rows <= psi) throw ConfigError("partition: need more rows than sample_size");
  return shuffled_folds(rows, rows / psi, rng);
}

namespace {

// rows x trees matrix of leaf distances, row-major.
std::vector<double> distance_matrix(const Forest& forest, const DataMatrix& X,
                                    unsigned threads) {
  const std::size_t t = forest.trees.size();
  std::vector<double> dist(X.rows * t);
  parallel_for(X.rows, threads, [&](std::size_t i) {
    const double* x = X.row(i);
    for (std::size_t k = 0; k < t; ++k) {
      const Tree& tree = forest.trees[k];
      std::size_t leaf = locate_leaf(tree, x);
      dist[i * t + k] = leaf_distance(tree, leaf, x, forest.dims);
    }
  });
  return dist;
}

// pwas at a given alpha from a precomputed distance matrix.
std::vector<double> pointwise_from_distances(const std::vector<double>& dist, std::size_t rows,
                                             std::size_t trees, double alpha) {
  std::vector<double> out(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    const double* d = dist.data() + i * trees;
    double acc = 0.0;
    for (std::size_t k = 0; k < trees; ++k) acc += std::exp2(-alpha * d[k]);
    out[i] = -acc / static_cast<double>(trees);
  }
  return out;
}

}  // namespace

AlphaReport tune_alpha(const DataMatrix& X, const TuneConfig& config) {
  const std::vector<double>& grid = config.grid.empty() ? kDefaultAlphaGrid : config.grid;
  if (grid.empty()) throw ConfigError("tune_alpha: empty candidate grid");
  for (double a : grid)
    if (!(a > 0.0)) throw ConfigError("tune_alpha: candidates must be positive");
  if (config.iterations < 1) throw ConfigError("tune_alpha: iterations must be >= 1");
  if (config.sample_size == 0) throw ConfigError("tune_alpha: sample_size must be positive");
  if (X.rows <= config.sample_size)
    throw ConfigError("tune_alpha: need more rows than sample_size");

  const std::size_t fold_count = std::max<std::size_t>(2, X.rows / config.sample_size);
  Rng master(config.seed ^ 0x74756e65616c7068ULL);

  AlphaReport report;
  report.grid = grid;
  std::vector<double> acc(grid.size(), 0.0);

  for (std::size_t it = 0; it < config.iterations; ++it) {
    auto folds = shuffled_folds(X.rows, fold_count, master);
    for (const auto& held : folds) {
      std::uint64_t forest_seed = master.bits();
      std::vector<char> held_mask(X.rows, 0);
      for (std::size_t i : held) held_mask[i] = 1;
      std::vector<std::size_t> rest;
      rest.reserve(X.rows - held.size());
      for (std::size_t i = 0; i < X.rows; ++i)
        if (!held_mask[i]) rest.push_back(i);

      DataMatrix train = take_rows(X, rest);
      DataMatrix held_out = take_rows(X, held);

      ForestConfig fc;
      fc.trees = config.trees;
      fc.sample_size = std::min(config.sample_size, train.rows);
      fc.alpha = 1.0;  // distances only; alpha enters below
      fc.height_factor = config.height_factor;
      fc.seed = forest_seed;
      fc.threads = config.threads;
      Forest forest = build_forest(train, fc);

      auto d_held = distance_matrix(forest, held_out, config.threads);
      auto d_train = distance_matrix(forest, train, config.threads);
      for (std::size_t ai = 0; ai < grid.size(); ++ai) {
        auto s_held = pointwise_from_distances(d_held, held_out.rows, config.trees, grid[ai]);
        auto s_train = pointwise_from_distances(d_train, train.rows, config.trees, grid[ai]);
        acc[ai] += distribution_distance(s_held, s_train);
      }
    }
    std::vector<double> running(grid.size());
    for (std::size_t ai = 0; ai < grid.size(); ++ai)
      running[ai] = acc[ai] / static_cast<double>(it + 1);
    report.trajectory.push_back(std::move(running));
  }

  report.R = report.trajectory.back();
  report.selected_index = 0;
  for (std::size_t ai = 1; ai < grid.size(); ++ai)
    if (report.R[ai] < report.R[report.selected_index]) report.selected_index = ai;
  report.selected = grid[report.selected_index];
  return report;
}

double trajectory_slope(const std::vector<std::vector<double>>& trajectory, std::size_t index) {
  std::vector<double> xs, ys;
  for (std::size_t k = 1; k < trajectory.size(); ++k) {
    double step = std::abs(trajectory[k][index] - trajectory[k - 1][index]);
    if (step > 0.0) {
      xs.push_back(std::log(static_cast<double>(k)));
      ys.push_back(std::log(step));
    }
  }
  if (xs.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(xs.size());
  my /= static_cast<double>(xs.size());
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    num += (xs[i] - mx) * (ys[i] - my);
    den += (xs[i] - mx) * (xs[i] - mx);
  }
  return num / den;
}

}  // namespace diffrf
