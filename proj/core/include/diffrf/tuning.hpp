#pragma once

#include <cstdint>
#include <vector>

#include "diffrf/forest.hpp"
#include "diffrf/matrix.hpp"

namespace diffrf {

// Candidate alphas scanned when the caller gives none.
extern const std::vector<double> kDefaultAlphaGrid;

// Upper-tail mismatch between two score samples: sum over i in {95..99} of
// |pct_i - (100 - i)|, where pct_i is the percentage of test_scores strictly
// above the i-th nearest-rank percentile of train_scores. 0 when the tails
// agree, at most 485.
double distribution_distance(const std::vector<double>& test_scores,
                             const std::vector<double>& train_scores);

// Shuffle 0..rows-1 and cut into fold_count contiguous folds; sizes differ by
// at most one, earlier folds take the remainder.
std::vector<std::vector<std::size_t>> shuffled_folds(std::size_t rows, std::size_t fold_count,
                                                     Rng& rng);

// floor(rows / psi) shuffled folds; rows must exceed psi.
std::vector<std::vector<std::size_t>> partition(std::size_t rows, std::size_t psi, Rng& rng);

struct TuneConfig {
  std::size_t trees = 128;
  std::size_t sample_size = 256;
  std::size_t iterations = 12;
  double height_factor = 1.0;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::vector<double> grid;  // empty = kDefaultAlphaGrid
};

struct AlphaReport {
  std::vector<double> grid;
  std::vector<double> R;           // mean fold distance per candidate
  std::size_t selected_index = 0;  // argmin; ties go to the smaller alpha
  double selected = 1.0;
  // trajectory[k][a] = running mean of R for candidate a after k+1
  // iterations; the last row equals R.
  std::vector<std::vector<double>> trajectory;
};

// Cross-validated alpha selection. Per iteration: shuffle into
// max(2, floor(n / psi)) folds; hold each fold out, build one forest on the
// rest (psi capped at the remainder size), and charge every candidate the
// tail mismatch between held-out and in-sample point-wise scores. The forest
// does not depend on alpha, so all candidates share each fold's distances.
AlphaReport tune_alpha(const DataMatrix& X, const TuneConfig& config);

// Least-squares slope of log |R_{k+1} - R_k| against log k for candidate
// `index` of the trajectory. Zero steps are dropped; NaN with fewer than two
// usable steps.
double trajectory_slope(const std::vector<std::vector<double>>& trajectory, std::size_t index);

}  // namespace diffrf
