#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "diffrf/datagen.hpp"
#include "diffrf/matrix.hpp"
#include "diffrf/tuning.hpp"

namespace diffrf {

// Experiments average over these five seeds unless the caller overrides.
extern const std::vector<std::uint64_t> kDefaultSeeds;

// ---------------------------------------------------------------- donut ----

struct DonutSeedResult {
  std::uint64_t seed = 0;
  double tuned_alpha = 0.0;
  double auc_iforest = 0.0, auc_pointwise = 0.0, auc_frequency = 0.0, auc_collective = 0.0;
  double ks_if_red = 0.0, ks_if_green = 0.0;      // iforest scores, test-normal vs cluster
  double ks_coll_red = 0.0, ks_coll_green = 0.0;  // collective scores, same pairs
};

struct DonutReport {
  std::vector<DonutSeedResult> per_seed;
  double auc_iforest = 0.0, auc_pointwise = 0.0, auc_frequency = 0.0, auc_collective = 0.0;
  double ks_if_red = 0.0, ks_if_green = 0.0, ks_coll_red = 0.0, ks_coll_green = 0.0;
  bool ordering_every_seed = false;  // collective > point-wise > iforest on each seed
  double seconds = 0.0;
};

// Annulus benchmark: per seed, tune alpha on the 1000 training normals
// (t=256, psi=256, 12 iterations), then score the 2000-instance test batch
// with DiFF-RF (t=128, psi=512, tuned alpha) and an Isolation Forest
// (t=128, psi=512). dump_dir, when nonempty, receives one CSV per seed with
// columns instance_id, group, score_kind, score.
DonutReport run_donut_experiment(const std::vector<std::uint64_t>& seeds, unsigned threads,
                                 const std::string& dump_dir = "");

// ---------------------------------------------------------------- drift ----

struct DriftSeedResult {
  std::uint64_t seed = 0;
  double collective_stat = 0.0, collective_p = 1.0;
  double pointwise_stat = 0.0, pointwise_p = 1.0;
};

struct DriftReport {
  DriftKind kind = DriftKind::translation;
  double magnitude = 0.0;
  std::vector<DriftSeedResult> per_seed;
  double mean_collective_stat = 0.0, mean_pointwise_stat = 0.0;
  double collective_p_at_mean = 1.0;    // p of the mean statistic at batch size
  std::size_t pointwise_quiet_seeds = 0;  // seeds with point-wise stat < 0.087
  double seconds = 0.0;
};

// Scores an undrifted batch and its drifted copy with the same forest
// (t=256, psi=128, height_factor 0.7, alpha 2) trained on a separate normal
// sample, and compares the two score distributions per detector with the
// two-sample KS test. Reference critical values: 0.073 / 0.077 / 0.087.
DriftReport run_drift_experiment(DriftKind kind, double magnitude,
                                 const std::vector<std::uint64_t>& seeds, unsigned threads);

// ---------------------------------------------------------------- flood ----

struct FloodParams {
  std::size_t traffic_count = 1000;
  std::size_t red_count = 10;     // attack spot
  std::size_t flood_count = 50;   // legitimate spot next to it
  std::array<double, 2> red_mean{3.0, 3.0};
  double red_var = 0.25;
  std::array<double, 2> flood_mean{3.6, 3.6};
  double flood_var = 0.09;
};

struct FloodSetupResult {
  double auc_pointwise = 0.0, auc_collective = 0.0;
  double eer_pointwise = 0.0, eer_collective = 0.0;
};

struct FloodSeedResult {
  std::uint64_t seed = 0;
  // 0 = no flood, 1 = flood counted legitimate, 2 = flood counted attack
  std::array<FloodSetupResult, 3> setup;
};

struct FloodReport {
  FloodParams params;
  std::vector<FloodSeedResult> per_seed;
  std::array<FloodSetupResult, 3> mean;
  double pointwise_drop = 0.0;  // mean pw AUC, setup 0 minus setup 1
  double seconds = 0.0;
};

// One traffic batch plus a small attack cluster, scored with and without a
// flood of legitimate points beside the attack (forest t=256, psi=64,
// height_factor 0.5, alpha 2). The flood changes only the batch and the
// labeling, never the training data.
FloodReport run_flood_experiment(const FloodParams& params,
                                 const std::vector<std::uint64_t>& seeds, unsigned threads);

// --------------------------------------------------------------- buckets ---

struct BucketReport {
  std::vector<std::size_t> sample_sizes;  // 2^7 .. 2^12
  std::vector<double> mean_leaf_low;      // height_factor 1.0, seed-averaged
  std::vector<double> mean_leaf_high;     // height_factor 1.2
  std::vector<double> increments_high;    // successive differences at 1.2
  bool sub_logarithmic = false;           // increments non-increasing within 15%
  double seconds = 0.0;
};

// Mean leaf population on N(0, 3I) 2-d data as psi doubles, t=128, the
// forest trained on exactly psi points.
BucketReport run_bucket_experiment(const std::vector<std::uint64_t>& seeds, unsigned threads);

// -------------------------------------------------------------- plateaus ---

struct PlateauReport {
  std::vector<std::size_t> tree_counts;   // {32, 64, 128, 256, 512} at psi = 128
  std::vector<double> auc_by_trees;       // seed-mean collective AUC
  std::vector<std::size_t> sample_sizes;  // {100, 250, 500, 1000} at t = 128
  std::vector<double> auc_by_sample;
  double tree_span = 0.0, sample_span = 0.0;  // max - min per sweep
  double seconds = 0.0;
};

// Collective AUC stability across tree count and subsample size on the donut
// data, alpha fixed at 10.
PlateauReport run_plateau_experiment(const std::vector<std::uint64_t>& seeds, unsigned threads);

// ---------------------------------------------------------------- tuning ---

struct TuningExperimentReport {
  std::vector<double> grid;
  std::vector<double> selected_per_seed;
  std::vector<double> mean_R;
  std::vector<std::vector<double>> mean_trajectory;
  std::size_t selected_index = 0;
  double selected = 0.0;  // argmin of the seed-averaged R
  double slope = 0.0;     // log-log step-difference slope at selected_index
  double seconds = 0.0;
};

// Alpha selection on the donut training normals, t=256, psi=256,
// 12 iterations per seed; curves averaged across seeds.
TuningExperimentReport run_tuning_experiment(const std::vector<std::uint64_t>& seeds,
                                             unsigned threads);

// -------------------------------------------------------------- donut25 ----

struct Donut25Report {
  std::vector<std::uint64_t> seeds;
  std::vector<double> tuned_alpha_per_seed;
  std::vector<double> pointwise_per_seed, collective_per_seed;
  double auc_pointwise = 0.0, auc_collective = 0.0;  // means
  double min_tuned_alpha = 0.0;
  double seconds = 0.0;
};

// 5-d noisy annulus: tune alpha (t=256, psi=1000, 12 iterations,
// height_factor 1.2), then score with t=512, psi=2000, height_factor 1.2.
Donut25Report run_donut25_experiment(const std::vector<std::uint64_t>& seeds, unsigned threads);

// ------------------------------------------------------------ throughput ---

struct ThroughputReport {
  std::size_t rows = 0, dims = 0, trees = 0, sample_size = 0;
  double build_seconds = 0.0, score_seconds = 0.0;
  bool thread_invariant = false;  // same bytes from 1 thread and several
  double seconds = 0.0;
};

// Point-wise scoring throughput on synthetic Gaussian data (default scale:
// 1M x 10, t=128, psi=50k) plus a bitwise thread-invariance check.
ThroughputReport run_throughput_experiment(std::size_t rows, std::size_t dims, unsigned threads);

// ----------------------------------------------------------------------------

void print_report(std::ostream& out, const DonutReport& r);
void print_report(std::ostream& out, const DriftReport& r);
void print_report(std::ostream& out, const FloodReport& r);
void print_report(std::ostream& out, const BucketReport& r);
void print_report(std::ostream& out, const PlateauReport& r);
void print_report(std::ostream& out, const TuningExperimentReport& r);
void print_report(std::ostream& out, const Donut25Report& r);
void print_report(std::ostream& out, const ThroughputReport& r);

}  // namespace diffrf
