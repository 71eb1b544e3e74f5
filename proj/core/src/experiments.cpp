#include "diffrf/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <ostream>

#include "diffrf/iforest.hpp"
#include "diffrf/metrics.hpp"
#include "diffrf/scoring.hpp"

namespace diffrf {

const std::vector<std::uint64_t> kDefaultSeeds = {1, 2, 3, 4, 5};

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

std::string fmt(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::vector<double> subset_by_group(const std::vector<double>& scores, const LabeledDataset& ds,
                                    const std::string& group) {
  std::vector<double> out;
  for (std::size_t i = 0; i < scores.size(); ++i)
    if (ds.groups[i] == group) out.push_back(scores[i]);
  return out;
}

void check_seeds(const std::vector<std::uint64_t>& seeds) {
  if (seeds.empty()) throw ConfigError("experiment: seed list must not be empty");
}

bool trees_equal(const Tree& a, const Tree& b) {
  if (a.nodes.size() != b.nodes.size()) return false;
  for (std::size_t i = 0; i < a.nodes.size(); ++i) {
    const auto &x = a.nodes[i], &y = b.nodes[i];
    if (x.q != y.q || x.p != y.p || x.left != y.left || x.right != y.right || x.leaf != y.leaf)
      return false;
  }
  return a.centroids == b.centroids && a.sigma == b.sigma && a.fn == b.fn &&
         a.counts == b.counts && a.depths == b.depths;
}

bool forests_equal(const Forest& a, const Forest& b) {
  if (a.dims != b.dims || a.h_max != b.h_max || a.trees.size() != b.trees.size()) return false;
  for (std::size_t i = 0; i < a.trees.size(); ++i)
    if (!trees_equal(a.trees[i], b.trees[i])) return false;
  return true;
}

}  // namespace

// ---------------------------------------------------------------- donut ----

DonutReport run_donut_experiment(const std::vector<std::uint64_t>& seeds, unsigned threads,
                                 const std::string& dump_dir) {
  check_seeds(seeds);
  auto t0 = Clock::now();
  DonutReport rep;
  rep.ordering_every_seed = true;
  for (std::uint64_t seed : seeds) {
    LabeledDataset ds = gen_donut(seed);
    DataMatrix train = training_view(ds);
    LabeledDataset test = test_view(ds);

    TuneConfig tc;
    tc.trees = 256;
    tc.sample_size = 256;
    tc.iterations = 12;
    tc.height_factor = 1.0;
    tc.seed = seed;
    tc.threads = threads;
    AlphaReport tuned = tune_alpha(train, tc);

    ForestConfig fc;
    fc.trees = 128;
    fc.sample_size = 512;
    fc.alpha = tuned.selected;
    fc.height_factor = 1.0;
    fc.seed = seed;
    fc.threads = threads;
    Forest forest = build_forest(train, fc);
    BatchScores scores = score_batch(forest, test.features);

    IsoForest iso = build_iforest(train, 128, 512, seed ^ 0x69666f72ULL, threads);
    ScoreVector iso_scores = iforest_score(iso, test.features);

    DonutSeedResult r;
    r.seed = seed;
    r.tuned_alpha = tuned.selected;
    r.auc_iforest = roc_auc(iso_scores.scores, test.labels);
    r.auc_pointwise = roc_auc(scores.pointwise.scores, test.labels);
    r.auc_frequency = roc_auc(scores.frequency.scores, test.labels);
    r.auc_collective = roc_auc(scores.collective.scores, test.labels);

    auto normal_iso = subset_by_group(iso_scores.scores, test, "test-normal");
    auto red_iso = subset_by_group(iso_scores.scores, test, "red");
    auto green_iso = subset_by_group(iso_scores.scores, test, "green");
    r.ks_if_red = ks_two_sample(normal_iso, red_iso).statistic;
    r.ks_if_green = ks_two_sample(normal_iso, green_iso).statistic;
    auto normal_coll = subset_by_group(scores.collective.scores, test, "test-normal");
    auto red_coll = subset_by_group(scores.collective.scores, test, "red");
    auto green_coll = subset_by_group(scores.collective.scores, test, "green");
    r.ks_coll_red = ks_two_sample(normal_coll, red_coll).statistic;
    r.ks_coll_green = ks_two_sample(normal_coll, green_coll).statistic;

    rep.ordering_every_seed = rep.ordering_every_seed &&
                              r.auc_collective > r.auc_pointwise &&
                              r.auc_pointwise > r.auc_iforest;
    rep.per_seed.push_back(r);

    if (!dump_dir.empty()) {
      std::string path = dump_dir + "/donut_scores_seed" + std::to_string(seed) + ".csv";
      std::ofstream out(path);
      if (!out) throw DataError("cannot open score dump " + path);
      out << "instance_id,group,score_kind,score\n";
      const std::pair<const char*, const std::vector<double>*> kinds[] = {
          {"iforest", &iso_scores.scores},
          {"pointwise", &scores.pointwise.scores},
          {"frequency", &scores.frequency.scores},
          {"collective", &scores.collective.scores}};
      for (const auto& [kind, vec] : kinds)
        for (std::size_t i = 0; i < vec->size(); ++i)
          out << i << "," << test.groups[i] << "," << kind << "," << fmt((*vec)[i]) << "\n";
    }
  }
  double n = static_cast<double>(rep.per_seed.size());
  for (const auto& r : rep.per_seed) {
    rep.auc_iforest += r.auc_iforest / n;
    rep.auc_pointwise += r.auc_pointwise / n;
    rep.auc_frequency += r.auc_frequency / n;
    rep.auc_collective += r.auc_collective / n;
    rep.ks_if_red += r.ks_if_red / n;
    rep.ks_if_green += r.ks_if_green / n;
    rep.ks_coll_red += r.ks_coll_red / n;
    rep.ks_coll_green += r.ks_coll_green / n;
  }
  rep.seconds = seconds_since(t0);
  return rep;
}

// ---------------------------------------------------------------- drift ----

DriftReport run_drift_experiment(DriftKind kind, double magnitude,
                                 const std::vector<std::uint64_t>& seeds, unsigned threads) {
  check_seeds(seeds);
  auto t0 = Clock::now();
  DriftReport rep;
  rep.kind = kind;
  rep.magnitude = magnitude;
  std::size_t batch = 1000;
  for (std::uint64_t seed : seeds) {
    std::uint64_t base = splitmix64(seed ^ 0x6472696674ULL);
    DataMatrix train = gen_torus(batch, base + 0);
    DataMatrix before = gen_torus(batch, base + 1);
    DataMatrix after = apply_drift(before, kind, magnitude);

    ForestConfig fc;
    fc.trees = 256;
    fc.sample_size = 128;
    fc.alpha = 2.0;
    fc.height_factor = 0.7;
    fc.seed = base + 2;
    fc.threads = threads;
    Forest forest = build_forest(train, fc);

    BatchScores sb = score_batch(forest, before);
    BatchScores sa = score_batch(forest, after);

    DriftSeedResult r;
    r.seed = seed;
    KsResult kc = ks_two_sample(sb.collective.scores, sa.collective.scores);
    KsResult kp = ks_two_sample(sb.pointwise.scores, sa.pointwise.scores);
    r.collective_stat = kc.statistic;
    r.collective_p = kc.p_value;
    r.pointwise_stat = kp.statistic;
    r.pointwise_p = kp.p_value;
    if (r.pointwise_stat < 0.087) ++rep.pointwise_quiet_seeds;
    rep.per_seed.push_back(r);
  }
  std::vector<double> cs, ps;
  for (const auto& r : rep.per_seed) {
    cs.push_back(r.collective_stat);
    ps.push_back(r.pointwise_stat);
  }
  rep.mean_collective_stat = mean_of(cs);
  rep.mean_pointwise_stat = mean_of(ps);
  rep.collective_p_at_mean = ks_p_value(rep.mean_collective_stat, batch, batch);
  rep.seconds = seconds_since(t0);
  return rep;
}

// ---------------------------------------------------------------- flood ----

FloodReport run_flood_experiment(const FloodParams& params,
                                 const std::vector<std::uint64_t>& seeds, unsigned threads) {
  check_seeds(seeds);
  if (params.traffic_count == 0 || params.red_count == 0 || params.flood_count == 0)
    throw ConfigError("flood experiment: all cluster sizes must be positive");
  auto t0 = Clock::now();
  FloodReport rep;
  rep.params = params;
  for (std::uint64_t seed : seeds) {
    std::uint64_t base = splitmix64(seed ^ 0x666c6f6f64ULL);
    DataMatrix train = gen_torus(params.traffic_count, base + 0);
    DataMatrix traffic = gen_torus(params.traffic_count, base + 1);
    DataMatrix red = gen_gaussian_cluster(params.red_count,
                                          {params.red_mean[0], params.red_mean[1]},
                                          {params.red_var, params.red_var}, base + 2);
    DataMatrix flood = gen_gaussian_cluster(params.flood_count,
                                            {params.flood_mean[0], params.flood_mean[1]},
                                            {params.flood_var, params.flood_var}, base + 3);

    ForestConfig fc;
    fc.trees = 256;
    fc.sample_size = 64;
    fc.alpha = 2.0;
    fc.height_factor = 0.5;
    fc.seed = base + 4;
    fc.threads = threads;
    Forest forest = build_forest(train, fc);

    DataMatrix base_batch = vstack({&traffic, &red});
    DataMatrix flood_batch = vstack({&traffic, &red, &flood});
    BatchScores s_base = score_batch(forest, base_batch);
    BatchScores s_flood = score_batch(forest, flood_batch);

    std::vector<int> labels_base(params.traffic_count, 0);
    labels_base.insert(labels_base.end(), params.red_count, 1);
    std::vector<int> labels_legit = labels_base;
    labels_legit.insert(labels_legit.end(), params.flood_count, 0);
    std::vector<int> labels_attack = labels_base;
    labels_attack.insert(labels_attack.end(), params.flood_count, 1);

    auto eval_setup = [](const BatchScores& s, const std::vector<int>& labels) {
      FloodSetupResult r;
      r.auc_pointwise = roc_auc(s.pointwise.scores, labels);
      r.auc_collective = roc_auc(s.collective.scores, labels);
      r.eer_pointwise = equal_error_rate(s.pointwise.scores, labels);
      r.eer_collective = equal_error_rate(s.collective.scores, labels);
      return r;
    };

    FloodSeedResult r;
    r.seed = seed;
    r.setup[0] = eval_setup(s_base, labels_base);
    r.setup[1] = eval_setup(s_flood, labels_legit);
    r.setup[2] = eval_setup(s_flood, labels_attack);
    rep.per_seed.push_back(r);
  }
  double n = static_cast<double>(rep.per_seed.size());
  for (const auto& r : rep.per_seed)
    for (std::size_t s = 0; s < 3; ++s) {
      rep.mean[s].auc_pointwise += r.setup[s].auc_pointwise / n;
      rep.mean[s].auc_collective += r.setup[s].auc_collective / n;
      rep.mean[s].eer_pointwise += r.setup[s].eer_pointwise / n;
      rep.mean[s].eer_collective += r.setup[s].eer_collective / n;
    }
  rep.pointwise_drop = rep.mean[0].auc_pointwise - rep.mean[1].auc_pointwise;
  rep.seconds = seconds_since(t0);
  return rep;
}

// --------------------------------------------------------------- buckets ---

BucketReport run_bucket_experiment(const std::vector<std::uint64_t>& seeds, unsigned threads) {
  check_seeds(seeds);
  auto t0 = Clock::now();
  BucketReport rep;
  for (std::size_t p = 7; p <= 12; ++p) rep.sample_sizes.push_back(std::size_t{1} << p);
  rep.mean_leaf_low.assign(rep.sample_sizes.size(), 0.0);
  rep.mean_leaf_high.assign(rep.sample_sizes.size(), 0.0);
  double n = static_cast<double>(seeds.size());
  for (std::uint64_t seed : seeds) {
    std::uint64_t base = splitmix64(seed ^ 0x6275636b6574ULL);
    for (std::size_t k = 0; k < rep.sample_sizes.size(); ++k) {
      std::size_t psi = rep.sample_sizes[k];
      DataMatrix data = gen_gaussian_cluster(psi, {0.0, 0.0}, {3.0, 3.0}, base + k);
      ForestConfig fc;
      fc.trees = 128;
      fc.sample_size = psi;
      fc.alpha = 1.0;
      fc.threads = threads;
      fc.height_factor = 1.0;
      fc.seed = base + 16 + k;
      rep.mean_leaf_low[k] +=
          leaf_population_stats(build_forest(data, fc)).mean_leaf_count / n;
      fc.height_factor = 1.2;
      fc.seed = base + 32 + k;
      rep.mean_leaf_high[k] +=
          leaf_population_stats(build_forest(data, fc)).mean_leaf_count / n;
    }
  }
  rep.sub_logarithmic = true;
  for (std::size_t k = 1; k < rep.mean_leaf_high.size(); ++k) {
    rep.increments_high.push_back(rep.mean_leaf_high[k] - rep.mean_leaf_high[k - 1]);
    if (rep.increments_high.size() >= 2) {
      double prev = rep.increments_high[rep.increments_high.size() - 2];
      double cur = rep.increments_high.back();
      if (cur > prev * 1.15) rep.sub_logarithmic = false;
    }
  }
  rep.seconds = seconds_since(t0);
  return rep;
}

// -------------------------------------------------------------- plateaus ---

PlateauReport run_plateau_experiment(const std::vector<std::uint64_t>& seeds, unsigned threads) {
  check_seeds(seeds);
  auto t0 = Clock::now();
  PlateauReport rep;
  rep.tree_counts = {32, 64, 128, 256, 512};
  rep.sample_sizes = {100, 250, 500, 1000};
  rep.auc_by_trees.assign(rep.tree_counts.size(), 0.0);
  rep.auc_by_sample.assign(rep.sample_sizes.size(), 0.0);
  double n = static_cast<double>(seeds.size());
  for (std::uint64_t seed : seeds) {
    LabeledDataset ds = gen_donut(seed);
    DataMatrix train = training_view(ds);
    LabeledDataset test = test_view(ds);
    std::uint64_t base = splitmix64(seed ^ 0x706c617465ULL);
    ForestConfig fc;
    fc.alpha = 10.0;
    fc.height_factor = 1.0;
    fc.threads = threads;
    for (std::size_t k = 0; k < rep.tree_counts.size(); ++k) {
      fc.trees = rep.tree_counts[k];
      fc.sample_size = 128;
      fc.seed = base + k;
      Forest f = build_forest(train, fc);
      rep.auc_by_trees[k] += roc_auc(collective_scores(f, test.features).scores, test.labels) / n;
    }
    for (std::size_t k = 0; k < rep.sample_sizes.size(); ++k) {
      fc.trees = 128;
      fc.sample_size = rep.sample_sizes[k];
      fc.seed = base + 16 + k;
      Forest f = build_forest(train, fc);
      rep.auc_by_sample[k] += roc_auc(collective_scores(f, test.features).scores, test.labels) / n;
    }
  }
  auto span = [](const std::vector<double>& v) {
    auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return *hi - *lo;
  };
  rep.tree_span = span(rep.auc_by_trees);
  rep.sample_span = span(rep.auc_by_sample);
  rep.seconds = seconds_since(t0);
  return rep;
}

// ---------------------------------------------------------------- tuning ---

TuningExperimentReport run_tuning_experiment(const std::vector<std::uint64_t>& seeds,
                                             unsigned threads) {
  check_seeds(seeds);
  auto t0 = Clock::now();
  TuningExperimentReport rep;
  rep.grid = kDefaultAlphaGrid;
  double n = static_cast<double>(seeds.size());
  for (std::uint64_t seed : seeds) {
    LabeledDataset ds = gen_donut(seed);
    DataMatrix train = training_view(ds);
    TuneConfig tc;
    tc.trees = 256;
    tc.sample_size = 256;
    tc.iterations = 12;
    tc.height_factor = 1.0;
    tc.seed = seed;
    tc.threads = threads;
    AlphaReport ar = tune_alpha(train, tc);
    rep.selected_per_seed.push_back(ar.selected);
    if (rep.mean_trajectory.empty())
      rep.mean_trajectory.assign(ar.trajectory.size(),
                                 std::vector<double>(rep.grid.size(), 0.0));
    for (std::size_t k = 0; k < ar.trajectory.size(); ++k)
      for (std::size_t ai = 0; ai < rep.grid.size(); ++ai)
        rep.mean_trajectory[k][ai] += ar.trajectory[k][ai] / n;
  }
  rep.mean_R = rep.mean_trajectory.back();
  rep.selected_index = 0;
  for (std::size_t ai = 1; ai < rep.grid.size(); ++ai)
    if (rep.mean_R[ai] < rep.mean_R[rep.selected_index]) rep.selected_index = ai;
  rep.selected = rep.grid[rep.selected_index];
  rep.slope = trajectory_slope(rep.mean_trajectory, rep.selected_index);
  rep.seconds = seconds_since(t0);
  return rep;
}

// -------------------------------------------------------------- donut25 ----

Donut25Report run_donut25_experiment(const std::vector<std::uint64_t>& seeds, unsigned threads) {
  check_seeds(seeds);
  auto t0 = Clock::now();
  Donut25Report rep;
  rep.seeds = seeds;
  for (std::uint64_t seed : seeds) {
    LabeledDataset ds = gen_donut25(seed);
    DataMatrix train = training_view(ds);
    LabeledDataset test = test_view(ds);
    TuneConfig tc;
    tc.trees = 256;
    tc.sample_size = 1000;
    tc.iterations = 12;
    tc.height_factor = 1.2;
    tc.seed = seed;
    tc.threads = threads;
    AlphaReport tuned = tune_alpha(train, tc);
    rep.tuned_alpha_per_seed.push_back(tuned.selected);

    ForestConfig fc;
    fc.trees = 512;
    fc.sample_size = 2000;
    fc.alpha = tuned.selected;
    fc.height_factor = 1.2;
    fc.seed = seed;
    fc.threads = threads;
    Forest forest = build_forest(train, fc);
    BatchScores scores = score_batch(forest, test.features);
    rep.pointwise_per_seed.push_back(roc_auc(scores.pointwise.scores, test.labels));
    rep.collective_per_seed.push_back(roc_auc(scores.collective.scores, test.labels));
  }
  rep.auc_pointwise = mean_of(rep.pointwise_per_seed);
  rep.auc_collective = mean_of(rep.collective_per_seed);
  rep.min_tuned_alpha = *std::min_element(rep.tuned_alpha_per_seed.begin(),
                                          rep.tuned_alpha_per_seed.end());
  rep.seconds = seconds_since(t0);
  return rep;
}

// ------------------------------------------------------------ throughput ---

ThroughputReport run_throughput_experiment(std::size_t rows, std::size_t dims,
                                           unsigned threads) {
  if (rows < 10 || dims < 1) throw ConfigError("throughput experiment: scale too small");
  auto t0 = Clock::now();
  ThroughputReport rep;
  rep.rows = rows;
  rep.dims = dims;
  rep.trees = 128;
  rep.sample_size = std::min<std::size_t>(50000, rows);
  DataMatrix data = gen_gaussian_cluster(rows, std::vector<double>(dims, 0.0),
                                         std::vector<double>(dims, 1.0), 0x7468726f75ULL);

  ForestConfig fc;
  fc.trees = rep.trees;
  fc.sample_size = rep.sample_size;
  fc.alpha = 1.0;
  fc.height_factor = 1.0;
  fc.seed = 11;
  fc.threads = threads;
  auto tb = Clock::now();
  Forest forest = build_forest(data, fc);
  rep.build_seconds = seconds_since(tb);

  auto ts = Clock::now();
  ScoreVector scores = pointwise_score(forest, data);
  rep.score_seconds = seconds_since(ts);
  (void)scores;

  // Invariance probe at a smaller scale: identical forests and identical
  // scores from 1 thread and from several.
  std::size_t probe_rows = std::min<std::size_t>(5000, rows);
  DataMatrix probe(probe_rows, dims);
  std::copy(data.v.begin(), data.v.begin() + static_cast<std::ptrdiff_t>(probe_rows * dims),
            probe.v.begin());
  ForestConfig pc;
  pc.trees = 16;
  pc.sample_size = std::min<std::size_t>(2000, probe_rows);
  pc.alpha = 1.0;
  pc.height_factor = 1.0;
  pc.seed = 21;
  pc.threads = 1;
  Forest f1 = build_forest(probe, pc);
  pc.threads = 4;
  Forest f4 = build_forest(probe, pc);
  bool same = forests_equal(f1, f4);
  if (same) {
    ScoreVector s1 = pointwise_score(f1, probe);
    ScoreVector s4 = pointwise_score(f4, probe);
    same = s1.scores == s4.scores;
    if (same) {
      BatchScores b1 = score_batch(f1, probe);
      BatchScores b4 = score_batch(f4, probe);
      same = b1.pointwise.scores == b4.pointwise.scores &&
             b1.frequency.scores == b4.frequency.scores &&
             b1.collective.scores == b4.collective.scores;
    }
  }
  rep.thread_invariant = same;
  rep.seconds = seconds_since(t0);
  return rep;
}

// ------------------------------------------------------------- printing ----

namespace {

void print_seed_list(std::ostream& out, const std::vector<std::uint64_t>& seeds) {
  out << "seeds =";
  for (auto s : seeds) out << " " << s;
  out << "\n";
}

void print_values(std::ostream& out, const std::string& key, const std::vector<double>& v) {
  out << key << " =";
  for (double x : v) out << " " << fmt(x);
  out << "\n";
}

const char* kSetupNames[3] = {"no_flood", "flood_as_legit", "flood_as_attack"};

}  // namespace

void print_report(std::ostream& out, const DonutReport& r) {
  out << "experiment = donut\n";
  std::vector<std::uint64_t> seeds;
  for (const auto& s : r.per_seed) seeds.push_back(s.seed);
  print_seed_list(out, seeds);
  out << "auc.iforest = " << fmt(r.auc_iforest) << "\n";
  out << "auc.pointwise = " << fmt(r.auc_pointwise) << "\n";
  out << "auc.frequency = " << fmt(r.auc_frequency) << "\n";
  out << "auc.collective = " << fmt(r.auc_collective) << "\n";
  out << "ks.iforest.red = " << fmt(r.ks_if_red) << "\n";
  out << "ks.iforest.green = " << fmt(r.ks_if_green) << "\n";
  out << "ks.collective.red = " << fmt(r.ks_coll_red) << "\n";
  out << "ks.collective.green = " << fmt(r.ks_coll_green) << "\n";
  out << "ordering_every_seed = " << (r.ordering_every_seed ? "true" : "false") << "\n";
  for (const auto& s : r.per_seed) {
    std::string p = "seed." + std::to_string(s.seed) + ".";
    out << p << "tuned_alpha = " << fmt(s.tuned_alpha) << "\n";
    out << p << "auc.iforest = " << fmt(s.auc_iforest) << "\n";
    out << p << "auc.pointwise = " << fmt(s.auc_pointwise) << "\n";
    out << p << "auc.frequency = " << fmt(s.auc_frequency) << "\n";
    out << p << "auc.collective = " << fmt(s.auc_collective) << "\n";
  }
  out << "seconds = " << fmt(r.seconds) << "\n";
}

void print_report(std::ostream& out, const DriftReport& r) {
  out << "experiment = drift\n";
  out << "kind = " << (r.kind == DriftKind::translation ? "translation" : "homothety") << "\n";
  out << "magnitude = " << fmt(r.magnitude) << "\n";
  std::vector<std::uint64_t> seeds;
  for (const auto& s : r.per_seed) seeds.push_back(s.seed);
  print_seed_list(out, seeds);
  out << "collective.mean_stat = " << fmt(r.mean_collective_stat) << "\n";
  out << "collective.p_at_mean = " << fmt(r.collective_p_at_mean) << "\n";
  out << "pointwise.mean_stat = " << fmt(r.mean_pointwise_stat) << "\n";
  out << "pointwise.quiet_seeds = " << r.pointwise_quiet_seeds << "\n";
  out << "critical_values = 0.073 0.077 0.087\n";
  for (const auto& s : r.per_seed) {
    std::string p = "seed." + std::to_string(s.seed) + ".";
    out << p << "collective.stat = " << fmt(s.collective_stat) << "\n";
    out << p << "collective.p = " << fmt(s.collective_p) << "\n";
    out << p << "pointwise.stat = " << fmt(s.pointwise_stat) << "\n";
    out << p << "pointwise.p = " << fmt(s.pointwise_p) << "\n";
  }
  out << "seconds = " << fmt(r.seconds) << "\n";
}

void print_report(std::ostream& out, const FloodReport& r) {
  out << "experiment = flood\n";
  std::vector<std::uint64_t> seeds;
  for (const auto& s : r.per_seed) seeds.push_back(s.seed);
  print_seed_list(out, seeds);
  out << "params.red = " << fmt(r.params.red_mean[0]) << " " << fmt(r.params.red_mean[1])
      << " var " << fmt(r.params.red_var) << " n " << r.params.red_count << "\n";
  out << "params.flood = " << fmt(r.params.flood_mean[0]) << " " << fmt(r.params.flood_mean[1])
      << " var " << fmt(r.params.flood_var) << " n " << r.params.flood_count << "\n";
  for (std::size_t s = 0; s < 3; ++s) {
    std::string p = std::string("setup.") + kSetupNames[s] + ".";
    out << p << "auc.pointwise = " << fmt(r.mean[s].auc_pointwise) << "\n";
    out << p << "auc.collective = " << fmt(r.mean[s].auc_collective) << "\n";
    out << p << "eer.pointwise = " << fmt(r.mean[s].eer_pointwise) << "\n";
    out << p << "eer.collective = " << fmt(r.mean[s].eer_collective) << "\n";
  }
  out << "pointwise.drop = " << fmt(r.pointwise_drop) << "\n";
  for (const auto& sr : r.per_seed)
    for (std::size_t s = 0; s < 3; ++s) {
      std::string p = "seed." + std::to_string(sr.seed) + ".setup." + kSetupNames[s] + ".";
      out << p << "auc.pointwise = " << fmt(sr.setup[s].auc_pointwise) << "\n";
      out << p << "auc.collective = " << fmt(sr.setup[s].auc_collective) << "\n";
      out << p << "eer.collective = " << fmt(sr.setup[s].eer_collective) << "\n";
    }
  out << "seconds = " << fmt(r.seconds) << "\n";
}

void print_report(std::ostream& out, const BucketReport& r) {
  out << "experiment = buckets\n";
  out << "sample_sizes =";
  for (auto s : r.sample_sizes) out << " " << s;
  out << "\n";
  print_values(out, "mean_leaf.height_factor_1.0", r.mean_leaf_low);
  print_values(out, "mean_leaf.height_factor_1.2", r.mean_leaf_high);
  print_values(out, "increments.height_factor_1.2", r.increments_high);
  out << "sub_logarithmic = " << (r.sub_logarithmic ? "true" : "false") << "\n";
  out << "seconds = " << fmt(r.seconds) << "\n";
}

void print_report(std::ostream& out, const PlateauReport& r) {
  out << "experiment = plateaus\n";
  out << "tree_counts =";
  for (auto t : r.tree_counts) out << " " << t;
  out << "\n";
  print_values(out, "auc_by_trees", r.auc_by_trees);
  out << "sample_sizes =";
  for (auto s : r.sample_sizes) out << " " << s;
  out << "\n";
  print_values(out, "auc_by_sample", r.auc_by_sample);
  out << "tree_span = " << fmt(r.tree_span) << "\n";
  out << "sample_span = " << fmt(r.sample_span) << "\n";
  out << "seconds = " << fmt(r.seconds) << "\n";
}

void print_report(std::ostream& out, const TuningExperimentReport& r) {
  out << "experiment = tuning\n";
  print_values(out, "grid", r.grid);
  print_values(out, "mean_R", r.mean_R);
  print_values(out, "selected_per_seed", r.selected_per_seed);
  out << "selected = " << fmt(r.selected) << "\n";
  out << "slope = " << fmt(r.slope) << "\n";
  out << "seconds = " << fmt(r.seconds) << "\n";
}

void print_report(std::ostream& out, const Donut25Report& r) {
  out << "experiment = donut25\n";
  print_seed_list(out, r.seeds);
  print_values(out, "tuned_alpha_per_seed", r.tuned_alpha_per_seed);
  print_values(out, "auc.pointwise.per_seed", r.pointwise_per_seed);
  print_values(out, "auc.collective.per_seed", r.collective_per_seed);
  out << "auc.pointwise = " << fmt(r.auc_pointwise) << "\n";
  out << "auc.collective = " << fmt(r.auc_collective) << "\n";
  out << "min_tuned_alpha = " << fmt(r.min_tuned_alpha) << "\n";
  out << "seconds = " << fmt(r.seconds) << "\n";
}

void print_report(std::ostream& out, const ThroughputReport& r) {
  out << "experiment = throughput\n";
  out << "rows = " << r.rows << "\n";
  out << "dims = " << r.dims << "\n";
  out << "trees = " << r.trees << "\n";
  out << "sample_size = " << r.sample_size << "\n";
  out << "build_seconds = " << fmt(r.build_seconds) << "\n";
  out << "score_seconds = " << fmt(r.score_seconds) << "\n";
  out << "thread_invariant = " << (r.thread_invariant ? "true" : "false") << "\n";
  out << "seconds = " << fmt(r.seconds) << "\n";
}

}  // namespace diffrf
