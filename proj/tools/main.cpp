#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "diffrf/datagen.hpp"
#include "diffrf/experiments.hpp"
#include "diffrf/iforest.hpp"
#include "diffrf/metrics.hpp"
#include "diffrf/model_io.hpp"
#include "diffrf/scoring.hpp"
#include "diffrf/threading.hpp"
#include "diffrf/tuning.hpp"

namespace {

using namespace diffrf;

std::string fmt(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::size_t auto_sample_size(std::size_t rows) {
  return std::min<std::size_t>(50000, (rows + 3) / 4);
}

double parse_alpha(const std::string& text) {
  double value = 0.0;
  const char* b = text.data();
  auto res = std::from_chars(b, b + text.size(), value);
  if (res.ec != std::errc() || res.ptr != b + text.size())
    throw ConfigError("--alpha must be a number or 'auto', got '" + text + "'");
  return value;
}

// Last column of a headered CSV as doubles (the score-file format is
// instance_id,score).
std::vector<double> load_score_column(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw DataError("empty file " + path);
  std::vector<double> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto pos = line.find_last_of(',');
    std::string cell = pos == std::string::npos ? line : line.substr(pos + 1);
    if (!cell.empty() && cell.back() == '\r') cell.pop_back();
    double value = 0.0;
    auto res = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (res.ec != std::errc() || res.ptr != cell.data() + cell.size())
      throw DataError("line " + std::to_string(line_no) + " of " + path +
                      ": not a number: '" + cell + "'");
    out.push_back(value);
  }
  return out;
}

struct GenOpts {
  std::string dataset;
  std::string out;
  std::uint64_t seed = 1;
};

void run_gen(const GenOpts& o) {
  LabeledDataset ds = o.dataset == "donut" ? gen_donut(o.seed) : gen_donut25(o.seed);
  std::filesystem::create_directories(o.out);
  LabeledDataset train;
  train.features.dims = ds.features.dims;
  for (std::size_t i = 0; i < ds.features.rows; ++i) {
    if (ds.groups[i] != "train-normal") continue;
    train.features.append_row(ds.features.row(i));
    train.labels.push_back(ds.labels[i]);
    train.groups.push_back(ds.groups[i]);
  }
  LabeledDataset test = test_view(ds);
  save_csv(o.out + "/train.csv", train);
  save_csv(o.out + "/test.csv", test);
  std::cout << "train.csv = " << train.features.rows << " rows\n";
  std::cout << "test.csv = " << test.features.rows << " rows\n";
  std::cout << "dims = " << ds.features.dims << "\n";
}

struct TrainOpts {
  std::string data;
  std::string out;
  std::size_t trees = 128;
  std::size_t sample_size = 0;  // 0 = auto
  std::string alpha = "auto";
  double height_factor = 1.0;
  std::uint64_t seed = 1;
  unsigned threads = default_threads();
  std::size_t iterations = 12;
};

void run_train(const TrainOpts& o) {
  auto t0 = std::chrono::steady_clock::now();
  LabeledDataset data = load_csv(o.data);
  ForestConfig fc;
  fc.trees = o.trees;
  fc.sample_size = o.sample_size ? o.sample_size : auto_sample_size(data.features.rows);
  fc.height_factor = o.height_factor;
  fc.seed = o.seed;
  fc.threads = o.threads;
  bool tuned = false;
  if (o.alpha == "auto") {
    TuneConfig tc;
    tc.trees = fc.trees;
    tc.sample_size = fc.sample_size;
    tc.iterations = o.iterations;
    tc.height_factor = fc.height_factor;
    tc.seed = fc.seed;
    tc.threads = fc.threads;
    fc.alpha = tune_alpha(data.features, tc).selected;
    tuned = true;
  } else {
    fc.alpha = parse_alpha(o.alpha);
  }
  Forest forest = build_forest(data.features, fc);

  ModelFile m;
  m.kind = "diff-rf";
  m.alpha_tuned = tuned;
  m.fingerprint = fingerprint_data(data.features);
  m.forest = std::move(forest);
  save_model(m, o.out);

  PopulationStats stats = leaf_population_stats(m.forest);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::cout << "rows = " << data.features.rows << "\n";
  std::cout << "dims = " << data.features.dims << "\n";
  std::cout << "trees = " << fc.trees << "\n";
  std::cout << "sample_size = " << fc.sample_size << "\n";
  std::cout << "alpha = " << fmt(fc.alpha) << "\n";
  std::cout << "alpha_tuned = " << (tuned ? "true" : "false") << "\n";
  std::cout << "mean_leaf_count = " << fmt(stats.mean_leaf_count) << "\n";
  std::cout << "leaves_by_depth =";
  for (std::size_t c : stats.depth_counts) std::cout << " " << c;
  std::cout << "\n";
  std::cout << "seconds = " << fmt(secs) << "\n";
  std::cout << "model = " << o.out << "\n";
}

struct TuneOpts {
  std::string data;
  std::string out;
  std::size_t trees = 128;
  std::size_t sample_size = 0;
  std::size_t iterations = 12;
  double height_factor = 1.0;
  std::uint64_t seed = 1;
  unsigned threads = default_threads();
};

void run_tune(const TuneOpts& o) {
  LabeledDataset data = load_csv(o.data);
  TuneConfig tc;
  tc.trees = o.trees;
  tc.sample_size = o.sample_size ? o.sample_size : auto_sample_size(data.features.rows);
  tc.iterations = o.iterations;
  tc.height_factor = o.height_factor;
  tc.seed = o.seed;
  tc.threads = o.threads;
  AlphaReport report = tune_alpha(data.features, tc);

  std::ostringstream text;
  text << "grid =";
  for (double a : report.grid) text << " " << fmt(a);
  text << "\nR =";
  for (double r : report.R) text << " " << fmt(r);
  text << "\nselected = " << fmt(report.selected) << "\n";
  text << "slope = " << fmt(trajectory_slope(report.trajectory, report.selected_index)) << "\n";
  for (std::size_t k = 0; k < report.trajectory.size(); ++k) {
    text << "trajectory." << (k + 1) << " =";
    for (double r : report.trajectory[k]) text << " " << fmt(r);
    text << "\n";
  }
  std::cout << text.str();
  if (!o.out.empty()) {
    std::ofstream file(o.out);
    if (!file) throw DataError("cannot open " + o.out);
    file << text.str();
  }
}

struct ScoreOpts {
  std::string model;
  std::string data;
  std::string mode = "pointwise";
  std::string out;
  unsigned threads = default_threads();
};

void run_score(const ScoreOpts& o) {
  ModelFile m = load_model(o.model);
  LabeledDataset data = load_csv(o.data);
  std::vector<double> scores;
  if (m.kind == "iforest") {
    if (data.features.dims != m.iforest.dims)
      throw DataError("dimension mismatch: model expects " + std::to_string(m.iforest.dims) +
                      " features, file has " + std::to_string(data.features.dims));
    m.iforest.threads = o.threads;
    scores = iforest_score(m.iforest, data.features).scores;
  } else {
    if (data.features.dims != m.forest.dims)
      throw DataError("dimension mismatch: model expects " + std::to_string(m.forest.dims) +
                      " features, file has " + std::to_string(data.features.dims));
    m.forest.config.threads = o.threads;
    if (o.mode == "pointwise")
      scores = pointwise_score(m.forest, data.features).scores;
    else if (o.mode == "frequency")
      scores = frequency_score(m.forest, data.features).scores;
    else
      scores = collective_scores(m.forest, data.features).scores;
  }
  std::ostringstream text;
  text << "instance_id,score\n";
  for (std::size_t i = 0; i < scores.size(); ++i) text << i << "," << fmt(scores[i]) << "\n";
  if (o.out.empty()) {
    std::cout << text.str();
  } else {
    std::ofstream file(o.out);
    if (!file) throw DataError("cannot open " + o.out);
    file << text.str();
  }
}

struct EvalOpts {
  std::string scores;
  std::string labels;
  std::string out;
};

void run_eval(const EvalOpts& o) {
  std::vector<double> scores = load_score_column(o.scores);
  std::vector<int> labels = load_csv(o.labels).labels;
  if (scores.size() != labels.size())
    throw DataError("row count mismatch: " + std::to_string(scores.size()) + " scores vs " +
                    std::to_string(labels.size()) + " labels");
  EvalReport report = evaluate_scores(scores, labels);
  std::vector<double> s0, s1;
  for (std::size_t i = 0; i < scores.size(); ++i) (labels[i] ? s1 : s0).push_back(scores[i]);
  KsResult ks = ks_two_sample(s0, s1);
  std::cout << "auc = " << fmt(report.auc) << "\n";
  std::cout << "ap = " << fmt(report.ap) << "\n";
  std::cout << "eer = " << fmt(report.eer) << "\n";
  std::cout << "ks.statistic = " << fmt(ks.statistic) << "\n";
  std::cout << "ks.p_value = " << fmt(ks.p_value) << "\n";
  std::cout << "roc.points = " << report.roc.size() << "\n";
  if (!o.out.empty()) {
    std::ofstream file(o.out);
    if (!file) throw DataError("cannot open " + o.out);
    file << "fpr,tpr\n";
    for (const auto& [fpr, tpr] : report.roc) file << fmt(fpr) << "," << fmt(tpr) << "\n";
  }
}

struct ExperimentOpts {
  std::string name;
  std::uint64_t seed = 1;
  unsigned threads = default_threads();
  std::string out;
  std::string drift_kind = "all";
  double magnitude = 0.04;
  FloodParams flood;
};

void run_experiment(const ExperimentOpts& o) {
  std::vector<std::uint64_t> seeds;
  for (std::uint64_t s = 0; s < 5; ++s) seeds.push_back(o.seed + s);
  if (!o.out.empty()) std::filesystem::create_directories(o.out);

  std::ostringstream text;
  if (o.name == "donut") {
    DonutReport rep = run_donut_experiment(seeds, o.threads, o.out);
    print_report(text, rep);
  } else if (o.name == "drift") {
    if (o.drift_kind == "translation" || o.drift_kind == "all")
      print_report(text, run_drift_experiment(DriftKind::translation, o.magnitude, seeds,
                                              o.threads));
    if (o.drift_kind == "homothety" || o.drift_kind == "all") {
      print_report(text, run_drift_experiment(DriftKind::homothety, o.magnitude, seeds,
                                              o.threads));
      print_report(text, run_drift_experiment(DriftKind::homothety, -o.magnitude, seeds,
                                              o.threads));
    }
  } else if (o.name == "flood") {
    print_report(text, run_flood_experiment(o.flood, seeds, o.threads));
  } else {
    print_report(text, run_bucket_experiment(seeds, o.threads));
  }
  std::cout << text.str();
  if (!o.out.empty()) {
    std::string path = o.out + "/" + o.name + "_report.txt";
    std::ofstream file(path);
    if (!file) throw DataError("cannot open " + path);
    file << text.str();
  }
}

struct InspectOpts {
  std::string model;
};

void run_inspect(const InspectOpts& o) {
  ModelFile m = load_model(o.model);
  std::cout << "kind = " << m.kind << "\n";
  std::cout << "fingerprint.rows = " << m.fingerprint.rows << "\n";
  std::cout << "fingerprint.dims = " << m.fingerprint.dims << "\n";
  std::cout << "fingerprint.hash = " << m.fingerprint.hash << "\n";
  if (m.kind == "diff-rf") {
    const ForestConfig& c = m.forest.config;
    std::cout << "dims = " << m.forest.dims << "\n";
    std::cout << "h_max = " << m.forest.h_max << "\n";
    std::cout << "trees = " << m.forest.trees.size() << "\n";
    std::cout << "sample_size = " << c.sample_size << "\n";
    std::cout << "alpha = " << fmt(c.alpha) << "\n";
    std::cout << "alpha_tuned = " << (m.alpha_tuned ? "true" : "false") << "\n";
    std::cout << "height_factor = " << fmt(c.height_factor) << "\n";
    std::cout << "seed = " << c.seed << "\n";
    PopulationStats stats = leaf_population_stats(m.forest);
    std::size_t leaves = 0;
    for (const auto& t : m.forest.trees) leaves += t.n_leaves();
    std::cout << "leaves = " << leaves << "\n";
    std::cout << "mean_leaf_count = " << fmt(stats.mean_leaf_count) << "\n";
    std::cout << "leaves_by_depth =";
    for (std::size_t cnt : stats.depth_counts) std::cout << " " << cnt;
    std::cout << "\n";
  } else {
    std::cout << "dims = " << m.iforest.dims << "\n";
    std::cout << "h_max = " << m.iforest.h_max << "\n";
    std::cout << "trees = " << m.iforest.trees.size() << "\n";
    std::cout << "sample_size = " << m.iforest.psi << "\n";
    std::cout << "seed = " << m.iforest.seed << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"diff-rf: semi-supervised anomaly detection over random partitioning forests"};
  app.require_subcommand(1);

  GenOpts gen;
  auto* cmd_gen = app.add_subcommand("gen", "generate a synthetic dataset (train.csv/test.csv)");
  cmd_gen->add_option("dataset", gen.dataset, "donut | donut25")
      ->required()
      ->check(CLI::IsMember({"donut", "donut25"}));
  cmd_gen->add_option("--out", gen.out, "output directory")->required()->envname("DIFFRF_OUT");
  cmd_gen->add_option("--seed", gen.seed, "generator seed")->envname("DIFFRF_SEED");

  TrainOpts train;
  auto* cmd_train = app.add_subcommand("train", "build a forest from a training CSV");
  cmd_train->add_option("data", train.data, "training CSV")->required();
  cmd_train->add_option("--out", train.out, "model file")->required()->envname("DIFFRF_OUT");
  cmd_train->add_option("--trees", train.trees, "tree count")->envname("DIFFRF_TREES");
  cmd_train->add_option("--sample-size", train.sample_size,
                        "subsample per tree (0 = min(25% of rows, 50000))")
      ->envname("DIFFRF_SAMPLE_SIZE");
  cmd_train->add_option("--alpha", train.alpha, "similarity exponent or 'auto'")
      ->envname("DIFFRF_ALPHA");
  cmd_train->add_option("--height-factor", train.height_factor, "height limit factor")
      ->envname("DIFFRF_HEIGHT_FACTOR");
  cmd_train->add_option("--seed", train.seed, "build seed")->envname("DIFFRF_SEED");
  cmd_train->add_option("--threads", train.threads, "worker threads")->envname("DIFFRF_THREADS");
  cmd_train->add_option("--iterations", train.iterations, "tuning iterations when alpha=auto")
      ->envname("DIFFRF_ITERATIONS");

  TuneOpts tune;
  auto* cmd_tune = app.add_subcommand("tune", "cross-validated alpha selection");
  cmd_tune->add_option("data", tune.data, "training CSV")->required();
  cmd_tune->add_option("--out", tune.out, "also write the report here")->envname("DIFFRF_OUT");
  cmd_tune->add_option("--trees", tune.trees, "tree count")->envname("DIFFRF_TREES");
  cmd_tune->add_option("--sample-size", tune.sample_size,
                       "subsample per tree (0 = min(25% of rows, 50000))")
      ->envname("DIFFRF_SAMPLE_SIZE");
  cmd_tune->add_option("--iterations", tune.iterations, "tuning iterations")
      ->envname("DIFFRF_ITERATIONS");
  cmd_tune->add_option("--height-factor", tune.height_factor, "height limit factor")
      ->envname("DIFFRF_HEIGHT_FACTOR");
  cmd_tune->add_option("--seed", tune.seed, "tuning seed")->envname("DIFFRF_SEED");
  cmd_tune->add_option("--threads", tune.threads, "worker threads")->envname("DIFFRF_THREADS");

  ScoreOpts score;
  auto* cmd_score = app.add_subcommand("score", "score a CSV with a saved model");
  cmd_score->add_option("model", score.model, "model file")->required();
  cmd_score->add_option("data", score.data, "data CSV")->required();
  cmd_score->add_option("--mode", score.mode, "pointwise | collective | frequency")
      ->check(CLI::IsMember({"pointwise", "collective", "frequency"}))
      ->envname("DIFFRF_MODE");
  cmd_score->add_option("--out", score.out, "output CSV (stdout when omitted)")
      ->envname("DIFFRF_OUT");
  cmd_score->add_option("--threads", score.threads, "worker threads")->envname("DIFFRF_THREADS");

  EvalOpts eval;
  auto* cmd_eval = app.add_subcommand("eval", "metrics for a score file against labels");
  cmd_eval->add_option("scores", eval.scores, "score CSV (instance_id,score)")->required();
  cmd_eval->add_option("labels", eval.labels, "CSV whose last column is the 0/1 label")
      ->required();
  cmd_eval->add_option("--out", eval.out, "write the ROC curve CSV here")->envname("DIFFRF_OUT");

  ExperimentOpts exp;
  auto* cmd_exp = app.add_subcommand("experiment", "scripted study reproductions");
  cmd_exp->add_option("name", exp.name, "donut | drift | flood | buckets")
      ->required()
      ->check(CLI::IsMember({"donut", "drift", "flood", "buckets"}));
  cmd_exp->add_option("--seed", exp.seed, "first of five consecutive seeds")
      ->envname("DIFFRF_SEED");
  cmd_exp->add_option("--threads", exp.threads, "worker threads")->envname("DIFFRF_THREADS");
  cmd_exp->add_option("--out", exp.out, "directory for reports and score dumps")
      ->envname("DIFFRF_OUT");
  cmd_exp->add_option("--drift-kind", exp.drift_kind, "translation | homothety | all")
      ->check(CLI::IsMember({"translation", "homothety", "all"}));
  cmd_exp->add_option("--magnitude", exp.magnitude, "drift magnitude (fraction)");
  cmd_exp->add_option("--traffic", exp.flood.traffic_count, "flood: traffic batch size");
  cmd_exp->add_option("--red-x", exp.flood.red_mean[0], "flood: attack cluster mean x");
  cmd_exp->add_option("--red-y", exp.flood.red_mean[1], "flood: attack cluster mean y");
  cmd_exp->add_option("--red-var", exp.flood.red_var, "flood: attack cluster variance");
  cmd_exp->add_option("--red-count", exp.flood.red_count, "flood: attack cluster size");
  cmd_exp->add_option("--flood-x", exp.flood.flood_mean[0], "flood: flood cluster mean x");
  cmd_exp->add_option("--flood-y", exp.flood.flood_mean[1], "flood: flood cluster mean y");
  cmd_exp->add_option("--flood-var", exp.flood.flood_var, "flood: flood cluster variance");
  cmd_exp->add_option("--flood-count", exp.flood.flood_count, "flood: flood cluster size");

  InspectOpts inspect;
  auto* cmd_inspect = app.add_subcommand("inspect", "print a saved model's metadata");
  cmd_inspect->add_option("model", inspect.model, "model file")->required();

  cmd_gen->callback([&] { run_gen(gen); });
  cmd_train->callback([&] { run_train(train); });
  cmd_tune->callback([&] { run_tune(tune); });
  cmd_score->callback([&] { run_score(score); });
  cmd_eval->callback([&] { run_eval(eval); });
  cmd_exp->callback([&] { run_experiment(exp); });
  cmd_inspect->callback([&] { run_inspect(inspect); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  } catch (const ModelError& e) {
    std::cerr << "model error: " << e.what() << "\n";
    return 3;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
