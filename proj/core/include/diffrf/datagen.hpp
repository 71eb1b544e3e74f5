#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "diffrf/matrix.hpp"

namespace diffrf {

// n points area-uniform over the annulus r_inner <= ||p|| <= r_outer:
// angle uniform in [0, 2pi), radius sqrt(u (r_o^2 - r_i^2) + r_i^2).
DataMatrix gen_torus(std::size_t n, double r_inner, double r_outer, std::uint64_t seed);
inline DataMatrix gen_torus(std::size_t n, std::uint64_t seed) {
  return gen_torus(n, 1.5, 4.0, seed);
}

// Axis-aligned Gaussian: independent per-dimension normals.
DataMatrix gen_gaussian_cluster(std::size_t n, const std::vector<double>& mean,
                                const std::vector<double>& diag_cov, std::uint64_t seed);

// 2-d annulus benchmark: 1000 train-normal, 1000 test-normal, 500 "red"
// anomalies N((3,3), 0.25 I) overlapping the rim, 500 "green" anomalies
// N(0, 0.5 I) in the hole. Groups: train-normal / test-normal / red / green.
LabeledDataset gen_donut(std::uint64_t seed);

// 5-d variant: dims 0-1 as gen_donut, dims 2-4 independent N(0, variance 0.2)
// noise; 2000 train-normal, 1000 test-normal, 750 red, 750 green.
LabeledDataset gen_donut25(std::uint64_t seed);

enum class DriftKind { translation, homothety };
DriftKind drift_kind_from_string(const std::string& name);

// translation: shift every row by magnitude * (per-dimension range of data).
// homothety: scale rows about the data centroid by (1 + magnitude).
DataMatrix apply_drift(const DataMatrix& data, DriftKind kind, double magnitude);

// CSV with header, feature columns first, optional "group" column, "label"
// last. Values round-trip exactly through save/load.
void save_csv(const std::string& path, const LabeledDataset& ds);
LabeledDataset load_csv(const std::string& path);

// Shuffle rows, first round(fraction * n) become train, rest test.
std::pair<DataMatrix, DataMatrix> split_train_test(const DataMatrix& normals, double fraction,
                                                   std::uint64_t seed);

// Convenience views over group tags.
std::vector<std::size_t> indices_with_group(const LabeledDataset& ds, const std::string& group);
DataMatrix training_view(const LabeledDataset& ds);  // group == train-normal
LabeledDataset test_view(const LabeledDataset& ds);  // everything else

}  // namespace diffrf
