#include "diffrf/datagen.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "diffrf/rng.hpp"

namespace diffrf {

DataMatrix gen_torus(std::size_t n, double r_inner, double r_outer, std::uint64_t seed) {
  if (n < 1) throw ConfigError("gen_torus: n must be >= 1");
  if (!(0.0 < r_inner && r_inner < r_outer))
    throw ConfigError("gen_torus: need 0 < r_inner < r_outer");
  Rng rng(seed);
  DataMatrix out(n, 2);
  double lo2 = r_inner * r_inner, hi2 = r_outer * r_outer;
  for (std::size_t i = 0; i < n; ++i) {
    double angle = rng.uniform01() * 2.0 * std::numbers::pi;
    double r = std::sqrt(rng.uniform01() * (hi2 - lo2) + lo2);
    out.at(i, 0) = r * std::cos(angle);
    out.at(i, 1) = r * std::sin(angle);
  }
  return out;
}

DataMatrix gen_gaussian_cluster(std::size_t n, const std::vector<double>& mean,
                                const std::vector<double>& diag_cov, std::uint64_t seed) {
  if (mean.empty() || mean.size() != diag_cov.size())
    throw ConfigError("gen_gaussian_cluster: mean/cov size mismatch");
  for (double c : diag_cov)
    if (!(c > 0.0)) throw ConfigError("gen_gaussian_cluster: covariance entries must be > 0");
  Rng rng(seed);
  std::size_t d = mean.size();
  std::vector<double> sd(d);
  for (std::size_t j = 0; j < d; ++j) sd[j] = std::sqrt(diag_cov[j]);
  DataMatrix out(n, d);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) out.at(i, j) = mean[j] + sd[j] * rng.normal();
  return out;
}

namespace {

void append_part(LabeledDataset& ds, const DataMatrix& part, int label, const std::string& group) {
  if (ds.features.dims == 0) ds.features.dims = part.dims;
  for (std::size_t i = 0; i < part.rows; ++i) {
    ds.features.append_row(part.row(i));
    ds.labels.push_back(label);
    ds.groups.push_back(group);
  }
}

// The four donut pieces in fixed order, with independent derived streams.
// The salt keeps these streams disjoint from forest tree streams built with
// the same user seed.
LabeledDataset donut_pieces(std::uint64_t seed, std::size_t n_train, std::size_t n_test,
                            std::size_t n_red, std::size_t n_green) {
  std::uint64_t base = splitmix64(seed ^ 0x646f6e7574ULL);
  LabeledDataset ds;
  append_part(ds, gen_torus(n_train, base + 0), 0, "train-normal");
  append_part(ds, gen_torus(n_test, base + 1), 0, "test-normal");
  append_part(ds, gen_gaussian_cluster(n_red, {3.0, 3.0}, {0.25, 0.25}, base + 2), 1, "red");
  append_part(ds, gen_gaussian_cluster(n_green, {0.0, 0.0}, {0.5, 0.5}, base + 3), 1, "green");
  return ds;
}

}  // namespace

LabeledDataset gen_donut(std::uint64_t seed) { return donut_pieces(seed, 1000, 1000, 500, 500); }

LabeledDataset gen_donut25(std::uint64_t seed) {
  LabeledDataset flat = donut_pieces(seed, 2000, 1000, 750, 750);
  Rng noise(splitmix64(seed ^ 0x646f6e7574ULL) + 16);
  const double sd = std::sqrt(0.2);
  LabeledDataset ds;
  ds.features = DataMatrix(flat.features.rows, 5);
  ds.labels = flat.labels;
  ds.groups = flat.groups;
  for (std::size_t i = 0; i < flat.features.rows; ++i) {
    ds.features.at(i, 0) = flat.features.at(i, 0);
    ds.features.at(i, 1) = flat.features.at(i, 1);
    for (std::size_t j = 2; j < 5; ++j) ds.features.at(i, j) = sd * noise.normal();
  }
  return ds;
}

DriftKind drift_kind_from_string(const std::string& name) {
  if (name == "translation") return DriftKind::translation;
  if (name == "homothety") return DriftKind::homothety;
  throw ConfigError("unknown drift kind: " + name);
}

DataMatrix apply_drift(const DataMatrix& data, DriftKind kind, double magnitude) {
  if (!(magnitude >= -1.0)) throw ConfigError("apply_drift: magnitude must be >= -1");
  DataMatrix out = data;
  if (data.rows == 0 || magnitude == 0.0) return out;
  if (kind == DriftKind::translation) {
    for (std::size_t j = 0; j < data.dims; ++j) {
      double lo = data.at(0, j), hi = lo;
      for (std::size_t i = 1; i < data.rows; ++i) {
        lo = std::min(lo, data.at(i, j));
        hi = std::max(hi, data.at(i, j));
      }
      double offset = magnitude * (hi - lo);
      for (std::size_t i = 0; i < data.rows; ++i) out.at(i, j) += offset;
    }
  } else {
    std::vector<double> centroid(data.dims, 0.0);
    for (std::size_t i = 0; i < data.rows; ++i)
      for (std::size_t j = 0; j < data.dims; ++j) centroid[j] += data.at(i, j);
    for (double& c : centroid) c /= static_cast<double>(data.rows);
    double scale = 1.0 + magnitude;
    for (std::size_t i = 0; i < data.rows; ++i)
      for (std::size_t j = 0; j < data.dims; ++j)
        out.at(i, j) = centroid[j] + scale * (data.at(i, j) - centroid[j]);
  }
  return out;
}

namespace {

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      cells.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  cells.push_back(cur);
  return cells;
}

}  // namespace

void save_csv(const std::string& path, const LabeledDataset& ds) {
  if (!ds.groups.empty() && ds.groups.size() != ds.features.rows)
    throw DataError("save_csv: group count does not match rows");
  if (ds.labels.size() != ds.features.rows)
    throw DataError("save_csv: label count does not match rows");
  std::ofstream out(path);
  if (!out) throw DataError("save_csv: cannot open " + path);
  for (std::size_t j = 0; j < ds.features.dims; ++j) out << "f" << j << ",";
  if (!ds.groups.empty()) out << "group,";
  out << "label\n";
  for (std::size_t i = 0; i < ds.features.rows; ++i) {
    for (std::size_t j = 0; j < ds.features.dims; ++j)
      out << format_double(ds.features.at(i, j)) << ",";
    if (!ds.groups.empty()) out << ds.groups[i] << ",";
    out << ds.labels[i] << "\n";
  }
  if (!out) throw DataError("save_csv: write failed for " + path);
}

LabeledDataset load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("load_csv: cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw DataError("load_csv: empty file " + path);
  auto header = split_line(line);
  if (header.size() < 2) throw DataError("load_csv: header needs at least one feature and label");
  std::ptrdiff_t group_col = -1;
  for (std::size_t j = 0; j + 1 < header.size(); ++j)
    if (header[j] == "group") group_col = static_cast<std::ptrdiff_t>(j);
  std::size_t n_cols = header.size();
  std::size_t n_features = n_cols - 1 - (group_col >= 0 ? 1 : 0);
  if (n_features == 0) throw DataError("load_csv: no feature columns");

  LabeledDataset ds;
  ds.features.dims = n_features;
  std::vector<double> row(n_features);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto cells = split_line(line);
    if (cells.size() != n_cols)
      throw DataError("load_csv: line " + std::to_string(line_no) + ": expected " +
                      std::to_string(n_cols) + " columns, got " + std::to_string(cells.size()));
    std::size_t f = 0;
    for (std::size_t j = 0; j < n_cols; ++j) {
      if (static_cast<std::ptrdiff_t>(j) == group_col) {
        ds.groups.push_back(cells[j]);
        continue;
      }
      if (j == n_cols - 1) {
        if (cells[j] == "0")
          ds.labels.push_back(0);
        else if (cells[j] == "1")
          ds.labels.push_back(1);
        else
          throw DataError("load_csv: line " + std::to_string(line_no) +
                          ": label must be 0 or 1, got '" + cells[j] + "'");
        continue;
      }
      double value = 0.0;
      const char* b = cells[j].data();
      const char* e = b + cells[j].size();
      auto res = std::from_chars(b, e, value);
      if (res.ec != std::errc() || res.ptr != e)
        throw DataError("load_csv: line " + std::to_string(line_no) + ", column " +
                        std::to_string(j + 1) + ": not a number: '" + cells[j] + "'");
      if (!std::isfinite(value))
        throw DataError("load_csv: line " + std::to_string(line_no) + ", column " +
                        std::to_string(j + 1) + ": non-finite value rejected");
      row[f++] = value;
    }
    ds.features.append_row(row.data());
  }
  if (group_col < 0) ds.groups.clear();
  return ds;
}

std::pair<DataMatrix, DataMatrix> split_train_test(const DataMatrix& normals, double fraction,
                                                   std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0))
    throw ConfigError("split_train_test: fraction must be in (0, 1)");
  Rng rng(seed ^ 0x73706c6974ULL);
  auto perm = rng.sample_indices(normals.rows, normals.rows);
  std::size_t k = static_cast<std::size_t>(
      std::llround(fraction * static_cast<double>(normals.rows)));
  k = std::min(k, normals.rows);
  std::vector<std::size_t> head(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(k));
  std::vector<std::size_t> tail(perm.begin() + static_cast<std::ptrdiff_t>(k), perm.end());
  return {take_rows(normals, head), take_rows(normals, tail)};
}

std::vector<std::size_t> indices_with_group(const LabeledDataset& ds, const std::string& group) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < ds.groups.size(); ++i)
    if (ds.groups[i] == group) idx.push_back(i);
  return idx;
}

DataMatrix training_view(const LabeledDataset& ds) {
  return take_rows(ds.features, indices_with_group(ds, "train-normal"));
}

LabeledDataset test_view(const LabeledDataset& ds) {
  LabeledDataset out;
  out.features.dims = ds.features.dims;
  for (std::size_t i = 0; i < ds.features.rows; ++i) {
    if (i < ds.groups.size() && ds.groups[i] == "train-normal") continue;
    out.features.append_row(ds.features.row(i));
    out.labels.push_back(ds.labels[i]);
    out.groups.push_back(i < ds.groups.size() ? ds.groups[i] : "");
  }
  return out;
}

}  // namespace diffrf
