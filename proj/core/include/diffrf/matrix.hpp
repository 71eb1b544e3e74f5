#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace diffrf {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ModelError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Row-major n x d matrix of doubles.
struct DataMatrix {
  std::size_t rows = 0;
  std::size_t dims = 0;
  std::vector<double> v;

  DataMatrix() = default;
  DataMatrix(std::size_t r, std::size_t d) : rows(r), dims(d), v(r * d, 0.0) {}

  double* row(std::size_t i) { return v.data() + i * dims; }
  const double* row(std::size_t i) const { return v.data() + i * dims; }
  double& at(std::size_t i, std::size_t j) { return v[i * dims + j]; }
  double at(std::size_t i, std::size_t j) const { return v[i * dims + j]; }

  void append_row(const double* p) {
    v.insert(v.end(), p, p + dims);
    ++rows;
  }
};

// Vertical concatenation; all parts must share dims.
inline DataMatrix vstack(const std::vector<const DataMatrix*>& parts) {
  DataMatrix out;
  for (const auto* p : parts) {
    if (p->rows == 0) continue;
    if (out.dims == 0) out.dims = p->dims;
    if (p->dims != out.dims) throw DataError("vstack: dimension mismatch");
    out.v.insert(out.v.end(), p->v.begin(), p->v.end());
    out.rows += p->rows;
  }
  return out;
}

// Rows of `m` selected by index list.
inline DataMatrix take_rows(const DataMatrix& m, const std::vector<std::size_t>& idx) {
  DataMatrix out(0, m.dims);
  out.v.reserve(idx.size() * m.dims);
  for (std::size_t i : idx) out.append_row(m.row(i));
  return out;
}

struct LabeledDataset {
  DataMatrix features;
  std::vector<int> labels;           // 0 normal, 1 anomaly
  std::vector<std::string> groups;   // optional tags, empty or row-aligned
};

}  // namespace diffrf
