#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <set>
#include <string>
#include <vector>

#include "diffrf/datagen.hpp"
#include "diffrf/matrix.hpp"

using namespace diffrf;

namespace {

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / name;
}

double column_mean(const DataMatrix& m, std::size_t j) {
  double s = 0.0;
  for (std::size_t i = 0; i < m.rows; ++i) s += m.at(i, j);
  return s / static_cast<double>(m.rows);
}

double column_var(const DataMatrix& m, std::size_t j) {
  double mean = column_mean(m, j);
  double s = 0.0;
  for (std::size_t i = 0; i < m.rows; ++i) {
    double e = m.at(i, j) - mean;
    s += e * e;
  }
  return s / static_cast<double>(m.rows);
}

}  // namespace

TEST_CASE("annulus sample") {
  const std::size_t n = 10000;
  DataMatrix m = gen_torus(n, 1.5, 4.0, 777);
  REQUIRE(m.rows == n);
  REQUIRE(m.dims == 2);

  double mean_r = 0.0;
  std::vector<std::size_t> shell(10, 0), sector(12, 0);
  for (std::size_t i = 0; i < n; ++i) {
    double x = m.at(i, 0), y = m.at(i, 1);
    double r = std::hypot(x, y);
    REQUIRE(r >= 1.5);
    REQUIRE(r <= 4.0);
    mean_r += r;
    // equal-area shells: r_k = sqrt(r_i^2 + (k/10)(r_o^2 - r_i^2))
    double frac = (r * r - 2.25) / (16.0 - 2.25);
    ++shell[std::min<std::size_t>(static_cast<std::size_t>(frac * 10.0), 9)];
    double a = std::atan2(y, x) + std::numbers::pi;
    ++sector[std::min<std::size_t>(static_cast<std::size_t>(a / (2 * std::numbers::pi) * 12.0), 11)];
  }
  mean_r /= static_cast<double>(n);
  // area-uniform annulus: E[r] = (2/3)(r_o^3 - r_i^3)/(r_o^2 - r_i^2) = 2.9394
  CHECK(std::abs(mean_r - 2.9394) < 0.1);

  // chi-square against uniform occupancy, 1% critical values
  double chi_shell = 0.0;
  for (std::size_t c : shell) {
    double e = static_cast<double>(c) - 1000.0;
    chi_shell += e * e / 1000.0;
  }
  CHECK(chi_shell < 21.67);  // df 9

  double chi_sector = 0.0;
  for (std::size_t c : sector) {
    double diff = static_cast<double>(c) - n / 12.0;
    chi_sector += diff * diff / (n / 12.0);
  }
  CHECK(chi_sector < 24.73);  // df 11

  CHECK(gen_torus(100, 1.5, 4.0, 1).v != gen_torus(100, 1.5, 4.0, 2).v);
  CHECK(gen_torus(100, 1.5, 4.0, 3).v == gen_torus(100, 1.5, 4.0, 3).v);
}

TEST_CASE("gaussian cluster moments") {
  const std::size_t n = 20000;
  DataMatrix m = gen_gaussian_cluster(n, {1.0, -2.0}, {4.0, 0.25}, 778);
  REQUIRE(m.rows == n);
  REQUIRE(m.dims == 2);
  // 4-sigma bounds on the sample moments
  CHECK(std::abs(column_mean(m, 0) - 1.0) < 4.0 * std::sqrt(4.0 / n));
  CHECK(std::abs(column_mean(m, 1) + 2.0) < 4.0 * std::sqrt(0.25 / n));
  CHECK(std::abs(column_var(m, 0) - 4.0) < 4.0 * 4.0 * std::sqrt(2.0 / n));
  CHECK(std::abs(column_var(m, 1) - 0.25) < 4.0 * 0.25 * std::sqrt(2.0 / n));
}

TEST_CASE("donut dataset layout") {
  LabeledDataset ds = gen_donut(31);
  REQUIRE(ds.features.dims == 2);
  REQUIRE(ds.features.rows == 3000);
  REQUIRE(ds.labels.size() == 3000);
  REQUIRE(ds.groups.size() == 3000);

  auto train = indices_with_group(ds, "train-normal");
  auto testn = indices_with_group(ds, "test-normal");
  auto red = indices_with_group(ds, "red");
  auto green = indices_with_group(ds, "green");
  CHECK(train.size() == 1000);
  CHECK(testn.size() == 1000);
  CHECK(red.size() == 500);
  CHECK(green.size() == 500);

  for (std::size_t i : train) CHECK(ds.labels[i] == 0);
  for (std::size_t i : testn) CHECK(ds.labels[i] == 0);
  for (std::size_t i : red) CHECK(ds.labels[i] == 1);
  for (std::size_t i : green) CHECK(ds.labels[i] == 1);

  // normals live on the annulus
  for (std::size_t i : train) {
    double r = std::hypot(ds.features.at(i, 0), ds.features.at(i, 1));
    CHECK(r >= 1.5);
    CHECK(r <= 4.0);
  }
  // red cluster at (3,3), green cluster at the origin
  double rx = 0, ry = 0, gx = 0, gy = 0;
  for (std::size_t i : red) {
    rx += ds.features.at(i, 0);
    ry += ds.features.at(i, 1);
  }
  for (std::size_t i : green) {
    gx += ds.features.at(i, 0);
    gy += ds.features.at(i, 1);
  }
  CHECK(std::abs(rx / 500 - 3.0) < 0.1);
  CHECK(std::abs(ry / 500 - 3.0) < 0.1);
  CHECK(std::abs(gx / 500) < 0.14);
  CHECK(std::abs(gy / 500) < 0.14);

  DataMatrix tv = training_view(ds);
  CHECK(tv.rows == 1000);
  LabeledDataset rest = test_view(ds);
  CHECK(rest.features.rows == 2000);
  std::size_t anomalies = 0;
  for (int l : rest.labels) anomalies += l;
  CHECK(anomalies == 1000);
}

TEST_CASE("noisy 5-d donut") {
  LabeledDataset ds = gen_donut25(32);
  REQUIRE(ds.features.dims == 5);
  REQUIRE(ds.features.rows == 2000 + 1000 + 750 + 750);
  CHECK(indices_with_group(ds, "train-normal").size() == 2000);
  CHECK(indices_with_group(ds, "test-normal").size() == 1000);
  CHECK(indices_with_group(ds, "red").size() == 750);
  CHECK(indices_with_group(ds, "green").size() == 750);
  for (std::size_t j = 2; j < 5; ++j) {
    CHECK(std::abs(column_mean(ds.features, j)) < 0.03);
    CHECK(std::abs(column_var(ds.features, j) - 0.2) < 0.03);
  }
}

TEST_CASE("drift transforms") {
  DataMatrix m = gen_torus(500, 1.5, 4.0, 33);

  SUBCASE("zero magnitude is identity") {
    CHECK(apply_drift(m, DriftKind::translation, 0.0).v == m.v);
    CHECK(apply_drift(m, DriftKind::homothety, 0.0).v == m.v);
  }
  SUBCASE("translation shifts by a fraction of the range") {
    std::vector<double> range(2);
    for (std::size_t j = 0; j < 2; ++j) {
      double mn = m.at(0, j), mx = mn;
      for (std::size_t i = 1; i < m.rows; ++i) {
        mn = std::min(mn, m.at(i, j));
        mx = std::max(mx, m.at(i, j));
      }
      range[j] = mx - mn;
    }
    DataMatrix out = apply_drift(m, DriftKind::translation, 0.04);
    for (std::size_t i = 0; i < m.rows; ++i)
      for (std::size_t j = 0; j < 2; ++j)
        CHECK(out.at(i, j) == doctest::Approx(m.at(i, j) + 0.04 * range[j]).epsilon(1e-12));
  }
  SUBCASE("homothety scales about the centroid") {
    std::vector<double> centroid = {column_mean(m, 0), column_mean(m, 1)};
    DataMatrix out = apply_drift(m, DriftKind::homothety, 0.04);
    for (std::size_t i = 0; i < m.rows; ++i)
      for (std::size_t j = 0; j < 2; ++j)
        CHECK(out.at(i, j) ==
              doctest::Approx(centroid[j] + (m.at(i, j) - centroid[j]) * 1.04).epsilon(1e-9));
    // the centroid itself is a fixed point, so applying +4% twice compounds
    DataMatrix twice = apply_drift(out, DriftKind::homothety, 0.04);
    for (std::size_t i = 0; i < m.rows; ++i)
      CHECK(twice.at(i, 0) ==
            doctest::Approx(centroid[0] + (m.at(i, 0) - centroid[0]) * 1.0816).epsilon(1e-9));
    // shrink
    DataMatrix down = apply_drift(m, DriftKind::homothety, -0.04);
    CHECK(down.at(0, 0) ==
          doctest::Approx(centroid[0] + (m.at(0, 0) - centroid[0]) * 0.96).epsilon(1e-9));
  }
  SUBCASE("kind parsing") {
    CHECK(drift_kind_from_string("translation") == DriftKind::translation);
    CHECK(drift_kind_from_string("homothety") == DriftKind::homothety);
    CHECK_THROWS_AS(drift_kind_from_string("spin"), ConfigError);
  }
}

TEST_CASE("csv round trip") {
  LabeledDataset ds;
  ds.features = DataMatrix(4, 2);
  ds.features.at(0, 0) = 0.1;
  ds.features.at(0, 1) = -1.5e-17;
  ds.features.at(1, 0) = 12345678.9012345;
  ds.features.at(1, 1) = -0.0;
  ds.features.at(2, 0) = 2.2250738585072014e-308;
  ds.features.at(2, 1) = 1.7976931348623157e308;
  ds.features.at(3, 0) = 0.30000000000000004;
  ds.features.at(3, 1) = 3.0;
  ds.labels = {0, 1, 0, 1};
  ds.groups = {"a", "b", "a", "c"};

  auto path = temp_file("diffrf_roundtrip.csv");
  save_csv(path.string(), ds);
  LabeledDataset back = load_csv(path.string());
  CHECK(back.features.v == ds.features.v);
  CHECK(back.labels == ds.labels);
  CHECK(back.groups == ds.groups);

  SUBCASE("without groups") {
    ds.groups.clear();
    save_csv(path.string(), ds);
    LabeledDataset plain = load_csv(path.string());
    CHECK(plain.features.v == ds.features.v);
    CHECK(plain.groups.empty());
  }
  std::filesystem::remove(path);
}

TEST_CASE("csv loader rejects malformed input") {
  auto path = temp_file("diffrf_bad.csv");

  SUBCASE("missing file") {
    CHECK_THROWS_AS(load_csv("/nonexistent/nope.csv"), DataError);
  }
  SUBCASE("non-numeric cell names the position") {
    std::ofstream(path.string()) << "f0,f1,label\n1,2,0\n1,oops,1\n";
    CHECK_THROWS_WITH_AS(load_csv(path.string()),
                         doctest::Contains("line 3"), DataError);
  }
  SUBCASE("non-finite value rejected") {
    std::ofstream(path.string()) << "f0,label\n1,0\nnan,1\n";
    CHECK_THROWS_AS(load_csv(path.string()), DataError);
  }
  SUBCASE("infinite value rejected") {
    std::ofstream(path.string()) << "f0,label\n1,0\ninf,1\n";
    CHECK_THROWS_AS(load_csv(path.string()), DataError);
  }
  SUBCASE("bad label value") {
    std::ofstream(path.string()) << "f0,label\n1,0\n2,7\n";
    CHECK_THROWS_AS(load_csv(path.string()), DataError);
  }
  SUBCASE("ragged row") {
    std::ofstream(path.string()) << "f0,f1,label\n1,2,0\n1,0\n";
    CHECK_THROWS_WITH_AS(load_csv(path.string()),
                         doctest::Contains("line 3"), DataError);
  }
  std::filesystem::remove(path);
}

TEST_CASE("train/test split") {
  DataMatrix m(100, 1);
  for (std::size_t i = 0; i < 100; ++i) m.at(i, 0) = static_cast<double>(i);
  auto [train, test] = split_train_test(m, 0.8, 55);
  CHECK(train.rows == 80);
  CHECK(test.rows == 20);
  std::set<double> seen;
  for (std::size_t i = 0; i < train.rows; ++i) seen.insert(train.at(i, 0));
  for (std::size_t i = 0; i < test.rows; ++i) seen.insert(test.at(i, 0));
  CHECK(seen.size() == 100);

  auto [t2, s2] = split_train_test(m, 0.8, 55);
  CHECK(t2.v == train.v);
}
