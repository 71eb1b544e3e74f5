#include "diffrf/model_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include <json.hpp>

namespace diffrf {

using nlohmann::json;

TrainFingerprint fingerprint_data(const DataMatrix& m) {
  std::uint64_t h = 1469598103934665603ULL;
  const unsigned char* bytes = reinterpret_cast<const unsigned char*>(m.v.data());
  std::size_t n = m.v.size() * sizeof(double);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= bytes[i];
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  TrainFingerprint fp;
  fp.rows = m.rows;
  fp.dims = m.dims;
  fp.hash = buf;
  return fp;
}

namespace {

json config_to_json(const ForestConfig& c) {
  return json{{"trees", c.trees},
              {"sample_size", c.sample_size},
              {"alpha", c.alpha},
              {"height_factor", c.height_factor},
              {"seed", c.seed},
              {"threads", c.threads}};
}

ForestConfig config_from_json(const json& j) {
  ForestConfig c;
  c.trees = j.at("trees").get<std::size_t>();
  c.sample_size = j.at("sample_size").get<std::size_t>();
  c.alpha = j.at("alpha").get<double>();
  c.height_factor = j.at("height_factor").get<double>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.threads = j.at("threads").get<unsigned>();
  return c;
}

json tree_to_json(const Tree& t) {
  json j;
  auto& q = j["q"] = json::array();
  auto& p = j["p"] = json::array();
  auto& l = j["left"] = json::array();
  auto& r = j["right"] = json::array();
  auto& leaf = j["leaf"] = json::array();
  for (const auto& n : t.nodes) {
    q.push_back(n.q);
    p.push_back(n.p);
    l.push_back(n.left);
    r.push_back(n.right);
    leaf.push_back(n.leaf);
  }
  j["centroids"] = t.centroids;
  j["sigma"] = t.sigma;
  j["fn"] = t.fn;
  j["counts"] = t.counts;
  j["depths"] = t.depths;
  return j;
}

json isotree_to_json(const IsoTree& t) {
  json j;
  auto& q = j["q"] = json::array();
  auto& p = j["p"] = json::array();
  auto& l = j["left"] = json::array();
  auto& r = j["right"] = json::array();
  auto& s = j["size"] = json::array();
  auto& d = j["depth"] = json::array();
  for (const auto& n : t.nodes) {
    q.push_back(n.q);
    p.push_back(n.p);
    l.push_back(n.left);
    r.push_back(n.right);
    s.push_back(n.size);
    d.push_back(n.depth);
  }
  return j;
}

[[noreturn]] void invariant_error(const std::string& what) {
  throw ModelError("model invariant violated: " + what);
}

// Children must come after their parent, so traversal always terminates.
void check_topology(std::size_t count, const std::vector<std::int32_t>& left,
                    const std::vector<std::int32_t>& right,
                    const std::vector<char>& is_internal) {
  for (std::size_t i = 0; i < count; ++i) {
    if (!is_internal[i]) continue;
    auto lo = static_cast<std::int64_t>(i);
    if (left[i] <= lo || right[i] <= lo || left[i] >= static_cast<std::int64_t>(count) ||
        right[i] >= static_cast<std::int64_t>(count))
      invariant_error("node children out of order");
  }
}

Tree tree_from_json(const json& j, std::size_t dims, std::size_t h_max) {
  Tree t;
  auto q = j.at("q").get<std::vector<std::int32_t>>();
  auto p = j.at("p").get<std::vector<double>>();
  auto left = j.at("left").get<std::vector<std::int32_t>>();
  auto right = j.at("right").get<std::vector<std::int32_t>>();
  auto leaf = j.at("leaf").get<std::vector<std::int32_t>>();
  std::size_t n = q.size();
  if (n == 0 || p.size() != n || left.size() != n || right.size() != n || leaf.size() != n)
    invariant_error("node array lengths disagree");
  t.centroids = j.at("centroids").get<std::vector<double>>();
  t.sigma = j.at("sigma").get<std::vector<double>>();
  t.fn = j.at("fn").get<std::vector<double>>();
  t.counts = j.at("counts").get<std::vector<std::uint32_t>>();
  t.depths = j.at("depths").get<std::vector<std::uint32_t>>();
  std::size_t leaves = t.fn.size();
  if (leaves == 0 || t.sigma.size() != leaves || t.counts.size() != leaves ||
      t.depths.size() != leaves || t.centroids.size() != leaves * dims)
    invariant_error("leaf array lengths disagree");

  std::vector<char> is_internal(n, 0);
  std::size_t leaf_nodes = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (leaf[i] >= 0) {
      if (static_cast<std::size_t>(leaf[i]) >= leaves) invariant_error("leaf index out of range");
      ++leaf_nodes;
    } else {
      is_internal[i] = 1;
      if (q[i] < 0 || static_cast<std::size_t>(q[i]) >= dims)
        invariant_error("split dimension out of range");
    }
  }
  if (leaf_nodes != leaves) invariant_error("leaf node count does not match payloads");
  check_topology(n, left, right, is_internal);

  double fn_sum = 0.0;
  for (std::size_t i = 0; i < leaves; ++i) {
    fn_sum += t.fn[i];
    if (t.counts[i] < 1) invariant_error("leaf with zero training instances");
    if (!(t.sigma[i] > 0.0)) invariant_error("non-positive leaf deviation");
    if (t.depths[i] > h_max) invariant_error("leaf deeper than height bound");
  }
  if (std::abs(fn_sum - 1.0) > 1e-9) invariant_error("leaf frequencies do not sum to 1");

  t.nodes.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    t.nodes[i].q = q[i];
    t.nodes[i].p = p[i];
    t.nodes[i].left = left[i];
    t.nodes[i].right = right[i];
    t.nodes[i].leaf = leaf[i];
  }
  return t;
}

IsoTree isotree_from_json(const json& j, std::size_t dims, std::size_t h_max, std::size_t psi) {
  IsoTree t;
  auto q = j.at("q").get<std::vector<std::int32_t>>();
  auto p = j.at("p").get<std::vector<double>>();
  auto left = j.at("left").get<std::vector<std::int32_t>>();
  auto right = j.at("right").get<std::vector<std::int32_t>>();
  auto size = j.at("size").get<std::vector<std::int32_t>>();
  auto depth = j.at("depth").get<std::vector<std::int32_t>>();
  std::size_t n = q.size();
  if (n == 0 || p.size() != n || left.size() != n || right.size() != n || size.size() != n ||
      depth.size() != n)
    invariant_error("node array lengths disagree");
  std::vector<char> is_internal(n, 0);
  std::int64_t leaf_total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (size[i] > 0) {
      leaf_total += size[i];
      if (static_cast<std::size_t>(depth[i]) > h_max) invariant_error("leaf deeper than height bound");
    } else {
      is_internal[i] = 1;
      if (q[i] < 0 || static_cast<std::size_t>(q[i]) >= dims)
        invariant_error("split dimension out of range");
    }
  }
  if (leaf_total != static_cast<std::int64_t>(psi))
    invariant_error("leaf sizes do not sum to sample size");
  check_topology(n, left, right, is_internal);
  t.nodes.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    t.nodes[i].q = q[i];
    t.nodes[i].p = p[i];
    t.nodes[i].left = left[i];
    t.nodes[i].right = right[i];
    t.nodes[i].size = size[i];
    t.nodes[i].depth = depth[i];
  }
  return t;
}

}  // namespace

void save_model(const ModelFile& model, const std::string& path) {
  json j;
  j["format"] = "diffrf-model";
  j["version"] = kModelVersion;
  j["kind"] = model.kind;
  j["alpha_tuned"] = model.alpha_tuned;
  j["train_fingerprint"] = {{"rows", model.fingerprint.rows},
                            {"dims", model.fingerprint.dims},
                            {"hash", model.fingerprint.hash}};
  if (model.kind == "diff-rf") {
    j["dims"] = model.forest.dims;
    j["h_max"] = model.forest.h_max;
    j["config"] = config_to_json(model.forest.config);
    auto& trees = j["trees"] = json::array();
    for (const auto& t : model.forest.trees) trees.push_back(tree_to_json(t));
  } else if (model.kind == "iforest") {
    j["dims"] = model.iforest.dims;
    j["h_max"] = model.iforest.h_max;
    j["psi"] = model.iforest.psi;
    j["seed"] = model.iforest.seed;
    auto& trees = j["trees"] = json::array();
    for (const auto& t : model.iforest.trees) trees.push_back(isotree_to_json(t));
  } else {
    throw ModelError("save_model: unknown detector kind '" + model.kind + "'");
  }
  std::ofstream out(path);
  if (!out) throw ModelError("save_model: cannot open " + path);
  out << j.dump();
  out << "\n";
  if (!out) throw ModelError("save_model: write failed for " + path);
}

ModelFile load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ModelError("load_model: cannot open " + path);
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded()) throw ModelError("load_model: corrupt model file " + path);
  try {
    if (!j.is_object() || j.value("format", "") != "diffrf-model")
      throw ModelError("load_model: corrupt model file " + path);
    int version = j.value("version", -1);
    if (version != kModelVersion)
      throw ModelError("load_model: version mismatch: file has " + std::to_string(version) +
                       ", expected " + std::to_string(kModelVersion));
    ModelFile m;
    m.kind = j.at("kind").get<std::string>();
    m.alpha_tuned = j.value("alpha_tuned", false);
    const auto& fp = j.at("train_fingerprint");
    m.fingerprint.rows = fp.at("rows").get<std::uint64_t>();
    m.fingerprint.dims = fp.at("dims").get<std::uint64_t>();
    m.fingerprint.hash = fp.at("hash").get<std::string>();
    if (m.kind == "diff-rf") {
      m.forest.dims = j.at("dims").get<std::size_t>();
      m.forest.h_max = j.at("h_max").get<std::size_t>();
      m.forest.config = config_from_json(j.at("config"));
      for (const auto& tj : j.at("trees"))
        m.forest.trees.push_back(tree_from_json(tj, m.forest.dims, m.forest.h_max));
      if (m.forest.trees.empty()) throw ModelError("model invariant violated: no trees");
    } else if (m.kind == "iforest") {
      m.iforest.dims = j.at("dims").get<std::size_t>();
      m.iforest.h_max = j.at("h_max").get<std::size_t>();
      m.iforest.psi = j.at("psi").get<std::size_t>();
      m.iforest.seed = j.at("seed").get<std::uint64_t>();
      for (const auto& tj : j.at("trees"))
        m.iforest.trees.push_back(isotree_from_json(tj, m.iforest.dims, m.iforest.h_max,
                                                    m.iforest.psi));
      if (m.iforest.trees.empty()) throw ModelError("model invariant violated: no trees");
    } else {
      throw ModelError("load_model: unknown detector kind '" + m.kind + "'");
    }
    return m;
  } catch (const json::exception& e) {
    throw ModelError("load_model: corrupt model file " + path + ": " + e.what());
  }
}

}  // namespace diffrf
