#pragma once

#include <cstdint>
#include <string>

#include "diffrf/forest.hpp"
#include "diffrf/iforest.hpp"
#include "diffrf/matrix.hpp"

namespace diffrf {

struct TrainFingerprint {
  std::uint64_t rows = 0;
  std::uint64_t dims = 0;
  std::string hash;  // FNV-1a 64 over the raw value bytes, hex
};

TrainFingerprint fingerprint_data(const DataMatrix& m);

// On-disk model, format "diffrf-model" version 1. Exactly one of forest /
// iforest is populated, per `kind`.
struct ModelFile {
  std::string kind;  // diff-rf | iforest
  bool alpha_tuned = false;
  TrainFingerprint fingerprint;
  Forest forest;
  IsoForest iforest;
};

constexpr int kModelVersion = 1;

void save_model(const ModelFile& model, const std::string& path);

// Rejects unreadable/corrupt files and version mismatches with distinct
// messages; verifies structural invariants (child ordering, leaf frequency
// sums, depth bounds, positive counts and sigmas) before returning.
ModelFile load_model(const std::string& path);

}  // namespace diffrf
