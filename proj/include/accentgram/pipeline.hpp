#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "accentgram/dataset.hpp"
#include "accentgram/mfcc.hpp"
#include "accentgram/reports.hpp"

namespace accentgram::pipeline {

namespace fs = std::filesystem;

struct ManifestRow {
  fs::path path;  // resolved
  std::string group;
  std::string speaker_id;
};

struct Manifest {
  std::vector<ManifestRow> rows;
};

/// CSV with header exactly `path,group,speaker_id`. Relative paths are
/// resolved against `audio_root` (or the manifest's directory when empty).
Manifest load_manifest(const fs::path& path, const fs::path& audio_root = {});

struct RunConfig {
  dsp::MfccConfig mfcc;
  double alpha = 0.05;
  std::uint64_t seed = 42;
  double test_fraction = 0.30;
  int n_trees = 500;
  std::vector<std::size_t> reduced_features{1, 2, 5};
  std::size_t repeats = 1;
  bool keep_going = false;
  int threads = 0;
  fs::path manifest;
  fs::path audio_root;
  fs::path out_dir = "out";
  fs::path features_csv;  // defaults to out_dir/features.csv

  fs::path features_path() const { return features_csv.empty() ? out_dir / "features.csv" : features_csv; }
  void validate() const;
  report::Json to_json() const;
};

struct ExtractFailure {
  std::string speaker_id;
  std::string path;
  std::string error;
};

struct ExtractOutcome {
  std::vector<SpeakerRecord> records;
  std::vector<ExtractFailure> failures;
};

/// MFCC extraction + mean pooling for every manifest row, in parallel.
/// Without keep_going, the first failure (in manifest order) is rethrown.
ExtractOutcome extract_features(const Manifest& manifest, const RunConfig& cfg);

/// Each stage writes its artifacts into cfg.out_dir and returns the paths written.
std::vector<fs::path> cmd_extract(const RunConfig& cfg);
std::vector<fs::path> cmd_stats(const RunConfig& cfg);
std::vector<fs::path> cmd_manova(const RunConfig& cfg);
std::vector<fs::path> cmd_cda(const RunConfig& cfg);
std::vector<fs::path> cmd_classify(const RunConfig& cfg);
std::vector<fs::path> cmd_plot(const RunConfig& cfg);

/// extract → stats → manova → cda → classify → plot, fail-fast. Artifacts from
/// an earlier run are removed first so a failed stage leaves nothing stale downstream.
std::vector<fs::path> cmd_all(const RunConfig& cfg);

/// Writes run.json describing one CLI invocation.
void write_run_metadata(const RunConfig& cfg, const std::string& command, const report::Json& stages);

}  // namespace accentgram::pipeline
