#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "accentgram/linalg.hpp"

namespace accentgram {

/// One row of the analysis dataset: a speaker's mean-pooled MFCC vector.
struct SpeakerRecord {
  std::string speaker_id;
  std::string group;
  std::vector<double> features;  // features[0] is mfcc_01 (cepstral index 0)
};

/// Feature matrix with a two-level group factor. Group 0 is the
/// lexicographically smaller label.
struct GroupedData {
  Matrix x;                         // n_speakers × n_features
  std::vector<int> group;           // 0 or 1 per row
  std::array<std::string, 2> labels;

  std::size_t n() const { return x.rows(); }
  std::size_t n_features() const { return x.cols(); }
  std::size_t count(int g) const;
  /// Values of one feature (0-based column) for one group, in row order.
  std::vector<double> values(std::size_t feature, int g) const;
  /// Keeps only the given rows.
  GroupedData subset(const std::vector<std::size_t>& rows) const;
};

/// Validated collection of speaker records: unique ids, exactly two groups,
/// equal feature counts, finite values. Records are kept sorted by speaker_id.
class Dataset {
 public:
  explicit Dataset(std::vector<SpeakerRecord> records);

  const std::vector<SpeakerRecord>& records() const { return records_; }
  const std::array<std::string, 2>& labels() const { return labels_; }
  std::size_t n_features() const { return n_features_; }
  std::size_t size() const { return records_.size(); }

  GroupedData grouped() const;

 private:
  std::vector<SpeakerRecord> records_;
  std::array<std::string, 2> labels_;
  std::size_t n_features_ = 0;
};

/// "mfcc_01", "mfcc_02", ... for 1-based feature numbers.
std::string feature_name(std::size_t one_based);

/// Builds a GroupedData from explicit groups (tests and fixtures).
GroupedData make_grouped(const std::vector<std::vector<double>>& group_a,
                         const std::vector<std::vector<double>>& group_b,
                         std::array<std::string, 2> labels = {"A", "B"});

}  // namespace accentgram
