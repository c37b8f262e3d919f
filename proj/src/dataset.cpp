#include "accentgram/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <stdexcept>

#include "accentgram/error.hpp"

namespace accentgram {

std::size_t GroupedData::count(int g) const {
  return static_cast<std::size_t>(std::count(group.begin(), group.end(), g));
}

std::vector<double> GroupedData::values(std::size_t feature, int g) const {
  std::vector<double> out;
  for (std::size_t i = 0; i < n(); ++i)
    if (group[i] == g) out.push_back(x(i, feature));
  return out;
}

GroupedData GroupedData::subset(const std::vector<std::size_t>& rows) const {
  GroupedData out;
  out.labels = labels;
  out.x = Matrix(rows.size(), n_features());
  out.group.reserve(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto src = x.row(rows[r]);
    std::copy(src.begin(), src.end(), out.x.row(r).begin());
    out.group.push_back(group[rows[r]]);
  }
  return out;
}

Dataset::Dataset(std::vector<SpeakerRecord> records) : records_(std::move(records)) {
  if (records_.empty()) throw InputError("dataset is empty");
  std::sort(records_.begin(), records_.end(),
            [](const SpeakerRecord& a, const SpeakerRecord& b) { return a.speaker_id < b.speaker_id; });
  std::set<std::string> groups;
  n_features_ = records_.front().features.size();
  if (n_features_ == 0) throw InputError("dataset has no feature columns");
  for (std::size_t i = 0; i < records_.size(); ++i) {
    const auto& r = records_[i];
    if (i > 0 && r.speaker_id == records_[i - 1].speaker_id) {
      throw InputError("duplicate speaker_id '" + r.speaker_id + "'");
    }
    if (r.features.size() != n_features_) {
      throw InputError("speaker '" + r.speaker_id + "' has a different number of features");
    }
    for (double v : r.features)
      if (!std::isfinite(v)) throw InputError("speaker '" + r.speaker_id + "' has a non-finite feature");
    groups.insert(r.group);
  }
  if (groups.size() != 2) {
    throw InputError("expected exactly 2 groups, found " + std::to_string(groups.size()));
  }
  labels_ = {*groups.begin(), *groups.rbegin()};
}

GroupedData Dataset::grouped() const {
  GroupedData g;
  g.labels = labels_;
  g.x = Matrix(records_.size(), n_features_);
  g.group.reserve(records_.size());
  for (std::size_t i = 0; i < records_.size(); ++i) {
    std::copy(records_[i].features.begin(), records_[i].features.end(), g.x.row(i).begin());
    g.group.push_back(records_[i].group == labels_[0] ? 0 : 1);
  }
  return g;
}

std::string feature_name(std::size_t one_based) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "mfcc_%02zu", one_based);
  return buf;
}

GroupedData make_grouped(const std::vector<std::vector<double>>& group_a,
                         const std::vector<std::vector<double>>& group_b, std::array<std::string, 2> labels) {
  if (group_a.empty() || group_b.empty()) throw std::invalid_argument("make_grouped: empty group");
  const std::size_t p = group_a.front().size();
  GroupedData g;
  g.labels = std::move(labels);
  g.x = Matrix(group_a.size() + group_b.size(), p);
  std::size_t r = 0;
  for (const auto* grp : {&group_a, &group_b}) {
    for (const auto& row : *grp) {
      if (row.size() != p) throw std::invalid_argument("make_grouped: ragged rows");
      std::copy(row.begin(), row.end(), g.x.row(r++).begin());
      g.group.push_back(grp == &group_a ? 0 : 1);
    }
  }
  return g;
}

}  // namespace accentgram
