#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "accentgram/dataset.hpp"
#include "accentgram/evaluation.hpp"
#include "accentgram/multivariate.hpp"
#include "accentgram/univariate.hpp"
#include "json.hpp"

namespace accentgram::report {

using Json = nlohmann::ordered_json;

/// Splits one CSV record; handles double-quoted fields with "" escapes.
std::vector<std::string> split_csv_line(std::string_view line);
std::string csv_escape(std::string_view field);

/// Fixed 6-decimal CSV formatting; NaN is written as "nan".
std::string fixed6(double v);
/// Rounds to 9 significant digits for JSON output. Non-finite → null.
Json json_number(double v);

/// Writes via a temporary file and rename, so readers never see partial files.
void write_text_atomic(const std::filesystem::path& path, const std::string& content);
std::string read_text(const std::filesystem::path& path);

// features.csv: speaker_id,group,mfcc_01,...; rows sorted by speaker_id
std::string format_features_csv(const Dataset& data);
Dataset parse_features_csv(const std::string& text, const std::string& source);
Dataset read_features_csv(const std::filesystem::path& path);

std::string format_table1_csv(const stats::Table1& table);
std::string format_assumptions_csv(const stats::Table1& table);

Json manova_json(const mv::ManovaResult& r, const std::array<std::string, 2>& labels, std::size_t n,
                 std::size_t n_features);
Json cda_json(const mv::CdaResult& r, const std::array<std::string, 2>& labels);
std::string format_cda_scores_csv(const Dataset& data, const mv::CdaResult& r);

struct CdaScore {
  std::string speaker_id;
  std::string group;
  double score = 0.0;
};
std::vector<CdaScore> read_cda_scores_csv(const std::filesystem::path& path);

Json classifier_eval_json(const ml::ClassifierEval& e);
Json mcnemar_json(const ml::McNemarResult& m);

}  // namespace accentgram::report
