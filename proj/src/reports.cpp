#include "accentgram/reports.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "accentgram/error.hpp"

namespace accentgram::report {
namespace {

std::string trim_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    line = trim_cr(line);
    if (!line.empty()) out.push_back(line);
  }
  return out;
}

double parse_double(const std::string& s, const std::string& where) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw InputError(where + ": '" + s + "' is not a number");
  }
}

}  // namespace

std::vector<std::string> split_csv_line(std::string_view line) {
  if (line.ends_with('\r')) line.remove_suffix(1);
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        cur += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string fixed6(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  std::string s = buf;
  if (s == "-0.000000") s = "0.000000";
  return s;
}

Json json_number(double v) {
  if (!std::isfinite(v)) return nullptr;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return std::strtod(buf, nullptr);
}

void write_text_atomic(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError(path.string() + ": cannot open for writing");
    out << content;
    if (!out) throw InputError(path.string() + ": write failed");
  }
  std::filesystem::rename(tmp, path);
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path.string() + ": cannot open file");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string format_features_csv(const Dataset& data) {
  std::string out = "speaker_id,group";
  for (std::size_t f = 1; f <= data.n_features(); ++f) out += "," + feature_name(f);
  out += "\n";
  for (const auto& r : data.records()) {
    out += csv_escape(r.speaker_id) + "," + csv_escape(r.group);
    for (double v : r.features) out += "," + fixed6(v);
    out += "\n";
  }
  return out;
}

Dataset parse_features_csv(const std::string& text, const std::string& source) {
  const auto lines = lines_of(text);
  if (lines.empty()) throw InputError(source + ": empty features file");
  const auto header = split_csv_line(lines[0]);
  if (header.size() < 3 || header[0] != "speaker_id" || header[1] != "group") {
    throw InputError(source + ": header must start with speaker_id,group,mfcc_01");
  }
  for (std::size_t i = 2; i < header.size(); ++i) {
    if (header[i] != feature_name(i - 1)) {
      throw InputError(source + ": expected column '" + feature_name(i - 1) + "', found '" + header[i] + "'");
    }
  }
  std::vector<SpeakerRecord> records;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const auto fields = split_csv_line(lines[li]);
    const std::string where = source + ":" + std::to_string(li + 1);
    if (fields.size() != header.size()) throw InputError(where + ": wrong number of fields");
    SpeakerRecord r;
    r.speaker_id = fields[0];
    r.group = fields[1];
    for (std::size_t i = 2; i < fields.size(); ++i) r.features.push_back(parse_double(fields[i], where));
    records.push_back(std::move(r));
  }
  if (records.empty()) throw InputError(source + ": no data rows");
  return Dataset(std::move(records));
}

Dataset read_features_csv(const std::filesystem::path& path) {
  return parse_features_csv(read_text(path), path.string());
}

std::string format_table1_csv(const stats::Table1& table) {
  std::string out =
      "feature,label,group_a,n_a,mean_a,sd_a,group_b,n_b,mean_b,sd_b,test_used,t,df,p_two_sided,p_one_sided,"
      "ci_low,ci_high,cohens_d,levene_p,bonferroni_alpha,significant_bonferroni\n";
  for (const auto& r : table.rows) {
    const auto& t = r.test;
    out += std::to_string(r.feature) + "," + r.label + "," + csv_escape(table.labels[0]) + "," +
           std::to_string(t.a.n) + "," + fixed6(t.a.mean) + "," + fixed6(t.a.sd) + "," +
           csv_escape(table.labels[1]) + "," + std::to_string(t.b.n) + "," + fixed6(t.b.mean) + "," +
           fixed6(t.b.sd) + "," + stats::to_string(t.variant) + "," + fixed6(t.t) + "," + fixed6(t.df) + "," +
           fixed6(t.p_two_sided) + "," + fixed6(r.p_one_sided) + "," + fixed6(t.ci_low) + "," +
           fixed6(t.ci_high) + "," + fixed6(r.cohens_d) + "," + fixed6(r.levene_p) + "," +
           fixed6(table.threshold) + "," + (r.significant_bonferroni ? "true" : "false") + "\n";
  }
  return out;
}

std::string format_assumptions_csv(const stats::Table1& table) {
  std::string out = "feature,label,group,n,shapiro_w,shapiro_p,ks_d,ks_p,levene_w,levene_p\n";
  for (const auto& rep : table.normality) {
    const auto& var = table.variance[rep.feature - 1];
    out += std::to_string(rep.feature) + "," + feature_name(rep.feature) + "," + csv_escape(rep.group) + "," +
           std::to_string(rep.n) + "," + fixed6(rep.shapiro_w) + "," + fixed6(rep.shapiro_p) + "," +
           fixed6(rep.ks_d) + "," + fixed6(rep.ks_p) + "," + fixed6(var.levene_w) + "," + fixed6(var.levene_p) +
           "\n";
  }
  return out;
}

Json manova_json(const mv::ManovaResult& r, const std::array<std::string, 2>& labels, std::size_t n,
                 std::size_t n_features) {
  Json j;
  j["groups"] = {labels[0], labels[1]};
  j["n"] = n;
  j["n_features"] = n_features;
  j["pillai_v"] = json_number(r.pillai_v);
  j["f_stat"] = json_number(r.f_stat);
  j["df1"] = json_number(r.df1);
  j["df2"] = json_number(r.df2);
  j["p"] = json_number(r.p);
  j["partial_eta_sq"] = json_number(r.partial_eta_sq);
  j["box_m"] = json_number(r.box_m);
  j["box_chi2"] = json_number(r.box_chi2);
  j["box_df"] = json_number(r.box_df);
  j["box_p"] = json_number(r.box_p);
  return j;
}

Json cda_json(const mv::CdaResult& r, const std::array<std::string, 2>& labels) {
  Json j;
  j["groups"] = {labels[0], labels[1]};
  j["eigenvalue"] = json_number(r.eigenvalue);
  j["canonical_correlation"] = json_number(r.canonical_correlation);
  Json raw = Json::object(), standardized = Json::object();
  for (std::size_t f = 0; f < r.raw_coeffs.size(); ++f) {
    raw[feature_name(f + 1)] = json_number(r.raw_coeffs[f]);
    standardized[feature_name(f + 1)] = json_number(r.std_coeffs[f]);
  }
  j["raw_coeffs"] = raw;
  j["std_coeffs"] = standardized;
  j["centroids"] = {{labels[0], json_number(r.centroids[0])}, {labels[1], json_number(r.centroids[1])}};
  return j;
}

std::string format_cda_scores_csv(const Dataset& data, const mv::CdaResult& r) {
  std::string out = "speaker_id,group,score\n";
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto& rec = data.records()[i];
    out += csv_escape(rec.speaker_id) + "," + csv_escape(rec.group) + "," + fixed6(r.scores[i]) + "\n";
  }
  return out;
}

std::vector<CdaScore> read_cda_scores_csv(const std::filesystem::path& path) {
  const auto lines = lines_of(read_text(path));
  if (lines.empty() || lines[0] != "speaker_id,group,score") {
    throw InputError(path.string() + ": header must be speaker_id,group,score");
  }
  std::vector<CdaScore> out;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto f = split_csv_line(lines[i]);
    const std::string where = path.string() + ":" + std::to_string(i + 1);
    if (f.size() != 3) throw InputError(where + ": wrong number of fields");
    out.push_back({f[0], f[1], parse_double(f[2], where)});
  }
  return out;
}

Json classifier_eval_json(const ml::ClassifierEval& e) {
  Json j;
  j["feature_set"] = e.feature_set;
  j["n_test"] = e.n_test;
  j["correct"] = e.correct;
  j["accuracy"] = json_number(e.accuracy);
  j["ci_low"] = json_number(e.ci.low);
  j["ci_high"] = json_number(e.ci.high);
  j["ci_method"] = "wilson";
  j["predictions"] = e.predictions;
  return j;
}

Json mcnemar_json(const ml::McNemarResult& m) {
  Json j;
  j["b"] = m.b;
  j["c"] = m.c;
  j["chi2"] = json_number(m.chi2);
  j["p"] = json_number(m.p);
  j["method"] = ml::to_string(m.method);
  return j;
}

}  // namespace accentgram::report
