#include "accentgram/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <ctime>
#include <exception>
#include <functional>
#include <set>
#include <stdexcept>
#include <thread>

#include "accentgram/audio_io.hpp"
#include "accentgram/error.hpp"
#include "accentgram/evaluation.hpp"
#include "accentgram/multivariate.hpp"
#include "accentgram/plots.hpp"
#include "accentgram/univariate.hpp"

namespace accentgram::pipeline {
namespace {

const char* const kArtifacts[] = {"features.csv", "extract_failures.log", "table1.csv", "assumptions.csv",
                                  "manova.json",  "cda.json",             "cda_scores.csv", "classify.json",
                                  "cda_scores.svg"};

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string dump(const report::Json& j) { return j.dump(2) + "\n"; }

unsigned worker_count(int requested, std::size_t jobs) {
  unsigned w = requested > 0 ? static_cast<unsigned>(requested) : std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::clamp<std::size_t>(w, 1, std::max<std::size_t>(jobs, 1)));
}

ml::ForestConfig forest_config(const RunConfig& cfg) {
  ml::ForestConfig fc;
  fc.n_trees = cfg.n_trees;
  fc.seed = cfg.seed;
  fc.threads = cfg.threads;
  return fc;
}

std::vector<std::size_t> all_features(std::size_t n) {
  std::vector<std::size_t> f(n);
  for (std::size_t i = 0; i < n; ++i) f[i] = i + 1;
  return f;
}

}  // namespace

Manifest load_manifest(const fs::path& path, const fs::path& audio_root) {
  const std::string text = report::read_text(path);
  std::vector<std::string> lines;
  {
    std::size_t start = 0;
    while (start <= text.size()) {
      std::size_t end = text.find('\n', start);
      if (end == std::string::npos) end = text.size();
      std::string line = text.substr(start, end - start);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty()) lines.push_back(std::move(line));
      start = end + 1;
    }
  }
  if (lines.empty()) throw InputError(path.string() + ": empty manifest");
  if (lines[0] != "path,group,speaker_id") {
    throw InputError(path.string() + ": header must be exactly 'path,group,speaker_id'");
  }
  if (lines.size() == 1) throw InputError(path.string() + ": manifest has no rows");
  const fs::path root = audio_root.empty() ? path.parent_path() : audio_root;

  Manifest m;
  std::set<std::string> ids, groups, paths;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto f = report::split_csv_line(lines[i]);
    const std::string where = path.string() + ":" + std::to_string(i + 1);
    if (f.size() != 3) throw InputError(where + ": expected 3 fields");
    if (f[0].empty() || f[1].empty() || f[2].empty()) throw InputError(where + ": empty field");
    ManifestRow row;
    row.path = fs::path(f[0]).is_absolute() ? fs::path(f[0]) : root / f[0];
    row.group = f[1];
    row.speaker_id = f[2];
    if (!ids.insert(row.speaker_id).second) throw InputError(where + ": duplicate speaker_id '" + row.speaker_id + "'");
    if (!paths.insert(row.path.lexically_normal().string()).second) {
      throw InputError(where + ": duplicate path '" + row.path.string() + "'");
    }
    if (!fs::is_regular_file(row.path)) throw InputError(where + ": missing file '" + row.path.string() + "'");
    groups.insert(row.group);
    m.rows.push_back(std::move(row));
  }
  if (groups.size() != 2) {
    throw InputError(path.string() + ": expected exactly 2 groups, found " + std::to_string(groups.size()));
  }
  return m;
}

void RunConfig::validate() const {
  mfcc.validate();
  if (!(alpha > 0 && alpha < 1)) throw std::invalid_argument("--alpha must be in (0, 1)");
  if (!(test_fraction > 0 && test_fraction < 1)) throw std::invalid_argument("--test-fraction must be in (0, 1)");
  if (n_trees < 1) throw std::invalid_argument("--trees must be at least 1");
  if (repeats < 1) throw std::invalid_argument("--repeats must be at least 1");
  if (reduced_features.empty()) throw std::invalid_argument("--features must list at least one feature");
  for (std::size_t f : reduced_features)
    if (f < 1 || f > static_cast<std::size_t>(mfcc.n_mfcc))
      throw std::invalid_argument("--features entries must lie in 1..n_mfcc");
}

report::Json RunConfig::to_json() const {
  using report::json_number;
  report::Json j;
  j["mfcc"] = {{"window_ms", json_number(mfcc.window_ms)},
               {"hop_ms", json_number(mfcc.hop_ms)},
               {"n_mels", mfcc.n_mels},
               {"n_mfcc", mfcc.n_mfcc},
               {"fmin_hz", json_number(mfcc.fmin_hz)},
               {"fmax_hz", mfcc.fmax_hz ? json_number(*mfcc.fmax_hz) : report::Json("nyquist")},
               {"log_floor", json_number(mfcc.log_floor)},
               {"dynamic_range_db", json_number(mfcc.dynamic_range_db)},
               {"mel_scale", "slaney"},
               {"window", "hann_periodic"},
               {"padding", "reflect_centered"},
               {"dct", "orthonormal_type2"}};
  j["alpha"] = json_number(alpha);
  j["seed"] = seed;
  j["test_fraction"] = json_number(test_fraction);
  j["forest"] = {{"n_trees", n_trees},
                 {"max_features", "floor(sqrt(n_features_used))"},
                 {"min_samples_leaf", 1},
                 {"max_depth", nullptr},
                 {"bootstrap", true},
                 {"criterion", "gini"}};
  j["reduced_features"] = reduced_features;
  j["repeats"] = repeats;
  j["keep_going"] = keep_going;
  j["manifest"] = manifest.string();
  j["audio_root"] = audio_root.string();
  j["out_dir"] = out_dir.string();
  j["features_csv"] = features_path().string();
  return j;
}

ExtractOutcome extract_features(const Manifest& manifest, const RunConfig& cfg) {
  const std::size_t n = manifest.rows.size();
  std::vector<std::vector<double>> features(n);
  std::vector<std::string> errors(n);
  std::vector<std::exception_ptr> exceptions(n);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) {
      try {
        const auto clip = audio::load_wav(manifest.rows[i].path);
        features[i] = dsp::pool_mean(dsp::extract_mfcc(clip, cfg.mfcc));
      } catch (const std::exception& e) {
        errors[i] = e.what();
        exceptions[i] = std::current_exception();
      }
    }
  };
  const unsigned workers = worker_count(cfg.threads, n);
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();

  ExtractOutcome out;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& row = manifest.rows[i];
    if (!errors[i].empty()) {
      if (!cfg.keep_going) std::rethrow_exception(exceptions[i]);
      out.failures.push_back({row.speaker_id, row.path.string(), errors[i]});
      continue;
    }
    out.records.push_back({row.speaker_id, row.group, std::move(features[i])});
  }
  return out;
}

std::vector<fs::path> cmd_extract(const RunConfig& cfg) {
  cfg.validate();
  if (cfg.manifest.empty()) throw std::invalid_argument("extract requires --manifest");
  const Manifest manifest = load_manifest(cfg.manifest, cfg.audio_root);
  ExtractOutcome outcome = extract_features(manifest, cfg);
  std::vector<fs::path> written;
  const fs::path log = cfg.out_dir / "extract_failures.log";
  if (!outcome.failures.empty()) {
    std::string text;
    for (const auto& f : outcome.failures) text += f.speaker_id + "\t" + f.path + "\t" + f.error + "\n";
    report::write_text_atomic(log, text);
    written.push_back(log);
  } else if (fs::exists(log)) {
    fs::remove(log);
  }
  const Dataset data(std::move(outcome.records));
  report::write_text_atomic(cfg.features_path(), report::format_features_csv(data));
  written.insert(written.begin(), cfg.features_path());
  return written;
}

std::vector<fs::path> cmd_stats(const RunConfig& cfg) {
  cfg.validate();
  const Dataset data = report::read_features_csv(cfg.features_path());
  const auto table = stats::run_table1(data.grouped(), cfg.alpha);
  const fs::path t1 = cfg.out_dir / "table1.csv", as = cfg.out_dir / "assumptions.csv";
  report::write_text_atomic(t1, report::format_table1_csv(table));
  report::write_text_atomic(as, report::format_assumptions_csv(table));
  return {t1, as};
}

std::vector<fs::path> cmd_manova(const RunConfig& cfg) {
  cfg.validate();
  const Dataset data = report::read_features_csv(cfg.features_path());
  const auto grouped = data.grouped();
  const auto result = mv::manova(grouped);
  const fs::path out = cfg.out_dir / "manova.json";
  report::write_text_atomic(out, dump(report::manova_json(result, data.labels(), data.size(), data.n_features())));
  return {out};
}

std::vector<fs::path> cmd_cda(const RunConfig& cfg) {
  cfg.validate();
  const Dataset data = report::read_features_csv(cfg.features_path());
  const auto result = mv::cda(data.grouped());
  const fs::path js = cfg.out_dir / "cda.json", scores = cfg.out_dir / "cda_scores.csv";
  report::write_text_atomic(js, dump(report::cda_json(result, data.labels())));
  report::write_text_atomic(scores, report::format_cda_scores_csv(data, result));
  return {js, scores};
}

std::vector<fs::path> cmd_classify(const RunConfig& cfg) {
  cfg.validate();
  const Dataset data = report::read_features_csv(cfg.features_path());
  const auto grouped = data.grouped();
  const auto full = all_features(data.n_features());
  const auto fc = forest_config(cfg);
  const ml::SplitPlan plan{cfg.test_fraction, cfg.seed};
  const auto cmp = ml::compare_models(grouped, full, cfg.reduced_features, fc, plan);

  report::Json j;
  j["groups"] = {data.labels()[0], data.labels()[1]};
  std::vector<std::string> test_ids;
  for (std::size_t i : cmp.split.test) test_ids.push_back(data.records()[i].speaker_id);
  j["test_speakers"] = test_ids;
  j["truth"] = cmp.truth;
  j["full"] = report::classifier_eval_json(cmp.full);
  j["reduced"] = report::classifier_eval_json(cmp.reduced);
  j["mcnemar"] = report::mcnemar_json(cmp.mcnemar);
  j["mcnemar"]["model_a"] = "full";
  j["mcnemar"]["model_b"] = "reduced";
  if (cfg.repeats > 1) {
    const auto rep = ml::compare_models_repeated(grouped, full, cfg.reduced_features, fc, plan, cfg.repeats);
    report::Json r;
    r["seeds"] = rep.seeds;
    std::vector<report::Json> fa, ra;
    for (double v : rep.full_accuracy) fa.push_back(report::json_number(v));
    for (double v : rep.reduced_accuracy) ra.push_back(report::json_number(v));
    r["full_accuracy"] = fa;
    r["reduced_accuracy"] = ra;
    r["full_mean"] = report::json_number(rep.full_mean);
    r["full_sd"] = report::json_number(rep.full_sd);
    r["reduced_mean"] = report::json_number(rep.reduced_mean);
    r["reduced_sd"] = report::json_number(rep.reduced_sd);
    j["repeated"] = r;
  }
  j["config"] = cfg.to_json();
  const fs::path out = cfg.out_dir / "classify.json";
  report::write_text_atomic(out, dump(j));
  return {out};
}

std::vector<fs::path> cmd_plot(const RunConfig& cfg) {
  cfg.validate();
  if (!fs::exists(cfg.features_path())) throw InputError(cfg.features_path().string() + ": missing report input");
  const fs::path scores_path = cfg.out_dir / "cda_scores.csv";
  if (!fs::exists(scores_path)) throw InputError(scores_path.string() + ": missing report input (run cda first)");
  const Dataset data = report::read_features_csv(cfg.features_path());
  const auto grouped = data.grouped();
  std::vector<fs::path> written;
  std::vector<std::size_t> features = cfg.reduced_features;
  std::sort(features.begin(), features.end());
  for (std::size_t f : features) {
    if (f > data.n_features()) throw InputError("plot: feature " + std::to_string(f) + " not in features file");
    std::array<plot::GroupValues, 2> groups{plot::GroupValues{data.labels()[0], grouped.values(f - 1, 0)},
                                            plot::GroupValues{data.labels()[1], grouped.values(f - 1, 1)}};
    char name[40];
    std::snprintf(name, sizeof name, "boxplot_mfcc_%02zu.svg", f);
    const fs::path out = cfg.out_dir / name;
    report::write_text_atomic(out, plot::boxplot_svg("MFCC" + std::to_string(f) + " by group", groups));
    written.push_back(out);
  }
  const auto scores = report::read_cda_scores_csv(scores_path);
  std::array<plot::GroupValues, 2> groups{plot::GroupValues{data.labels()[0], {}},
                                          plot::GroupValues{data.labels()[1], {}}};
  for (const auto& s : scores) {
    if (s.group == data.labels()[0]) groups[0].values.push_back(s.score);
    else if (s.group == data.labels()[1]) groups[1].values.push_back(s.score);
    else throw InputError(scores_path.string() + ": unknown group '" + s.group + "'");
  }
  const fs::path out = cfg.out_dir / "cda_scores.svg";
  report::write_text_atomic(out, plot::strip_plot_svg("Canonical discriminant scores by group", groups));
  written.push_back(out);
  return written;
}

std::vector<fs::path> cmd_all(const RunConfig& cfg) {
  cfg.validate();
  if (fs::exists(cfg.out_dir)) {
    for (const char* name : kArtifacts) fs::remove(cfg.out_dir / name);
    for (const auto& entry : fs::directory_iterator(cfg.out_dir)) {
      const std::string name = entry.path().filename().string();
      if (name.rfind("boxplot_mfcc_", 0) == 0 && entry.path().extension() == ".svg") fs::remove(entry.path());
    }
    fs::remove(cfg.out_dir / "run.json");
  }
  fs::remove(cfg.features_path());

  const std::pair<const char*, std::function<std::vector<fs::path>(const RunConfig&)>> stages[] = {
      {"extract", cmd_extract}, {"stats", cmd_stats},       {"manova", cmd_manova},
      {"cda", cmd_cda},         {"classify", cmd_classify}, {"plot", cmd_plot}};
  report::Json status = report::Json::array();
  std::vector<fs::path> written;
  for (const auto& [name, run] : stages) {
    try {
      const auto files = run(cfg);
      written.insert(written.end(), files.begin(), files.end());
      report::Json s{{"stage", name}, {"status", "ok"}};
      std::vector<std::string> names;
      for (const auto& f : files) names.push_back(f.filename().string());
      s["artifacts"] = names;
      status.push_back(s);
    } catch (const std::exception& e) {
      status.push_back({{"stage", name}, {"status", "failed"}, {"error", e.what()}});
      write_run_metadata(cfg, "all", status);
      throw;
    }
  }
  write_run_metadata(cfg, "all", status);
  written.push_back(cfg.out_dir / "run.json");
  return written;
}

void write_run_metadata(const RunConfig& cfg, const std::string& command, const report::Json& stages) {
  report::Json j;
  j["tool"] = "accentgram";
  j["version"] = ACCENTGRAM_VERSION;
  j["command"] = command;
  j["timestamp"] = utc_timestamp();
  j["config"] = cfg.to_json();
  j["stages"] = stages;
  report::write_text_atomic(cfg.out_dir / "run.json", dump(j));
}

}  // namespace accentgram::pipeline
