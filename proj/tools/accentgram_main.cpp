// accentgram: MFCC extraction, group statistics and forest comparison for two speaker groups.

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "accentgram/error.hpp"
#include "accentgram/pipeline.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitInput = 2;
constexpr int kExitNumerical = 3;

std::vector<std::size_t> parse_feature_list(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    if (item.empty()) throw std::invalid_argument("--features: empty entry in '" + text + "'");
    std::size_t used = 0;
    const long v = std::stol(item, &used);
    if (used != item.size() || v < 1) throw std::invalid_argument("--features: bad entry '" + item + "'");
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  namespace pl = accentgram::pipeline;
  CLI::App app{"accentgram: MFCC-based group comparison and classification pipeline"};
  app.require_subcommand(1, 1);
  app.fallthrough();

  pl::RunConfig cfg;
  std::string manifest, audio_root, out_dir = "out", features_csv, features = "1,2,5";
  double fmax = 0.0;
  app.add_option("--manifest", manifest, "CSV with header path,group,speaker_id");
  app.add_option("--audio-root", audio_root, "Directory for relative manifest paths (default: manifest's directory)");
  app.add_option("--out", out_dir, "Output directory")->capture_default_str();
  app.add_option("--features-csv", features_csv, "Features table to analyse (default: OUT/features.csv)");
  app.add_option("--seed", cfg.seed, "Seed for splits and forests")->capture_default_str();
  app.add_option("--test-fraction", cfg.test_fraction, "Held-out fraction per group")->capture_default_str();
  app.add_option("--trees", cfg.n_trees, "Trees per forest")->capture_default_str();
  app.add_option("--features", features, "Reduced-model feature numbers, 1-based")->capture_default_str();
  app.add_option("--alpha", cfg.alpha, "Family-wise significance level")->capture_default_str();
  app.add_option("--window-ms", cfg.mfcc.window_ms, "Analysis window (ms)")->capture_default_str();
  app.add_option("--hop-ms", cfg.mfcc.hop_ms, "Hop size (ms)")->capture_default_str();
  app.add_option("--n-mels", cfg.mfcc.n_mels, "Mel bands")->capture_default_str();
  app.add_option("--n-mfcc", cfg.mfcc.n_mfcc, "Cepstral coefficients kept")->capture_default_str();
  app.add_option("--fmax", fmax, "Upper mel edge in Hz (default: Nyquist)");
  app.add_option("--repeats", cfg.repeats, "Repeated-split evaluations in classify")->capture_default_str();
  app.add_option("--threads", cfg.threads, "Worker threads (0 = all cores)")->capture_default_str();
  app.add_flag("--keep-going", cfg.keep_going, "Log unreadable recordings and continue");

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"extract", "Extract mean-pooled MFCCs into features.csv"},
      {"stats", "Per-feature t-tests with assumption checks (table1.csv, assumptions.csv)"},
      {"manova", "Pillai MANOVA and Box's M (manova.json)"},
      {"cda", "Canonical discriminant analysis (cda.json, cda_scores.csv)"},
      {"classify", "Full vs reduced random forest with Wilson CIs and McNemar (classify.json)"},
      {"plot", "Boxplots and canonical score plot (SVG)"},
      {"all", "Run every stage in order"}};
  for (const auto& [name, help] : commands) app.add_subcommand(name, help);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  // `all` records its own per-stage status; single stages get one entry here.
  auto record_failure = [&](const std::exception& e) {
    if (command == "all") return;
    try {
      accentgram::report::Json stage{{"stage", command}, {"status", "failed"}, {"error", e.what()}};
      pl::write_run_metadata(cfg, command, accentgram::report::Json::array({stage}));
    } catch (const std::exception&) {
    }
  };
  try {
    cfg.manifest = manifest;
    cfg.audio_root = audio_root;
    cfg.out_dir = out_dir;
    cfg.features_csv = features_csv;
    cfg.reduced_features = parse_feature_list(features);
    if (app.count("--fmax") > 0) cfg.mfcc.fmax_hz = fmax;
    cfg.validate();

    std::vector<std::filesystem::path> written;
    if (command == "all") {
      written = pl::cmd_all(cfg);
    } else {
      if (command == "extract") written = pl::cmd_extract(cfg);
      else if (command == "stats") written = pl::cmd_stats(cfg);
      else if (command == "manova") written = pl::cmd_manova(cfg);
      else if (command == "cda") written = pl::cmd_cda(cfg);
      else if (command == "classify") written = pl::cmd_classify(cfg);
      else written = pl::cmd_plot(cfg);
      accentgram::report::Json stage{{"stage", command}, {"status", "ok"}};
      pl::write_run_metadata(cfg, command, accentgram::report::Json::array({stage}));
    }
    for (const auto& p : written) std::cout << p.string() << "\n";
    return 0;
  } catch (const std::invalid_argument& e) {
    std::cerr << "accentgram " << command << ": " << e.what() << "\n";
    return kExitUsage;
  } catch (const accentgram::InputError& e) {
    record_failure(e);
    std::cerr << "accentgram " << command << ": input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const accentgram::NumericalError& e) {
    record_failure(e);
    std::cerr << "accentgram " << command << ": numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    record_failure(e);
    std::cerr << "accentgram " << command << ": " << e.what() << "\n";
    return kExitInput;
  }
}
