// Copyright 2026 The plumescreen Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "plumescreen/cli.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "plumescreen/error.hpp"
#include "plumescreen/feature_table.hpp"
#include "plumescreen/learners.hpp"
#include "plumescreen/metrics.hpp"
#include "plumescreen/pack.hpp"
#include "plumescreen/parallel.hpp"
#include "plumescreen/search.hpp"
#include "plumescreen/shap.hpp"
#include "plumescreen/synthgen.hpp"
#include "plumescreen/validation.hpp"

#ifndef PLUMESCREEN_VERSION
#define PLUMESCREEN_VERSION "0.0.0"
#endif

namespace plumescreen {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

struct GlobalOptions {
  std::uint64_t seed = 0;
  int threads = 0;
  std::string out_dir = ".";
};

// Records what a run read and wrote; saved as <out-dir>/<command>.manifest.json.
class Manifest {
 public:
  Manifest(std::string command, const GlobalOptions& g) : command_(std::move(command)) {
    config_["seed"] = g.seed;
    config_["out_dir"] = g.out_dir;
  }

  json& config() { return config_; }
  void input(const fs::path& p) { inputs_[p.string()] = sha256_file(p); }
  void output(const fs::path& p) { outputs_[p.string()] = sha256_file(p); }

  void write(const fs::path& dir) const {
    json j = {{"tool", "plumescreen"}, {"version", tool_version()}, {"command", command_},
              {"config", config_},     {"inputs", inputs_},         {"outputs", outputs_}};
    // Digest of everything except the timestamp.
    j["digest"] = sha256_hex(j.dump());
    j["created_utc"] = timestamp();
    write_text_file(dir / (command_ + ".manifest.json"), j.dump(2) + "\n");
  }

 private:
  static std::string timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream ss;
    ss << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return ss.str();
  }

  std::string command_;
  json config_ = json::object();
  json inputs_ = json::object();
  json outputs_ = json::object();
};

json read_json_file(const fs::path& path) {
  try {
    return json::parse(read_text_file(path));
  } catch (const json::parse_error& e) {
    throw DataError(path.string() + " is not valid JSON: " + e.what());
  }
}

void write_output(Manifest& manifest, const fs::path& path, const std::string& text) {
  write_text_file(path, text);
  manifest.output(path);
}

json metric_json(const Metrics& m) {
  return {{"ap", m.ap}, {"roc_auc", m.roc_auc}, {"balanced_accuracy", m.balanced_accuracy}};
}

json summary_json(const MetricSummary& s) {
  return {{"ap", {{"mean", s.mean.ap}, {"std", s.std.ap}}},
          {"roc_auc", {{"mean", s.mean.roc_auc}, {"std", s.std.roc_auc}}},
          {"balanced_accuracy", {{"mean", s.mean.balanced_accuracy}, {"std", s.std.balanced_accuracy}}}};
}

std::vector<ModelKind> parse_models(const std::vector<std::string>& names) {
  std::vector<ModelKind> out;
  for (const auto& n : names) {
    std::stringstream ss(n);
    std::string part;
    while (std::getline(ss, part, ',')) {
      if (!part.empty()) out.push_back(model_kind_from_name(part));
    }
  }
  if (out.empty()) throw ConfigError("no model kinds given");
  return out;
}

// "forest=path" pairs.
std::map<ModelKind, fs::path> parse_kind_files(const std::vector<std::string>& items, const char* flag) {
  std::map<ModelKind, fs::path> out;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ConfigError(std::string(flag) + " expects KIND=FILE, got '" + item + "'");
    out[model_kind_from_name(item.substr(0, eq))] = item.substr(eq + 1);
  }
  return out;
}

std::string fmt_pm(double mean, double sd) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3f ± %.3f", mean, sd);
  return buf;
}

std::string fmt3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

// ---- generate ---------------------------------------------------------------

struct GenerateOptions {
  std::optional<std::size_t> n;
  std::optional<double> plume_fraction;
  std::optional<std::string> scenario;
  std::string config;
  std::string out;
};

void cmd_generate(const GlobalOptions& g, const GenerateOptions& o, std::ostream& out) {
  GenConfig cfg;
  Manifest manifest("generate", g);
  if (!o.config.empty()) {
    cfg = GenConfig::from_json(read_json_file(o.config));
    manifest.input(o.config);
  }
  cfg.seed = g.seed;
  if (o.n) cfg.n_scenes = *o.n;
  if (o.plume_fraction) cfg.plume_fraction = *o.plume_fraction;
  if (o.scenario) {
    json sj = cfg.to_json();
    sj["scenario"] = *o.scenario;
    cfg = GenConfig::from_json(sj);
  }
  cfg.validate();
  manifest.config()["generator"] = cfg.to_json();

  const auto patches = generate(cfg);
  const fs::path path = o.out.empty() ? fs::path(g.out_dir) / "pack.spk" : fs::path(o.out);
  write_pack(patches, path);
  manifest.output(path);
  manifest.write(g.out_dir);
  out << "wrote " << patches.size() << " scenes (" << plume_count(cfg) << " plume) to " << path.string() << "\n";
}

// ---- extract ----------------------------------------------------------------

struct ExtractOptions {
  std::string pack;
  std::string out;
};

void cmd_extract(const GlobalOptions& g, const ExtractOptions& o, std::ostream& out) {
  Manifest manifest("extract", g);
  const auto patches = read_pack(o.pack);
  manifest.input(o.pack);
  const ExtractionRun run = extract_all(patches);
  const fs::path path = o.out.empty() ? fs::path(g.out_dir) / "features.csv" : fs::path(o.out);
  write_output(manifest, path, format_feature_csv(run.table));
  fs::path log = path;
  log.replace_extension(".degenerate.jsonl");
  write_extraction_log(run, log);
  manifest.output(log);
  manifest.write(g.out_dir);
  std::size_t flagged = 0;
  for (const auto& d : run.degenerate) flagged += d.empty() ? 0 : 1;
  out << "extracted " << run.table.size() << " rows x " << run.table.names.size() << " features to "
      << path.string() << " (" << flagged << " rows with degenerate features)\n";
}

// ---- train ------------------------------------------------------------------

struct TrainOptions {
  std::string features;
  std::string model = "forest";
  std::string params;
  std::string out;
};

void cmd_train(const GlobalOptions& g, const TrainOptions& o, std::ostream& out) {
  Manifest manifest("train", g);
  const ModelKind kind = model_kind_from_name(o.model);
  json pj = json::object();
  if (!o.params.empty()) {
    pj = read_json_file(o.params);
    manifest.input(o.params);
  }
  const Hyperparams hp = hyperparams_from_json(kind, pj);
  const FeatureTable table = read_feature_csv(o.features);
  manifest.input(o.features);
  manifest.config()["model"] = model_kind_name(kind);
  manifest.config()["hyperparams"] = to_json(hp);

  const auto y = table.binary_labels();
  const TrainedModel model = train(table.X, y, hp, g.seed, table.names);
  const fs::path path =
      o.out.empty() ? fs::path(g.out_dir) / ("model_" + std::string(model_kind_name(kind)) + ".json") : fs::path(o.out);
  write_output(manifest, path, model_to_json(model).dump(1) + "\n");
  manifest.write(g.out_dir);
  out << "trained " << model_kind_name(kind) << " on " << table.size() << " rows; saved " << path.string() << "\n";
}

// ---- cv / search ------------------------------------------------------------

struct CvOptions {
  std::string features;
  std::vector<std::string> models = {"forest,boosted,svc"};
  int folds = 5;
  int trials = 0;
  std::vector<std::string> spaces;
  std::vector<std::string> params;
};

void cmd_cv(const GlobalOptions& g, const CvOptions& o, bool search, std::ostream& out) {
  Manifest manifest(search ? "search" : "cv", g);
  const auto kinds = parse_models(o.models);
  const auto spaces = parse_kind_files(o.spaces, "--space");
  const auto params = parse_kind_files(o.params, "--params");
  const FeatureTable table = read_feature_csv(o.features);
  manifest.input(o.features);
  const auto y = table.binary_labels();
  const auto n_pos = static_cast<std::size_t>(std::count(y.begin(), y.end(), 1));

  json report = {{"protocol", "stratified k-fold cross-validation"},
                 {"folds", o.folds},
                 {"seed", g.seed},
                 {"n_samples", table.size()},
                 {"n_plume", n_pos},
                 {"n_artifact", table.size() - n_pos},
                 {"models", json::object()}};
  manifest.config()["folds"] = o.folds;

  std::vector<std::string> lines;
  for (const ModelKind kind : kinds) {
    const std::string name(model_kind_name(kind));
    int trials = o.trials;
    if (trials == 0 && (search || spaces.count(kind))) trials = kDefaultTrials;
    json entry;
    MetricSummary summary;
    std::vector<FoldResult> fold_results;
    Hyperparams hp;
    if (trials > 0) {
      SearchSpace space = default_search_space(kind);
      if (auto it = spaces.find(kind); it != spaces.end()) {
        space = SearchSpace::load(it->second);
        manifest.input(it->second);
      }
      const SearchResult sr = random_search(space, kind, trials, table.X, y, o.folds, g.seed, table.names);
      const TrialResult& best = sr.trials[static_cast<std::size_t>(sr.best_trial)];
      write_output(manifest, fs::path(g.out_dir) / ("trials_" + name + ".csv"), format_trial_log(sr));
      hp = sr.best;
      summary = best.cv.summary;
      fold_results = best.cv.folds;
      std::size_t failed = 0;
      for (const auto& t : sr.trials) failed += t.failed ? 1 : 0;
      entry["search"] = {{"trials", trials}, {"failed_trials", failed}, {"best_trial", sr.best_trial},
                         {"space", space.to_json()}};
    } else {
      json pj = json::object();
      if (auto it = params.find(kind); it != params.end()) {
        pj = read_json_file(it->second);
        manifest.input(it->second);
      }
      hp = hyperparams_from_json(kind, pj);
      const CvResult cv = cross_validate(table.X, y, hp, o.folds, g.seed, table.names);
      summary = cv.summary;
      fold_results = cv.folds;
    }
    entry["hyperparams"] = to_json(hp);
    entry.update(summary_json(summary));
    json folds = json::array();
    for (const auto& f : fold_results) {
      json fj = metric_json(f.metrics);
      fj["fold"] = f.fold;
      fj["n_test"] = f.n_test;
      folds.push_back(fj);
    }
    entry["per_fold"] = folds;
    report["models"][name] = entry;
    write_output(manifest, fs::path(g.out_dir) / ("best_params_" + name + ".json"), to_json(hp).dump(2) + "\n");
    lines.push_back(name + "\t" + fmt_pm(summary.mean.ap, summary.std.ap) + "\t" +
                    fmt_pm(summary.mean.roc_auc, summary.std.roc_auc) + "\t" +
                    fmt_pm(summary.mean.balanced_accuracy, summary.std.balanced_accuracy));
    if (search) out << name << " best: " << to_json(hp).dump() << "\n";
  }
  write_output(manifest, fs::path(g.out_dir) / "cv_report.json", report.dump(2) + "\n");
  manifest.write(g.out_dir);
  out << "model\tAP\tROC-AUC\tbalanced accuracy\n";
  for (const auto& l : lines) out << l << "\n";
}

// ---- eval -------------------------------------------------------------------

struct EvalOptions {
  std::vector<std::string> models;
  std::string features;
};

void cmd_eval(const GlobalOptions& g, const EvalOptions& o, std::ostream& out) {
  Manifest manifest("eval", g);
  const FeatureTable table = read_feature_csv(o.features);
  manifest.input(o.features);
  const auto y = table.binary_labels();
  const auto n_pos = static_cast<std::size_t>(std::count(y.begin(), y.end(), 1));
  json report = {{"protocol", "hold-out evaluation"},
                 {"n_samples", table.size()},
                 {"n_plume", n_pos},
                 {"n_artifact", table.size() - n_pos},
                 {"models", json::object()}};
  out << "model\tAP\tROC-AUC\tbalanced accuracy\n";
  for (const auto& path : o.models) {
    const TrainedModel model = load_model(path);
    manifest.input(path);
    if (model.feature_names != table.names) throw DataError("model " + path + " was trained on different features");
    const std::string name(model_kind_name(model.kind));
    const auto scores = model.score(table.X);
    const Metrics m = compute_metrics(scores, y, model.default_threshold());
    json entry = metric_json(m);
    entry["threshold"] = model.default_threshold();
    entry["score"] = model.kind == ModelKind::kSvc ? "decision_value" : "probability";
    report["models"][name] = entry;
    write_output(manifest, fs::path(g.out_dir) / ("pr_" + name + ".csv"), format_pr_csv(pr_curve(scores, y)));
    write_output(manifest, fs::path(g.out_dir) / ("roc_" + name + ".csv"), format_roc_csv(roc_curve(scores, y)));
    out << name << "\t" << fmt3(m.ap) << "\t" << fmt3(m.roc_auc) << "\t" << fmt3(m.balanced_accuracy) << "\n";
  }
  write_output(manifest, fs::path(g.out_dir) / "eval_report.json", report.dump(2) + "\n");
  manifest.write(g.out_dir);
}

// ---- explain ----------------------------------------------------------------

struct ExplainOptions {
  std::string model;
  std::string features;
  std::size_t max_samples = 0;
  std::size_t top = 10;
};

void cmd_explain(const GlobalOptions& g, const ExplainOptions& o, std::ostream& out) {
  Manifest manifest("explain", g);
  const TrainedModel model = load_model(o.model);
  manifest.input(o.model);
  FeatureTable table = read_feature_csv(o.features);
  manifest.input(o.features);
  if (model.feature_names != table.names) throw DataError("model was trained on different features");
  if (o.max_samples > 0 && o.max_samples < table.size()) {
    // Deterministic subset: first rows of a seeded permutation, kept in file order.
    std::vector<std::size_t> idx(table.size());
    std::iota(idx.begin(), idx.end(), 0);
    Rng rng(g.seed, 0x5a5a);
    rng.shuffle(idx.begin(), idx.end());
    idx.resize(o.max_samples);
    std::sort(idx.begin(), idx.end());
    table = table.select(idx);
  }
  manifest.config()["max_samples"] = o.max_samples;
  const auto attributions = explain_all(model, table.X);
  const ShapSummary summary = summarize(attributions, table.names);
  const std::string name(model_kind_name(model.kind));
  write_output(manifest, fs::path(g.out_dir) / ("shap_" + name + ".csv"),
               format_attribution_csv(table.ids, table.names, attributions));
  write_output(manifest, fs::path(g.out_dir) / ("shap_beeswarm_" + name + ".csv"),
               format_beeswarm_csv(table.ids, table.names, attributions, table.X));
  write_output(manifest, fs::path(g.out_dir) / ("shap_summary_" + name + ".csv"), format_summary_csv(summary));
  manifest.write(g.out_dir);
  out << "rank\tfeature\tmean |SHAP|\n";
  for (std::size_t r = 0; r < std::min(o.top, summary.ranking.size()); ++r) {
    const std::size_t j = summary.ranking[r];
    out << r + 1 << "\t" << summary.names[j] << "\t" << format_double(summary.mean_abs[j]) << "\n";
  }
}

// ---- report -----------------------------------------------------------------

struct ReportOptions {
  std::string cv;
  std::string eval;
  std::vector<std::string> shap;
  std::size_t top = 10;
  std::string out;
};

void cmd_report(const GlobalOptions& g, const ReportOptions& o, std::ostream& out) {
  Manifest manifest("report", g);
  json report = json::object();
  if (!o.cv.empty()) {
    const json cv = read_json_file(o.cv);
    manifest.input(o.cv);
    json rows = json::object();
    for (const auto& [name, entry] : cv.at("models").items()) {
      rows[name] = {{"ap", entry.at("ap")}, {"roc_auc", entry.at("roc_auc")},
                    {"balanced_accuracy", entry.at("balanced_accuracy")}};
    }
    report["cross_validation"] = {{"folds", cv.at("folds")}, {"models", rows}};
  }
  if (!o.eval.empty()) {
    const json ev = read_json_file(o.eval);
    manifest.input(o.eval);
    json rows = json::object();
    for (const auto& [name, entry] : ev.at("models").items()) {
      rows[name] = {{"ap", entry.at("ap")}, {"roc_auc", entry.at("roc_auc")},
                    {"balanced_accuracy", entry.at("balanced_accuracy")}};
    }
    report["test"] = {{"n_samples", ev.at("n_samples")}, {"models", rows}};
  }
  for (const auto& [kind, path] : parse_kind_files(o.shap, "--shap")) {
    manifest.input(path);
    std::istringstream in(read_text_file(path));
    std::string line;
    std::getline(in, line);
    json top = json::array();
    while (std::getline(in, line) && top.size() < o.top) {
      std::stringstream ss(line);
      std::string rank, feature, mean_abs;
      std::getline(ss, rank, ',');
      std::getline(ss, feature, ',');
      std::getline(ss, mean_abs, ',');
      top.push_back({{"rank", std::stoi(rank)}, {"feature", feature}, {"mean_abs_shap", parse_double(mean_abs)}});
    }
    report["top_features"][std::string(model_kind_name(kind))] = top;
  }
  if (report.empty()) throw ConfigError("report needs at least one of --cv, --eval, --shap");
  const fs::path path = o.out.empty() ? fs::path(g.out_dir) / "report.json" : fs::path(o.out);
  write_output(manifest, path, report.dump(2) + "\n");
  manifest.write(g.out_dir);
  out << report.dump(2) << "\n";
}

void apply_threads(const GlobalOptions& g) {
  int threads = g.threads;
  if (threads <= 0) {
    if (const char* env = std::getenv("PLUME_SCREEN_THREADS")) {
      try {
        threads = std::stoi(env);
      } catch (const std::exception&) {
        throw ConfigError(std::string("PLUME_SCREEN_THREADS is not an integer: '") + env + "'");
      }
    }
  }
  set_max_threads(threads > 0 ? static_cast<unsigned>(threads) : 0u);
}

void diagnose(std::ostream& err, const char* kind, const std::string& message) {
  err << json{{"error", kind}, {"message", message}}.dump() << "\n";
}

}  // namespace

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 failed");
  }
  std::ostringstream ss;
  for (unsigned int i = 0; i < len; ++i) ss << std::hex << std::setw(2) << std::setfill('0') << int{digest[i]};
  return ss.str();
}

std::string sha256_file(const fs::path& path) { return sha256_hex(read_text_file(path)); }

std::string tool_version() { return PLUMESCREEN_VERSION; }

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Methane plume versus retrieval artifact screening", "plumescreen"};
  app.set_version_flag("--version", tool_version());
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  app.add_option("--seed", g.seed, "Random seed for every stochastic step");
  app.add_option("--threads", g.threads, "Worker thread cap (default: PLUME_SCREEN_THREADS or all cores)");
  app.add_option("--out-dir", g.out_dir, "Directory for outputs and manifests");

  GenerateOptions gen;
  auto* sc_gen = app.add_subcommand("generate", "Generate a synthetic scene pack");
  sc_gen->add_option("--n", gen.n, "Number of scenes")->check(CLI::PositiveNumber);
  sc_gen->add_option("--plume-fraction", gen.plume_fraction, "Fraction of plume-labelled scenes")
      ->check(CLI::Range(0.0, 1.0));
  sc_gen->add_option("--scenario", gen.scenario, "physical or score_only")
      ->check(CLI::IsMember({"physical", "score_only"}));
  sc_gen->add_option("--config", gen.config, "Generator JSON config");
  sc_gen->add_option("--out", gen.out, "Output pack path (default <out-dir>/pack.spk)");

  ExtractOptions ext;
  auto* sc_ext = app.add_subcommand("extract", "Extract the 41 scalar features from a pack");
  sc_ext->add_option("--pack", ext.pack, "Input scene pack")->required();
  sc_ext->add_option("--out", ext.out, "Output CSV (default <out-dir>/features.csv)");

  TrainOptions tr;
  auto* sc_train = app.add_subcommand("train", "Train one model on a feature CSV");
  sc_train->add_option("--features", tr.features, "Feature CSV")->required();
  sc_train->add_option("--model", tr.model, "forest, boosted or svc");
  sc_train->add_option("--params", tr.params, "Hyperparameter JSON (missing keys take defaults)");
  sc_train->add_option("--out", tr.out, "Output model JSON");

  CvOptions cv;
  auto add_cv_options = [&](CLI::App* sc) {
    sc->add_option("--features", cv.features, "Feature CSV")->required();
    sc->add_option("--models", cv.models, "Comma-separated model kinds");
    sc->add_option("--folds", cv.folds, "Number of stratified folds")->check(CLI::Range(2, 1000));
    sc->add_option("--trials", cv.trials, "Random-search trials per model (0: evaluate fixed parameters)")
        ->check(CLI::NonNegativeNumber);
    sc->add_option("--space", cv.spaces, "KIND=FILE search space JSON");
    sc->add_option("--params", cv.params, "KIND=FILE fixed hyperparameters");
  };
  auto* sc_cv = app.add_subcommand("cv", "Cross-validate models (optionally with random search)");
  add_cv_options(sc_cv);
  auto* sc_search = app.add_subcommand("search", "Random hyperparameter search; reports the best parameters");
  add_cv_options(sc_search);

  EvalOptions ev;
  auto* sc_eval = app.add_subcommand("eval", "Evaluate saved models on a held-out feature CSV");
  sc_eval->add_option("--model", ev.models, "Model JSON (repeatable)")->required();
  sc_eval->add_option("--features", ev.features, "Feature CSV")->required();

  ExplainOptions ex;
  auto* sc_explain = app.add_subcommand("explain", "TreeSHAP attributions for a tree model");
  sc_explain->add_option("--model", ex.model, "Model JSON")->required();
  sc_explain->add_option("--features", ex.features, "Feature CSV")->required();
  sc_explain->add_option("--max-samples", ex.max_samples, "Explain a seeded subset of this many rows");
  sc_explain->add_option("--top", ex.top, "Rows of the ranking printed");

  ReportOptions rep;
  auto* sc_report = app.add_subcommand("report", "Combine cv, eval and explain outputs");
  sc_report->add_option("--cv", rep.cv, "cv_report.json");
  sc_report->add_option("--eval", rep.eval, "eval_report.json");
  sc_report->add_option("--shap", rep.shap, "KIND=shap_summary CSV");
  sc_report->add_option("--top", rep.top, "Features listed per model");
  sc_report->add_option("--out", rep.out, "Output JSON (default <out-dir>/report.json)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << tool_version() << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    diagnose(err, "usage", e.what());
    return kExitUsage;
  }

  try {
    apply_threads(g);
    fs::create_directories(g.out_dir);
    if (*sc_gen) cmd_generate(g, gen, out);
    else if (*sc_ext) cmd_extract(g, ext, out);
    else if (*sc_train) cmd_train(g, tr, out);
    else if (*sc_cv) cmd_cv(g, cv, false, out);
    else if (*sc_search) cmd_cv(g, cv, true, out);
    else if (*sc_eval) cmd_eval(g, ev, out);
    else if (*sc_explain) cmd_explain(g, ex, out);
    else if (*sc_report) cmd_report(g, rep, out);
  } catch (const ConfigError& e) {
    diagnose(err, "config", e.what());
    return kExitUsage;
  } catch (const TrainingError& e) {
    diagnose(err, "training", e.what());
    return kExitTraining;
  } catch (const DataError& e) {
    diagnose(err, "data", e.what());
    return kExitData;
  } catch (const fs::filesystem_error& e) {
    diagnose(err, "io", e.what());
    return kExitData;
  } catch (const json::exception& e) {
    diagnose(err, "data", e.what());
    return kExitData;
  }
  return kExitOk;
}

}  // namespace plumescreen
