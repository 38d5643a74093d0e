#include "cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "lexent/analysis.hpp"
#include "lexent/count_matrix.hpp"
#include "lexent/error.hpp"
#include "lexent/eval.hpp"
#include "lexent/folds.hpp"
#include "lexent/hfeature.hpp"
#include "lexent/pairs.hpp"
#include "lexent/random.hpp"
#include "lexent/results_io.hpp"
#include "lexent/synth.hpp"
#include "lexent/vecspace.hpp"

namespace lexent::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---- effective configuration -------------------------------------------

json defaults_for(const std::string& command) {
  const json common = {{"seed", 1}, {"out", nullptr}};
  json d = common;
  const json eval_inputs = {{"space", nullptr}, {"data", nullptr}, {"folds", 20},
                            {"jobs", 1},        {"rejection", "consequent_half"}};
  if (command == "build-space") {
    d.update({{"counts", nullptr},
              {"k", 50},
              {"max_words", 0},
              {"max_contexts", 0},
              {"dense_threshold", 600},
              {"oversample", 10},
              {"power_iterations", 6}});
  } else if (command == "evaluate") {
    d.update(eval_inputs);
    d.update({{"models", {"hfeature"}},
              {"grid_c", default_c_grid()},
              {"grid_n", {1, 2, 3, 4, 5, 6}},
              {"grid_gamma", {0.0}},
              {"separate_final_c", false},
              {"use_validation", true},
              {"bootstrap_resamples", 10000},
              {"dataset", nullptr}});
  } else if (command == "ablate") {
    d.update(eval_inputs);
    d.update({{"masks", {"no_similarity", "no_detectors", "no_inclusion"}},
              {"C", 1.0},
              {"grid_n", {1, 2, 3, 4, 5, 6}}});
  } else if (command == "sweep-iterations") {
    d.update(eval_inputs);
    d.update({{"C", 1.0}, {"grid_n", {1, 2, 3, 4, 5, 6}}});
  } else if (command == "analyze") {
    d.update({{"space", nullptr},
              {"data", nullptr},
              {"model_file", nullptr},
              {"n", 3},
              {"C", 1.0},
              {"top_k", 10},
              {"rejection", "consequent_half"}});
  } else if (command == "synth") {
    d.update(SynthConfig{}.to_json());
  }
  return d;
}

// Defaults, then the --config file, then explicit flags.
json merge_config(const std::string& command, const std::string& config_path,
                  const json& flags) {
  json cfg = defaults_for(command);
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) throw ConfigError("cannot open config file " + config_path);
    json file;
    try {
      file = json::parse(in);
    } catch (const json::exception& e) {
      throw ConfigError("config file " + config_path + ": " + e.what());
    }
    if (!file.is_object()) throw ConfigError("config file must hold a JSON object");
    for (const auto& [key, value] : file.items()) {
      if (key == "command") {
        if (value != command) {
          throw ConfigError("config file was written for '" + value.dump() + "', not '" + command + "'");
        }
        continue;
      }
      if (!cfg.contains(key)) throw ConfigError("unknown config key '" + key + "'");
      cfg[key] = value;
    }
  }
  for (const auto& [key, value] : flags.items()) cfg[key] = value;
  return cfg;
}

template <typename T>
T get(const json& cfg, const std::string& key) {
  try {
    return cfg.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("config key '" + key + "' is missing or has the wrong type");
  }
}

std::string required_path(const json& cfg, const std::string& key, bool directory) {
  if (!cfg.contains(key) || cfg[key].is_null()) throw ConfigError("missing required setting '" + key + "'");
  const auto path = get<std::string>(cfg, key);
  if (!fs::exists(path)) throw ConfigError(key + ": no such " + (directory ? "directory" : "file") + " '" + path + "'");
  if (directory != fs::is_directory(path)) {
    throw ConfigError(key + ": '" + path + "' is " + (directory ? "not a directory" : "a directory"));
  }
  return path;
}

std::string output_dir(const json& cfg) {
  if (!cfg.contains("out") || cfg["out"].is_null()) throw ConfigError("missing required setting 'out'");
  const auto out = get<std::string>(cfg, "out");
  if (out.empty()) throw ConfigError("'out' must not be empty");
  return out;
}

int positive_int(const json& cfg, const std::string& key, int minimum) {
  const int v = get<int>(cfg, key);
  if (v < minimum) throw ConfigError(key + " must be at least " + std::to_string(minimum));
  return v;
}

int jobs_of(const json& cfg) {
  const int j = get<int>(cfg, "jobs");
  if (j < 0) throw ConfigError("jobs must be >= 0");
  if (j == 0) return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  return j;
}

RejectionMode rejection_of(const json& cfg) {
  try {
    return parse_rejection_mode(get<std::string>(cfg, "rejection"));
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
}

std::vector<int> n_list(const json& cfg, const std::string& key) {
  const auto values = get<std::vector<int>>(cfg, key);
  if (values.empty()) throw ConfigError(key + " must not be empty");
  for (int v : values) {
    if (v < 1) throw ConfigError(key + " values must be >= 1");
  }
  return values;
}

std::vector<double> positive_list(const json& cfg, const std::string& key, bool allow_zero) {
  const auto values = get<std::vector<double>>(cfg, key);
  if (values.empty()) throw ConfigError(key + " must not be empty");
  for (double v : values) {
    if (!(v > 0.0) && !(allow_zero && v == 0.0)) throw ConfigError(key + " values must be positive");
  }
  return values;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw Error("cannot write " + path.string());
  f << text;
  if (!f) throw Error("error writing " + path.string());
}

void prepare_output(const std::string& out, const std::string& command, const json& cfg) {
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw Error("cannot create output directory " + out + ": " + ec.message());
  json echo = cfg;
  echo["command"] = command;
  write_file(fs::path(out) / "config.echo.json", echo.dump(2) + "\n");
}

std::string fixed(double v, int digits = 4) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

// Space and data shared by the evaluation commands.
struct Inputs {
  VectorSpace space;
  std::vector<LabeledPair> pairs;
  std::size_t dropped = 0;
};

Inputs load_inputs(const std::string& space_dir, const std::string& data_path, std::ostream& err) {
  Inputs in{load_space(space_dir), {}, 0};
  auto filtered = filter_to_vocab(load_pairs(data_path), in.space);
  in.pairs = std::move(filtered.kept);
  in.dropped = filtered.dropped;
  if (in.dropped > 0) {
    err << "note: " << in.dropped << " pairs dropped (token without a vector)\n";
  }
  if (in.pairs.empty()) throw Error("no pairs left after dropping out-of-vocabulary tokens");
  return in;
}

void print_warnings(std::ostream& err, const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) err << "warning: " << w << '\n';
}

// ---- subcommands --------------------------------------------------------

int cmd_build_space(const json& cfg, std::ostream& out, std::ostream& err) {
  const auto counts_path = required_path(cfg, "counts", false);
  const auto dir = output_dir(cfg);
  SpaceBuildOptions options;
  options.k = static_cast<std::size_t>(positive_int(cfg, "k", 1));
  options.max_words = static_cast<std::size_t>(positive_int(cfg, "max_words", 0));
  options.max_contexts = static_cast<std::size_t>(positive_int(cfg, "max_contexts", 0));
  options.svd.seed = get<std::uint64_t>(cfg, "seed");
  options.svd.dense_threshold = static_cast<std::size_t>(positive_int(cfg, "dense_threshold", 0));
  options.svd.oversample = static_cast<std::size_t>(positive_int(cfg, "oversample", 0));
  options.svd.power_iterations = positive_int(cfg, "power_iterations", 0);

  prepare_output(dir, "build-space", cfg);
  const CountMatrix counts = read_counts_tsv(counts_path);
  const VectorSpace space = build_space(counts, options);
  save_space(space, dir);
  const auto& meta = space.meta();
  const double cells = static_cast<double>(counts.rows()) * static_cast<double>(counts.cols());
  out << "words " << space.num_words() << ", contexts " << space.num_contexts() << ", k "
      << space.dim() << ", count density "
      << fixed(cells > 0 ? static_cast<double>(counts.nonzeros()) / cells : 0.0, 6)
      << ", ppmi nonzeros " << meta.value("nonzeros", 0) << '\n';
  const auto zero_rows = meta.value("zero_word_rows", 0);
  if (zero_rows > 0) err << "warning: " << zero_rows << " words have no vector (all-zero PPMI row)\n";
  return kSuccess;
}

Grid grid_of(const json& cfg) {
  Grid g;
  g.c_values = positive_list(cfg, "grid_c", false);
  g.n_values = n_list(cfg, "grid_n");
  g.gamma_values = positive_list(cfg, "grid_gamma", true);
  g.separate_final_c = get<bool>(cfg, "separate_final_c");
  return g;
}

int cmd_evaluate(const json& cfg, std::ostream& out, std::ostream& err) {
  const auto space_dir = required_path(cfg, "space", true);
  const auto data_path = required_path(cfg, "data", false);
  const auto dir = output_dir(cfg);
  const int folds = positive_int(cfg, "folds", 2);
  const auto seed = get<std::uint64_t>(cfg, "seed");
  std::vector<ModelKind> kinds;
  for (const auto& name : get<std::vector<std::string>>(cfg, "models")) {
    try {
      kinds.push_back(parse_model_kind(name));
    } catch (const InvalidArgument& e) {
      throw ConfigError(e.what());
    }
  }
  if (kinds.empty()) throw ConfigError("models must not be empty");
  const Grid grid = grid_of(cfg);
  CvOptions options;
  options.use_validation = get<bool>(cfg, "use_validation");
  options.jobs = jobs_of(cfg);
  options.rejection = rejection_of(cfg);
  const int resamples = positive_int(cfg, "bootstrap_resamples", 1);
  const std::string dataset = cfg["dataset"].is_null() ? fs::path(data_path).stem().string()
                                                        : get<std::string>(cfg, "dataset");

  prepare_output(dir, "evaluate", cfg);
  const Inputs in = load_inputs(space_dir, data_path, err);
  const FoldPlan plan = make_folds(in.pairs, folds, seed);

  std::vector<CvResult> results;
  for (auto kind : kinds) {
    err << "evaluating " << to_string(kind) << " (" << folds << " folds)\n";
    results.push_back(run_cv(kind, in.space, plan, grid, options));
    print_warnings(err, results.back().warnings);
  }

  json report = {{"config", cfg},
                 {"dataset", dataset},
                 {"pairs", in.pairs.size()},
                 {"dropped_pairs", in.dropped},
                 {"protocol",
                  "lexically disjoint folds; validation fold i-1; best grid point refit on the "
                  "training split only"},
                 {"models", json::array()},
                 {"bootstrap", json::array()}};
  for (const auto& r : results) {
    report["models"].push_back(to_json(r));
    std::ofstream tsv(fs::path(dir) / ("predictions_" + std::string(to_string(r.kind)) + ".tsv"));
    write_predictions_tsv(tsv, r);
  }

  // The H-feature model (or else the first model) against every other one.
  std::size_t anchor = 0;
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (results[i].kind == ModelKind::kHFeature) anchor = i;
  }
  std::vector<std::string> comparisons;
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (i == anchor) continue;
    const auto aligned = align_predictions(results[anchor], results[i]);
    const auto boot = bootstrap_compare(aligned.a, aligned.b, aligned.gold, resamples,
                                        derive_seed(seed, "evaluate_bootstrap", i));
    print_warnings(err, boot.warnings);
    report["bootstrap"].push_back({{"a", to_string(results[anchor].kind)},
                                   {"b", to_string(results[i].kind)},
                                   {"observed_delta", boot.observed_delta},
                                   {"p_value", boot.p_value},
                                   {"resamples", boot.resamples},
                                   {"one_sided", true}});
    comparisons.push_back(std::string(to_string(results[anchor].kind)) + " vs " +
                          std::string(to_string(results[i].kind)) + ": delta " +
                          fixed(boot.observed_delta) + ", p = " + fixed(boot.p_value));
  }
  write_file(fs::path(dir) / "results.json", report.dump(2) + "\n");
  {
    std::ofstream csv(fs::path(dir) / "summary.csv");
    write_summary_csv(csv, results, dataset);
  }

  out << "Mean F1 (" << folds << "-fold lexical split)\n";
  out << "dataset";
  for (const auto& r : results) out << '\t' << to_string(r.kind);
  out << '\n' << dataset;
  for (const auto& r : results) out << '\t' << fixed(r.mean_f1);
  out << '\n';
  for (const auto& c : comparisons) out << c << '\n';
  return kSuccess;
}

std::vector<AblationMask> masks_of(const json& cfg) {
  std::vector<AblationMask> masks;
  for (const auto& text : get<std::vector<std::string>>(cfg, "masks")) {
    if (text.empty()) continue;
    try {
      masks.push_back(AblationMask::parse(text));
    } catch (const InvalidArgument& e) {
      throw ConfigError(e.what());
    }
  }
  if (masks.empty()) throw ConfigError("masks must not be empty");
  return masks;
}

ValidationOptions validation_options(const json& cfg) {
  ValidationOptions v;
  v.C = get<double>(cfg, "C");
  if (!(v.C > 0.0)) throw ConfigError("C must be positive");
  v.n_values = n_list(cfg, "grid_n");
  v.rejection = rejection_of(cfg);
  v.jobs = jobs_of(cfg);
  return v;
}

int cmd_ablate(const json& cfg, std::ostream& out, std::ostream& err) {
  const auto space_dir = required_path(cfg, "space", true);
  const auto data_path = required_path(cfg, "data", false);
  const auto dir = output_dir(cfg);
  const int folds = positive_int(cfg, "folds", 2);
  const auto masks = masks_of(cfg);
  const auto options = validation_options(cfg);

  prepare_output(dir, "ablate", cfg);
  const Inputs in = load_inputs(space_dir, data_path, err);
  const FoldPlan plan = make_folds(in.pairs, folds, get<std::uint64_t>(cfg, "seed"));
  const AblationResult result = ablate(in.space, plan, masks, options);
  print_warnings(err, result.warnings);

  write_file(fs::path(dir) / "ablation.json", json({{"config", cfg}, {"result", to_json(result)}}).dump(2) + "\n");
  {
    std::ofstream csv(fs::path(dir) / "ablation.csv");
    write_ablation_csv(csv, result);
  }
  out << "Absolute decrease in mean validation F1 (C = " << options.C << ", best n)\n";
  for (const auto& row : result.rows) out << row.mask.name() << '\t' << fixed(row.best_delta) << '\n';
  return kSuccess;
}

int cmd_sweep(const json& cfg, std::ostream& out, std::ostream& err) {
  const auto space_dir = required_path(cfg, "space", true);
  const auto data_path = required_path(cfg, "data", false);
  const auto dir = output_dir(cfg);
  const int folds = positive_int(cfg, "folds", 2);
  const auto options = validation_options(cfg);

  prepare_output(dir, "sweep-iterations", cfg);
  const Inputs in = load_inputs(space_dir, data_path, err);
  const FoldPlan plan = make_folds(in.pairs, folds, get<std::uint64_t>(cfg, "seed"));
  const SweepResult result = iteration_sweep(in.space, plan, options);
  print_warnings(err, result.warnings);

  write_file(fs::path(dir) / "sweep.json", json({{"config", cfg}, {"result", to_json(result)}}).dump(2) + "\n");
  {
    std::ofstream csv(fs::path(dir) / "sweep.csv");
    write_sweep_csv(csv, result);
  }
  out << "n\tmean_f1\tdelta\n";
  for (std::size_t j = 0; j < result.n_values.size(); ++j) {
    out << result.n_values[j] << '\t' << fixed(result.mean_f1[j]) << '\t' << fixed(result.delta[j]) << '\n';
  }
  return kSuccess;
}

int cmd_analyze(const json& cfg, std::ostream& out, std::ostream& err) {
  const auto space_dir = required_path(cfg, "space", true);
  const auto dir = output_dir(cfg);
  const bool have_model = !cfg["model_file"].is_null();
  const bool have_data = !cfg["data"].is_null();
  if (!have_model && !have_data) throw ConfigError("analyze needs 'data' (to fit a model) or 'model_file'");
  const std::string model_path = have_model ? required_path(cfg, "model_file", false) : "";
  const std::string data_path = have_data ? required_path(cfg, "data", false) : "";
  const int n = positive_int(cfg, "n", 1);
  const double C = get<double>(cfg, "C");
  if (!(C > 0.0)) throw ConfigError("C must be positive");
  const auto top_k = static_cast<std::size_t>(positive_int(cfg, "top_k", 0));
  const auto rejection = rejection_of(cfg);

  prepare_output(dir, "analyze", cfg);
  const VectorSpace space = load_space(space_dir);
  std::set<std::string> vocab;
  HFeatureModel model;
  if (have_data) {
    const Inputs in = load_inputs(space_dir, data_path, err);
    vocab = vocabulary(in.pairs);
    if (!have_model) {
      HFeatureConfig config;
      config.n = n;
      config.C_detector = C;
      config.C_final = C;
      config.rejection = rejection;
      model = fit_hfeature(in.pairs, space, config);
      write_file(fs::path(dir) / "model.json", model.to_json().dump(2) + "\n");
    }
  }
  if (have_model) {
    std::ifstream f(model_path);
    try {
      model = HFeatureModel::from_json(json::parse(f));
    } catch (const json::exception& e) {
      throw Error("cannot parse model file " + model_path + ": " + e.what());
    }
  }
  const auto* marks = vocab.empty() ? nullptr : &vocab;

  std::ostringstream contexts_md;
  std::ostringstream words_md;
  const auto reports = per_iteration_contexts(model, space, top_k, marks);
  for (std::size_t i = 0; i < reports.size(); ++i) {
    write_markdown(contexts_md, reports[i]);
    std::ofstream tsv(fs::path(dir) / ("contexts_" + std::to_string(i + 1) + ".tsv"));
    write_tsv(tsv, reports[i]);
    const auto& d = model.detectors()[i];
    const auto words = nearest(space, d.direction, Side::kWord, top_k, marks,
                               "detector " + std::to_string(d.iteration));
    write_markdown(words_md, words);
    std::ofstream wtsv(fs::path(dir) / ("words_" + std::to_string(i + 1) + ".tsv"));
    write_tsv(wtsv, words);
  }
  write_file(fs::path(dir) / "contexts.md", contexts_md.str());
  write_file(fs::path(dir) / "words.md", words_md.str());
  out << contexts_md.str();
  return kSuccess;
}

int cmd_synth(const json& cfg, std::ostream& out, std::ostream&) {
  const auto dir = output_dir(cfg);
  json synth_json = cfg;
  synth_json.erase("out");
  SynthConfig config;
  try {
    config = SynthConfig::from_json(synth_json);
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
  prepare_output(dir, "synth", cfg);
  const SynthCorpus corpus = synth_corpus(config);
  {
    std::ofstream f(fs::path(dir) / "counts.tsv");
    write_counts_tsv(corpus.counts, f);
  }
  {
    std::ofstream f(fs::path(dir) / "pairs.tsv");
    write_pairs(corpus.pairs, f);
  }
  json families = json::array();
  for (std::size_t i = 0; i < corpus.family_contexts.size(); ++i) {
    families.push_back({{"template", config.pattern_families[i]}, {"contexts", corpus.family_contexts[i]}});
  }
  write_file(fs::path(dir) / "families.json", families.dump(2) + "\n");
  std::size_t positives = 0;
  for (const auto& p : corpus.pairs) positives += p.label;
  out << "words " << corpus.counts.rows() << ", contexts " << corpus.counts.cols() << ", pairs "
      << corpus.pairs.size() << " (" << positives << " positive)\n";
  return kSuccess;
}

// ---- argument parsing ---------------------------------------------------

// Collects flags that were given explicitly, keyed by config name.
struct FlagSink {
  json values = json::object();
  std::vector<std::function<void()>> collectors;

  template <typename T>
  void add(CLI::App* app, const std::string& flag, const std::string& key, const std::string& help) {
    auto value = std::make_shared<T>();
    auto* opt = app->add_option(flag, *value, help);
    if constexpr (std::is_same_v<T, std::vector<std::string>> || std::is_same_v<T, std::vector<double>> ||
                  std::is_same_v<T, std::vector<int>>) {
      opt->delimiter(',');
    }
    collectors.push_back([this, opt, value, key] {
      if (opt->count() > 0) values[key] = *value;
    });
  }

  void add_switch(CLI::App* app, const std::string& flag, const std::string& key, bool value_when_set,
                  const std::string& help) {
    auto* opt = app->add_flag(flag, help);
    collectors.push_back([this, opt, key, value_when_set] {
      if (opt->count() > 0) values[key] = value_when_set;
    });
  }

  json collect() {
    for (auto& c : collectors) c();
    return values;
  }
};

void add_common(CLI::App* sub, FlagSink& sink, bool with_eval_inputs) {
  sink.add<std::uint64_t>(sub, "--seed", "seed", "Seed for every random stream");
  sink.add<std::string>(sub, "--out", "out", "Output directory");
  if (with_eval_inputs) {
    sink.add<std::string>(sub, "--space", "space", "Vector space directory");
    sink.add<std::string>(sub, "--data", "data", "Labeled pairs TSV");
    sink.add<int>(sub, "--folds", "folds", "Number of folds K (default 20)");
    sink.add<int>(sub, "--jobs", "jobs", "Folds run in parallel (0: all cores)");
    sink.add<std::string>(sub, "--rejection", "rejection", "consequent_half or per_half");
  }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Lexical entailment experiments over count-based vector spaces"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "lexent 0.1.0");

  std::string config_path;
  std::map<std::string, FlagSink> sinks;
  std::map<std::string, CLI::App*> subs;
  auto make = [&](const std::string& name, const std::string& help) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "JSON config; explicit flags take precedence");
    subs[name] = sub;
    return std::pair<CLI::App*, FlagSink*>{sub, &sinks[name]};
  };

  {
    auto [sub, s] = make("build-space", "PPMI + truncated SVD vector space from a counts TSV");
    add_common(sub, *s, false);
    s->add<std::string>(sub, "--counts", "counts", "word<TAB>context<TAB>count file");
    s->add<int>(sub, "--k", "k", "Dimensionality (default 50)");
    s->add<int>(sub, "--max-words", "max_words", "Keep the most frequent words (0: all)");
    s->add<int>(sub, "--max-contexts", "max_contexts", "Keep the most frequent contexts (0: all)");
  }
  {
    auto [sub, s] = make("evaluate", "Cross-validated F1 of one or more models");
    add_common(sub, *s, true);
    s->add<std::vector<std::string>>(sub, "--model,--models", "models", "Comma-separated model kinds");
    s->add<std::vector<double>>(sub, "--grid-c", "grid_c", "C values");
    s->add<std::vector<int>>(sub, "--grid-n", "grid_n", "Iteration counts (H-feature model)");
    s->add<std::vector<double>>(sub, "--grid-gamma", "grid_gamma", "RBF gamma values (0: 1/dim)");
    s->add_switch(sub, "--separate-final-c", "separate_final_c", true, "Grid-search C_final on its own axis");
    s->add_switch(sub, "--no-validation", "use_validation", false, "Select hyperparameters on training F1");
    s->add<int>(sub, "--bootstrap-resamples", "bootstrap_resamples", "Paired bootstrap resamples");
    s->add<std::string>(sub, "--dataset", "dataset", "Dataset name in reports");
  }
  {
    auto [sub, s] = make("ablate", "Validation-F1 loss from withholding meta-feature groups");
    add_common(sub, *s, true);
    s->add<std::vector<std::string>>(sub, "--masks", "masks",
                                     "Comma-separated masks, e.g. no_similarity,no_detectors+no_inclusion");
    s->add<double>(sub, "--C", "C", "Regularization for detectors and final classifier");
    s->add<std::vector<int>>(sub, "--grid-n", "grid_n", "Iteration counts");
  }
  {
    auto [sub, s] = make("sweep-iterations", "Validation F1 per iteration count, relative to the first");
    add_common(sub, *s, true);
    s->add<double>(sub, "--C", "C", "Regularization for detectors and final classifier");
    s->add<std::vector<int>>(sub, "--grid-n", "grid_n", "Iteration counts");
  }
  {
    auto [sub, s] = make("analyze", "Nearest contexts and words of each detector");
    add_common(sub, *s, false);
    s->add<std::string>(sub, "--space", "space", "Vector space directory");
    s->add<std::string>(sub, "--data", "data", "Labeled pairs TSV (fits a model and marks dataset words)");
    s->add<std::string>(sub, "--model-file", "model_file", "Saved H-feature model JSON");
    s->add<int>(sub, "--n", "n", "Iterations when fitting");
    s->add<double>(sub, "--C", "C", "Regularization when fitting");
    s->add<int>(sub, "--top-k", "top_k", "Neighbors per report");
    s->add<std::string>(sub, "--rejection", "rejection", "consequent_half or per_half");
  }
  {
    auto [sub, s] = make("synth", "Generate a planted-pattern counts file and pair set");
    add_common(sub, *s, false);
    s->add<int>(sub, "--categories", "categories", "Number of hypernym categories");
    s->add<int>(sub, "--hyponyms", "hyponyms_per_category", "Hyponyms per category");
    s->add<std::vector<std::string>>(sub, "--families", "pattern_families",
                                     "Pattern templates, '{}' marks the hyponym");
    s->add<double>(sub, "--noise", "noise", "Background noise rate");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kSuccess : kUsageError;
  }

  std::string command;
  for (const auto& [name, sub] : subs) {
    if (sub->parsed()) command = name;
  }

  json cfg;
  try {
    cfg = merge_config(command, config_path, sinks[command].collect());
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }

  try {
    if (command == "build-space") return cmd_build_space(cfg, out, err);
    if (command == "evaluate") return cmd_evaluate(cfg, out, err);
    if (command == "ablate") return cmd_ablate(cfg, out, err);
    if (command == "sweep-iterations") return cmd_sweep(cfg, out, err);
    if (command == "analyze") return cmd_analyze(cfg, out, err);
    if (command == "synth") return cmd_synth(cfg, out, err);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntimeFailure;
  }
  err << "error: unknown command\n";
  return kUsageError;
}

int run(int argc, const char* const* argv) { return run(argc, argv, std::cout, std::cerr); }

}  // namespace lexent::cli
