#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cli.hpp"
#include "fixtures.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome lexent_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "lexent");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = lexent::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream in(s);
  for (std::string field; std::getline(in, field, sep);) out.push_back(field);
  return out;
}

// A two-family corpus and its space, shared by the whole suite.
class Cli : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    root_ = fixtures::temp_dir("cli");
    json synth = fixtures::two_family().to_json();
    std::ofstream(root_ / "synth.json") << synth.dump();
    const auto s = lexent_cli({"synth", "--config", (root_ / "synth.json").string(), "--out",
                               (root_ / "corpus").string()});
    ASSERT_EQ(s.code, 0) << s.err;
    const auto b = lexent_cli({"build-space", "--counts", counts(), "--k", "60", "--out", space()});
    ASSERT_EQ(b.code, 0) << b.err;
  }
  static std::string counts() { return (root_ / "corpus" / "counts.tsv").string(); }
  static std::string pairs() { return (root_ / "corpus" / "pairs.tsv").string(); }
  static std::string space() { return (root_ / "space").string(); }
  static fs::path out(const std::string& name) { return root_ / name; }

  static fs::path root_;
};

fs::path Cli::root_;

}  // namespace

TEST_F(Cli, SynthWritesCorpusFiles) {
  for (const char* f : {"counts.tsv", "pairs.tsv", "families.json", "config.echo.json"}) {
    EXPECT_TRUE(fs::exists(root_ / "corpus" / f)) << f;
  }
  const json fam = json::parse(slurp(root_ / "corpus" / "families.json"));
  EXPECT_FALSE(fam.empty());
}

TEST_F(Cli, BuildSpaceWritesMetaAndSummary) {
  const auto r = lexent_cli({"build-space", "--counts", counts(), "--k", "50", "--out", out("space50").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(out("space50") / "meta.json"));
  EXPECT_NE(r.out.find("k 50"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("words "), std::string::npos);
  EXPECT_NE(r.out.find("density"), std::string::npos);
}

TEST_F(Cli, BuildSpaceRankBoundIsRuntimeFailure) {
  const auto r = lexent_cli({"build-space", "--counts", counts(), "--k", "100000", "--out", out("huge").string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("k = 100000 must satisfy"), std::string::npos) << r.err;
}

TEST_F(Cli, BuildSpaceIsByteIdenticalOnRerun) {
  // Small dense threshold forces the seeded randomized path.
  const std::vector<std::string> base = {"build-space", "--counts", counts(), "--k", "20", "--seed", "5"};
  auto a = base, b = base;
  a.insert(a.end(), {"--out", out("rerun_a").string()});
  b.insert(b.end(), {"--out", out("rerun_b").string()});
  ASSERT_EQ(lexent_cli(a).code, 0);
  ASSERT_EQ(lexent_cli(b).code, 0);
  EXPECT_EQ(slurp(out("rerun_a") / "words.tsv"), slurp(out("rerun_b") / "words.tsv"));
  EXPECT_FALSE(slurp(out("rerun_a") / "words.tsv").empty());
}

TEST_F(Cli, MalformedCountsIsRuntimeFailure) {
  std::ofstream(out("bad_counts.tsv")) << "a\tb\t1\nbroken line\n";
  const auto r = lexent_cli({"build-space", "--counts", out("bad_counts.tsv").string(), "--out", out("bad").string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find(":2:"), std::string::npos) << r.err;
}

TEST_F(Cli, EvaluatePrintsWhatItWrites) {
  const auto r = lexent_cli({"evaluate", "--space", space(), "--data", pairs(), "--model", "cosine",
                             "--folds", "5", "--out", out("eval_cos").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const json results = json::parse(slurp(out("eval_cos") / "results.json"));
  ASSERT_EQ(results["models"].size(), 1u);
  const double mean = results["models"][0]["mean_f1"].get<double>();
  const auto lines = lines_of(r.out);
  ASSERT_GE(lines.size(), 3u);
  EXPECT_EQ(lines[0], "Mean F1 (5-fold lexical split)");
  const auto row = split(lines[2], '\t');
  ASSERT_EQ(row.size(), 2u);
  EXPECT_NEAR(std::stod(row[1]), mean, 5e-5);
  EXPECT_TRUE(fs::exists(out("eval_cos") / "predictions_cosine.tsv"));
  const auto csv = lines_of(slurp(out("eval_cos") / "summary.csv"));
  EXPECT_EQ(csv[0], "model,dataset,fold,C,n,f1");
}

TEST_F(Cli, MissingDatasetIsUsageError) {
  const auto r = lexent_cli({"evaluate", "--space", space(), "--data", out("nope.tsv").string(), "--out",
                             out("eval_missing").string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("nope.tsv"), std::string::npos);
}

TEST_F(Cli, TwoModelsShareFolds) {
  const auto r = lexent_cli({"evaluate", "--space", space(), "--data", pairs(), "--models", "concat,hfeature",
                             "--folds", "5", "--grid-c", "0.1,1", "--grid-n", "1,2", "--bootstrap-resamples",
                             "500", "--out", out("eval_two").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto lines = lines_of(r.out);
  EXPECT_EQ(split(lines[1], '\t'), (std::vector<std::string>{"dataset", "concat", "hfeature"}));
  EXPECT_EQ(split(lines[2], '\t').size(), 3u);
  EXPECT_NE(r.out.find("hfeature vs concat: delta"), std::string::npos);

  const json results = json::parse(slurp(out("eval_two") / "results.json"));
  ASSERT_EQ(results["models"].size(), 2u);
  const auto& fa = results["models"][0]["folds"];
  const auto& fb = results["models"][1]["folds"];
  ASSERT_EQ(fa.size(), fb.size());
  for (std::size_t i = 0; i < fa.size(); ++i) {
    EXPECT_EQ(fa[i]["fold"], fb[i]["fold"]);
    EXPECT_EQ(fa[i]["test_pairs"], fb[i]["test_pairs"]);
  }
  auto keys = [](const std::string& tsv) {
    std::vector<std::string> out;
    for (const auto& line : lines_of(tsv)) {
      const auto f = split(line, '\t');
      out.push_back(f[0] + "\t" + f[1] + "\t" + f[2]);
    }
    return out;
  };
  EXPECT_EQ(keys(slurp(out("eval_two") / "predictions_concat.tsv")),
            keys(slurp(out("eval_two") / "predictions_hfeature.tsv")));
  EXPECT_EQ(results["bootstrap"].size(), 1u);
}

TEST_F(Cli, SweepFindsSecondFamily) {
  const auto r = lexent_cli({"sweep-iterations", "--space", space(), "--data", pairs(), "--folds", "10",
                             "--out", out("sweep").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto csv = lines_of(slurp(out("sweep") / "sweep.csv"));
  ASSERT_EQ(csv.size(), 7u);
  EXPECT_EQ(csv[0], "n,mean_f1,delta");
  const auto n1 = split(csv[1], ',');
  const auto n2 = split(csv[2], ',');
  EXPECT_EQ(n1[0], "1");
  EXPECT_EQ(std::stod(n1[2]), 0.0);
  EXPECT_EQ(n2[0], "2");
  EXPECT_GT(std::stod(n2[2]), 0.0);
}

TEST_F(Cli, AblateWritesDeltasAndRejectsEmptyMaskList) {
  const auto ok = lexent_cli({"ablate", "--space", space(), "--data", pairs(), "--folds", "5", "--grid-n",
                              "1,2", "--masks", "no_similarity,no_inclusion", "--out", out("ablate").string()});
  ASSERT_EQ(ok.code, 0) << ok.err;
  const auto csv = lines_of(slurp(out("ablate") / "ablation.csv"));
  EXPECT_EQ(csv[0], "mask,n,full_f1,ablated_f1,delta");
  EXPECT_NE(ok.out.find("no_similarity"), std::string::npos);

  const auto bad = lexent_cli({"ablate", "--space", space(), "--data", pairs(), "--masks", "", "--out",
                               out("ablate_empty").string()});
  EXPECT_EQ(bad.code, 2);
  const auto unknown = lexent_cli({"ablate", "--space", space(), "--data", pairs(), "--masks", "no_magic",
                                   "--out", out("ablate_unknown").string()});
  EXPECT_EQ(unknown.code, 2);
}

TEST_F(Cli, AnalyzeWritesOneTablePerIteration) {
  const auto r = lexent_cli({"analyze", "--space", space(), "--data", pairs(), "--n", "3", "--top-k", "10",
                             "--out", out("analyze").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const std::string md = slurp(out("analyze") / "contexts.md");
  std::size_t tables = 0;
  for (std::size_t pos = 0; (pos = md.find("| rank | token | cosine | in_dataset |", pos)) != std::string::npos; ++pos) {
    ++tables;
  }
  EXPECT_EQ(tables, 3u);
  for (int i = 1; i <= 3; ++i) {
    const auto tsv = lines_of(slurp(out("analyze") / ("contexts_" + std::to_string(i) + ".tsv")));
    EXPECT_EQ(tsv.size(), 11u);
  }
  EXPECT_TRUE(fs::exists(out("analyze") / "model.json"));

  // A saved model gives the same reports without refitting.
  const auto again = lexent_cli({"analyze", "--space", space(), "--model-file",
                                 (out("analyze") / "model.json").string(), "--out", out("analyze2").string()});
  ASSERT_EQ(again.code, 0) << again.err;
  EXPECT_EQ(slurp(out("analyze2") / "contexts_2.tsv"), slurp(out("analyze") / "contexts_2.tsv"));
}

TEST_F(Cli, ConfigEchoReproducesRun) {
  const auto first = lexent_cli({"evaluate", "--space", space(), "--data", pairs(), "--models", "concat,diff",
                                 "--folds", "4", "--grid-c", "1,10", "--seed", "9", "--out", out("echo_a").string()});
  ASSERT_EQ(first.code, 0) << first.err;
  json echo = json::parse(slurp(out("echo_a") / "config.echo.json"));
  EXPECT_EQ(echo["command"], "evaluate");
  echo["out"] = out("echo_b").string();
  std::ofstream(out("echo.json")) << echo.dump();
  const auto second = lexent_cli({"evaluate", "--config", out("echo.json").string()});
  ASSERT_EQ(second.code, 0) << second.err;
  EXPECT_EQ(first.out, second.out);
  EXPECT_EQ(slurp(out("echo_a") / "summary.csv"), slurp(out("echo_b") / "summary.csv"));
  EXPECT_EQ(slurp(out("echo_a") / "predictions_diff.tsv"), slurp(out("echo_b") / "predictions_diff.tsv"));
}

TEST_F(Cli, FlagsOverrideConfig) {
  std::ofstream(out("override.json")) << json({{"folds", 3}, {"models", {"cosine"}}}).dump();
  const auto r = lexent_cli({"evaluate", "--config", out("override.json").string(), "--folds", "4", "--space",
                             space(), "--data", pairs(), "--out", out("override").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(lines_of(r.out)[0], "Mean F1 (4-fold lexical split)");
  EXPECT_EQ(json::parse(slurp(out("override") / "config.echo.json"))["folds"], 4);
}

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(lexent_cli({"frobnicate"}).code, 2);
  EXPECT_EQ(lexent_cli({}).code, 2);
  EXPECT_EQ(lexent_cli({"evaluate", "--folds", "many"}).code, 2);
  EXPECT_EQ(lexent_cli({"evaluate", "--space", space(), "--data", pairs(), "--folds", "1", "--out",
                        out("k1").string()})
                .code,
            2);
  EXPECT_EQ(lexent_cli({"evaluate", "--space", space(), "--data", pairs(), "--model", "ksim", "--out",
                        out("ksim").string()})
                .code,
            2);
  std::ofstream(out("unknown_key.json")) << json({{"flods", 3}}).dump();
  const auto r = lexent_cli({"evaluate", "--config", out("unknown_key.json").string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("flods"), std::string::npos);
  std::ofstream(out("wrong_cmd.json")) << json({{"command", "ablate"}}).dump();
  EXPECT_EQ(lexent_cli({"evaluate", "--config", out("wrong_cmd.json").string()}).code, 2);
  EXPECT_EQ(lexent_cli({"evaluate", "--space", space(), "--data", pairs()}).code, 2);  // no --out
}
