#include <gtest/gtest.h>

#include <map>
#include <mutex>
#include <random>
#include <set>

#include "fixtures.hpp"
#include "lexent/error.hpp"
#include "lexent/eval.hpp"
#include "lexent/folds.hpp"
#include "lexent/metrics.hpp"
#include "oracles.hpp"

using namespace lexent;

namespace {

Grid small_grid() {
  Grid g;
  g.c_values = {0.1, 1.0, 10.0};
  g.n_values = {1, 2};
  return g;
}

using Key = std::pair<std::string, std::string>;

std::set<Key> keys_of(const std::vector<LabeledPair>& pairs) {
  std::set<Key> out;
  for (const auto& p : pairs) out.insert({p.antecedent, p.consequent});
  return out;
}

}  // namespace

TEST(F1, FormulaExamples) {
  // TP = 2, FP = 1, FN = 1
  const std::vector<int> pred = {1, 1, 1, 0, 0};
  const std::vector<int> gold = {1, 1, 0, 1, 0};
  EXPECT_NEAR(f1_score(pred, gold), 2.0 / 3.0, 1e-15);
  EXPECT_EQ(f1_score(gold, gold), 1.0);
  EXPECT_EQ(f1_score(std::vector<int>(5, 0), gold), 0.0);
  EXPECT_THROW(f1_score(std::vector<int>{1}, gold), InvalidArgument);
  const Confusion c = confusion(pred, gold);
  EXPECT_EQ(c.tp, 2u);
  EXPECT_EQ(c.fp, 1u);
  EXPECT_EQ(c.fn, 1u);
  EXPECT_EQ(c.tn, 1u);
}

TEST(F1, UnpredictableCountsAsNegative) {
  std::vector<PredictionRecord> r = {
      {{"a", "b", true}, true, true, 1.0}, {{"c", "d", true}, false, true, 0.0}};
  EXPECT_NEAR(f1_of(r), 2.0 / 3.0, 1e-15);
}

TEST(ModelKinds, NamesRoundTrip) {
  for (ModelKind k : all_model_kinds()) EXPECT_EQ(parse_model_kind(to_string(k)), k);
  EXPECT_EQ(parse_model_kind("rbf_concat"), ModelKind::kRbf);
  EXPECT_THROW(parse_model_kind("ksim"), InvalidArgument);
  EXPECT_EQ(all_model_kinds().size(), 8u);
}

TEST(GridPoints, AxesPerKind) {
  Grid g;
  g.c_values = {1, 10};
  g.n_values = {1, 2, 3};
  g.gamma_values = {0.0, 0.5};
  EXPECT_EQ(g.points(ModelKind::kCosine).size(), 1u);
  EXPECT_EQ(g.points(ModelKind::kConcat).size(), 2u);
  EXPECT_EQ(g.points(ModelKind::kRbf).size(), 4u);
  EXPECT_EQ(g.points(ModelKind::kHFeature).size(), 12u);
  g.separate_final_c = true;
  const auto pts = g.points(ModelKind::kHFeature);
  EXPECT_EQ(pts.size(), 24u);
  for (const auto& p : pts) EXPECT_GT(p.C_final, 0.0);
  EXPECT_EQ(Grid{}.points(ModelKind::kConcat).size(), 9u);
}

TEST(PairClassifierFit, EveryKindFitsAndSerializes) {
  const auto& w = fixtures::world("one_family");
  const FoldSplit s = split_for_fold(make_folds(w.pairs, 5, 1), 0, false);
  for (ModelKind k : all_model_kinds()) {
    GridPoint point;
    point.n = 2;
    const PairClassifier m = PairClassifier::fit(k, s.train, w.space, point);
    EXPECT_EQ(m.kind(), k);
    const auto preds = m.predict(s.test, w.space);
    ASSERT_EQ(preds.size(), s.test.size());
    const auto j = m.to_json();
    EXPECT_TRUE(j.contains("kind")) << to_string(k);
    EXPECT_EQ(m.hfeature() != nullptr, k == ModelKind::kHFeature);
  }
}

TEST(RunCv, CosineOnRandomNegatives) {
  const auto& w = fixtures::world("random_negatives");
  const CvResult r = run_cv(ModelKind::kCosine, w.space, make_folds(w.pairs, 5, 1), Grid{});
  EXPECT_EQ(r.folds.size(), 5u);
  EXPECT_GE(r.mean_f1, 0.8);
}

TEST(RunCv, SameSeedSameResults) {
  const auto& w = fixtures::world("two_family");
  const FoldPlan plan = make_folds(w.pairs, 4, 3);
  const CvResult a = run_cv(ModelKind::kHFeature, w.space, plan, small_grid());
  const CvResult b = run_cv(ModelKind::kHFeature, w.space, plan, small_grid());
  ASSERT_EQ(a.folds.size(), b.folds.size());
  for (std::size_t f = 0; f < a.folds.size(); ++f) {
    EXPECT_EQ(a.folds[f].chosen, b.folds[f].chosen);
    EXPECT_EQ(a.folds[f].f1, b.folds[f].f1);
    for (std::size_t i = 0; i < a.folds[f].predictions.size(); ++i) {
      EXPECT_EQ(a.folds[f].predictions[i].decision, b.folds[f].predictions[i].decision);
    }
  }
}

TEST(RunCv, ParallelFoldsMatchSerial) {
  const auto& w = fixtures::world("two_family");
  const FoldPlan plan = make_folds(w.pairs, 4, 3);
  CvOptions par;
  par.jobs = 3;
  const CvResult a = run_cv(ModelKind::kConcat, w.space, plan, small_grid());
  const CvResult b = run_cv(ModelKind::kConcat, w.space, plan, small_grid(), par);
  EXPECT_EQ(a.mean_f1, b.mean_f1);
  EXPECT_EQ(a.pooled_f1, b.pooled_f1);
}

TEST(RunCv, HFeatureBeatsConcatWithTwoFamilies) {
  const auto& w = fixtures::world("two_family");
  const FoldPlan plan = make_folds(w.pairs, 5, 1);
  const CvResult h = run_cv(ModelKind::kHFeature, w.space, plan, Grid{});
  const CvResult c = run_cv(ModelKind::kConcat, w.space, plan, Grid{});
  EXPECT_GE(h.mean_f1, c.mean_f1);
}

TEST(RunCv, MeansPredictionsAndCoverage) {
  const auto& w = fixtures::world("two_family");
  const FoldPlan plan = make_folds(w.pairs, 5, 2);
  const CvResult r = run_cv(ModelKind::kConcatAsym, w.space, plan, small_grid());
  ASSERT_EQ(r.folds.size(), 5u);
  double sum = 0.0;
  std::vector<int> pooled_p, pooled_g;
  for (const auto& f : r.folds) {
    const FoldSplit s = split_for_fold(plan, f.fold, true);
    ASSERT_EQ(f.predictions.size(), s.test.size());
    for (std::size_t i = 0; i < s.test.size(); ++i) {
      EXPECT_EQ(f.predictions[i].pair, s.test[i]);
      EXPECT_EQ(f.predictions[i].predicted, f.predictions[i].decision >= 0.0);
      pooled_p.push_back(f.predictions[i].predicted);
      pooled_g.push_back(f.predictions[i].pair.label);
    }
    EXPECT_DOUBLE_EQ(f.f1, f1_of(f.predictions));
    EXPECT_EQ(f.train_size, s.train.size());
    EXPECT_EQ(f.val_size, s.val.size());
    sum += f.f1;
  }
  EXPECT_NEAR(r.mean_f1, sum / 5.0, 1e-15);
  EXPECT_NEAR(r.pooled_f1, oracle::f1(pooled_p, pooled_g), 1e-15);
}

TEST(RunCv, TestPairsNeverReachFittingOrSelection) {
  const auto& w = fixtures::world("two_family");
  const FoldPlan plan = make_folds(w.pairs, 5, 4);
  std::mutex mutex;
  std::map<int, std::set<std::string>> seen_tokens;  // fit + validate
  std::map<int, std::set<Key>> tested;
  std::map<int, int> fits;
  CvOptions o;
  o.jobs = 2;
  o.hooks.on_access = [&](Phase phase, int fold, const std::vector<LabeledPair>& pairs) {
    std::lock_guard lock(mutex);
    if (phase == Phase::kTest) {
      for (const auto& k : keys_of(pairs)) tested[fold].insert(k);
      return;
    }
    if (phase == Phase::kFit) ++fits[fold];
    for (const auto& t : vocabulary(pairs)) seen_tokens[fold].insert(t);
  };
  for (ModelKind k : {ModelKind::kCosine, ModelKind::kRbf, ModelKind::kHFeature}) {
    seen_tokens.clear();
    tested.clear();
    fits.clear();
    run_cv(k, w.space, plan, small_grid(), o);
    for (int f = 0; f < 5; ++f) {
      const FoldSplit s = split_for_fold(plan, f, true);
      EXPECT_EQ(tested[f], keys_of(s.test)) << to_string(k) << f;
      EXPECT_GT(fits[f], 0);
      for (const auto& t : vocabulary(s.test)) {
        EXPECT_EQ(seen_tokens[f].count(t), 0u) << to_string(k) << " fold " << f << " saw " << t;
      }
    }
  }
}

TEST(RunCv, DegenerateFoldSkippedWithWarning) {
  const auto& w = fixtures::world("one_family");
  const std::vector<LabeledPair> pairs = {
      {"cat", "fruit", true},   {"sofa", "fruit", false}, {"dog", "animal", true},
      {"car", "vehicle", true}, {"truck", "vehicle", true}, {"apple", "animal", false}};
  const FoldPlan plan(2, 0, {{"cat", 0}, {"sofa", 0}, {"dog", 0}, {"car", 1}, {"truck", 1}, {"apple", 1}},
                      pairs);
  CvOptions o;
  o.use_validation = false;
  const CvResult r = run_cv(ModelKind::kCosine, w.space, plan, Grid{}, o);
  ASSERT_EQ(r.folds.size(), 1u);
  EXPECT_EQ(r.folds[0].fold, 1);
  EXPECT_EQ(r.skipped, std::vector<int>{0});
  EXPECT_FALSE(r.warnings.empty());
  EXPECT_DOUBLE_EQ(r.mean_f1, r.folds[0].f1);

  const std::vector<LabeledPair> hopeless = {
      {"cat", "animal", true}, {"dog", "animal", false}, {"sofa", "animal", true}, {"car", "animal", false}};
  EXPECT_THROW(run_cv(ModelKind::kCosine, w.space, make_folds(hopeless, 2, 0), Grid{}, o), Error);
}

TEST(RunCv, NoValidationFallsBackToTrainingScore) {
  const auto& w = fixtures::world("one_family");
  CvOptions o;
  o.use_validation = false;
  const CvResult r = run_cv(ModelKind::kConcat, w.space, make_folds(w.pairs, 3, 1), small_grid(), o);
  for (const auto& f : r.folds) {
    EXPECT_TRUE(f.training_fallback);
    EXPECT_EQ(f.val_size, 0u);
  }
}

TEST(Bootstrap, IdenticalSystems) {
  std::mt19937_64 rng(1);
  std::vector<int> a(100), g(100);
  for (int i = 0; i < 100; ++i) {
    a[static_cast<std::size_t>(i)] = static_cast<int>(rng() % 2);
    g[static_cast<std::size_t>(i)] = static_cast<int>(rng() % 2);
  }
  const BootstrapResult r = bootstrap_compare(a, a, g, 2000, 3);
  EXPECT_EQ(r.p_value, 1.0);
  EXPECT_EQ(r.observed_delta, 0.0);
  EXPECT_TRUE(r.warnings.empty());
}

TEST(Bootstrap, PerfectVersusRandom) {
  std::mt19937_64 rng(2);
  std::vector<int> gold(200), random(200);
  for (std::size_t i = 0; i < 200; ++i) {
    gold[i] = static_cast<int>(rng() % 2);
    random[i] = static_cast<int>(rng() % 2);
  }
  const BootstrapResult r = bootstrap_compare(gold, random, gold, 10000, 4);
  EXPECT_LT(r.p_value, 0.01);
  EXPECT_GT(r.observed_delta, 0.0);
  EXPECT_EQ(r.resamples, 10000);
  // Reversing the roles flips the verdict.
  EXPECT_GT(bootstrap_compare(random, gold, gold, 2000, 4).p_value, 0.99);
}

TEST(Bootstrap, SingleResampleWarns) {
  const std::vector<int> a = {1, 0, 1, 1}, b = {0, 0, 1, 0}, g = {1, 0, 1, 0};
  const BootstrapResult r = bootstrap_compare(a, b, g, 1, 5);
  EXPECT_TRUE(r.p_value == 0.0 || r.p_value == 1.0);
  EXPECT_FALSE(r.warnings.empty());
}

TEST(Bootstrap, LengthMismatchAndSeedDeterminism) {
  const std::vector<int> a = {1, 0, 1}, b = {0, 1}, g = {1, 0, 1};
  EXPECT_THROW(bootstrap_compare(a, b, g), InvalidArgument);
  const std::vector<int> c = {0, 0, 1};
  EXPECT_EQ(bootstrap_compare(a, c, g, 500, 9).p_value, bootstrap_compare(a, c, g, 500, 9).p_value);
}

TEST(Bootstrap, AlignsRunsByPair) {
  const auto& w = fixtures::world("one_family");
  const FoldPlan plan = make_folds(w.pairs, 5, 1);
  const CvResult a = run_cv(ModelKind::kCosine, w.space, plan, Grid{});
  const CvResult b = run_cv(ModelKind::kDiff, w.space, plan, small_grid());
  const AlignedPredictions al = align_predictions(a, b);
  std::size_t total = 0;
  for (const auto& f : a.folds) total += f.predictions.size();
  EXPECT_EQ(al.a.size(), total);
  EXPECT_EQ(al.b.size(), total);
  EXPECT_NEAR(f1_score(al.a, al.gold), a.pooled_f1, 1e-15);
  EXPECT_NEAR(f1_score(al.b, al.gold), b.pooled_f1, 1e-15);

  const CvResult other = run_cv(ModelKind::kCosine, w.space, make_folds(w.pairs, 5, 2), Grid{});
  CvResult truncated = other;
  truncated.folds.pop_back();
  EXPECT_THROW(align_predictions(a, truncated), InvalidArgument);
}

TEST(Ablation, EmptyMaskIsExactlyZero) {
  const auto& w = fixtures::world("two_family");
  ValidationOptions o;
  o.n_values = {1, 2, 3};
  const AblationResult r = ablate(w.space, make_folds(w.pairs, 5, 1), {AblationMask{}}, o);
  ASSERT_EQ(r.rows.size(), 1u);
  for (double d : r.rows[0].delta) EXPECT_EQ(d, 0.0);
  EXPECT_EQ(r.rows[0].best_delta, 0.0);
  EXPECT_EQ(r.rows[0].mean_f1, r.full_mean_f1);
  EXPECT_EQ(r.folds_used, 5);
}

TEST(Ablation, SimilarityCarriesRandomNegatives) {
  const auto& w = fixtures::world("random_negatives");
  const AblationResult r =
      ablate(w.space, make_folds(w.pairs, 10, 1), {AblationMask::parse("no_similarity")});
  EXPECT_GT(r.rows[0].best_delta, 0.0);
}

TEST(Ablation, DetectorSlotsCarryWeakPattern) {
  const auto& w = fixtures::world("weak_pattern");
  const AblationResult r =
      ablate(w.space, make_folds(w.pairs, 10, 1), {AblationMask::parse("no_detectors")});
  EXPECT_GT(r.rows[0].best_delta, 0.0);
}

TEST(Ablation, DeltasAreFullMinusAblated) {
  const auto& w = fixtures::world("weak_pattern");
  ValidationOptions o;
  o.n_values = {1, 3};
  const AblationResult r = ablate(w.space, make_folds(w.pairs, 5, 1),
                                  {AblationMask::parse("no_inclusion"), AblationMask::parse("no_similarity")}, o);
  ASSERT_EQ(r.rows.size(), 2u);
  EXPECT_EQ(r.n_values, o.n_values);
  for (const auto& row : r.rows) {
    double best_full = 0.0, best_ablated = 0.0;
    for (std::size_t i = 0; i < o.n_values.size(); ++i) {
      EXPECT_NEAR(row.delta[i], r.full_mean_f1[i] - row.mean_f1[i], 1e-15);
      best_full = std::max(best_full, r.full_mean_f1[i]);
      best_ablated = std::max(best_ablated, row.mean_f1[i]);
    }
    EXPECT_NEAR(row.best_delta, best_full - best_ablated, 1e-15);
  }
}

TEST(Sweep, FirstEntryIsBaseline) {
  const auto& w = fixtures::world("one_family");
  const SweepResult r = iteration_sweep(w.space, make_folds(w.pairs, 5, 1));
  ASSERT_EQ(r.n_values, (std::vector<int>{1, 2, 3, 4, 5, 6}));
  EXPECT_EQ(r.delta[0], 0.0);
  for (std::size_t i = 0; i < r.delta.size(); ++i) {
    EXPECT_NEAR(r.delta[i], r.mean_f1[i] - r.mean_f1[0], 1e-15);
  }
}

TEST(Sweep, SecondFamilyHelps) {
  const auto& w = fixtures::world("two_family");
  const SweepResult r = iteration_sweep(w.space, make_folds(w.pairs, 10, 1));
  EXPECT_GT(r.delta[1], 0.0);
}

TEST(Sweep, SingleFamilyStaysFlat) {
  for (const char* name : {"one_family", "one_family_matched"}) {
    const auto& w = fixtures::world(name);
    const SweepResult r = iteration_sweep(w.space, make_folds(w.pairs, 10, 1));
    for (std::size_t i = 0; i < r.delta.size(); ++i) EXPECT_LE(std::abs(r.delta[i]), 0.05) << name << i;
  }
}

TEST(Sweep, ValidationOnlyNeverTouchesTest) {
  const auto& w = fixtures::world("one_family");
  const FoldPlan plan = make_folds(w.pairs, 5, 1);
  std::mutex mutex;
  bool saw_test = false;
  ValidationOptions o;
  o.n_values = {1, 2};
  o.hooks.on_access = [&](Phase phase, int, const std::vector<LabeledPair>&) {
    std::lock_guard lock(mutex);
    saw_test |= phase == Phase::kTest;
  };
  iteration_sweep(w.space, plan, o);
  EXPECT_FALSE(saw_test);
}

TEST(ParallelFor, VisitsEveryIndexOnce) {
  for (int jobs : {1, 2, 8}) {
    std::vector<int> hits(37, 0);
    parallel_for(hits.size(), jobs, [&](std::size_t i) { ++hits[i]; });
    for (int h : hits) EXPECT_EQ(h, 1);
  }
}
