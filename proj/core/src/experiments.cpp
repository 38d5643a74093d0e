#include <algorithm>
#include <map>
#include <random>

#include "lexent/error.hpp"
#include "lexent/eval.hpp"
#include "lexent/metrics.hpp"
#include "lexent/random.hpp"

namespace lexent {

namespace {

double f1_from_counts(std::size_t tp, std::size_t predicted, std::size_t gold) {
  if (predicted == 0 || gold == 0) return 0.0;
  return 2.0 * static_cast<double>(tp) / static_cast<double>(predicted + gold);
}

}  // namespace

BootstrapResult bootstrap_compare(std::span<const int> predicted_a, std::span<const int> predicted_b,
                                  std::span<const int> gold, int resamples, std::uint64_t seed) {
  if (predicted_a.size() != gold.size() || predicted_b.size() != gold.size()) {
    throw InvalidArgument("bootstrap_compare: prediction and gold lengths differ");
  }
  if (gold.empty()) throw InvalidArgument("bootstrap_compare: no items");
  if (resamples < 1) throw InvalidArgument("bootstrap_compare: need at least one resample");

  BootstrapResult out;
  out.resamples = resamples;
  out.observed_delta = f1_score(predicted_a, gold) - f1_score(predicted_b, gold);
  if (resamples == 1) {
    out.warnings.push_back("a single bootstrap resample can only give p = 0 or p = 1");
  }

  auto rng = make_rng(seed, "bootstrap");
  std::uniform_int_distribution<std::size_t> pick(0, gold.size() - 1);
  long not_better = 0;
  for (int r = 0; r < resamples; ++r) {
    std::size_t tp_a = 0, pred_a = 0, tp_b = 0, pred_b = 0, pos = 0;
    for (std::size_t s = 0; s < gold.size(); ++s) {
      const std::size_t i = pick(rng);
      const bool g = gold[i] != 0;
      const bool a = predicted_a[i] != 0;
      const bool b = predicted_b[i] != 0;
      pos += g;
      pred_a += a;
      pred_b += b;
      tp_a += a && g;
      tp_b += b && g;
    }
    const double delta = f1_from_counts(tp_a, pred_a, pos) - f1_from_counts(tp_b, pred_b, pos);
    if (delta <= 0.0) ++not_better;
  }
  out.p_value = static_cast<double>(not_better) / static_cast<double>(resamples);
  return out;
}

AlignedPredictions align_predictions(const CvResult& a, const CvResult& b) {
  using Key = std::tuple<std::string, std::string>;
  std::map<Key, const PredictionRecord*> by_pair;
  for (const auto& fold : b.folds) {
    for (const auto& r : fold.predictions) by_pair[{r.pair.antecedent, r.pair.consequent}] = &r;
  }
  AlignedPredictions out;
  std::size_t count_a = 0;
  for (const auto& fold : a.folds) {
    for (const auto& r : fold.predictions) {
      ++count_a;
      const auto it = by_pair.find({r.pair.antecedent, r.pair.consequent});
      if (it == by_pair.end()) {
        throw InvalidArgument("runs cover different test pairs; cannot align predictions");
      }
      out.a.push_back(r.predictable && r.predicted);
      out.b.push_back(it->second->predictable && it->second->predicted);
      out.gold.push_back(r.pair.label);
    }
  }
  if (count_a != by_pair.size()) {
    throw InvalidArgument("runs cover different test pairs; cannot align predictions");
  }
  return out;
}

namespace {

// Mean validation F1 for each (mask, n), masks[0] being the full model.
struct ValidationTable {
  std::vector<std::vector<double>> mean;  // [mask][n index]
  int folds_used = 0;
  std::vector<std::string> warnings;
};

ValidationTable validation_table(const VectorSpace& space, const FoldPlan& plan,
                                 const std::vector<AblationMask>& masks,
                                 const ValidationOptions& options) {
  if (options.n_values.empty()) throw InvalidArgument("need at least one n value");
  for (int n : options.n_values) {
    if (n < 1) throw InvalidArgument("n values must be at least 1");
  }
  if (!(options.C > 0.0)) throw InvalidArgument("C must be positive");
  for (const auto& m : masks) {
    if (!m.valid()) throw InvalidArgument("ablation mask drops every slot group");
  }
  const int max_n = *std::max_element(options.n_values.begin(), options.n_values.end());
  const auto K = static_cast<std::size_t>(plan.num_folds());
  const std::size_t num_n = options.n_values.size();

  // [fold][mask][n]; empty when the fold was skipped.
  std::vector<std::vector<std::vector<double>>> scores(K);
  std::vector<std::vector<std::string>> fold_warnings(K);

  parallel_for(K, options.jobs, [&](std::size_t index) {
    const int fold = static_cast<int>(index);
    const FoldSplit split = split_for_fold(plan, fold, true);
    auto& warnings = fold_warnings[index];
    const std::string tag = "fold " + std::to_string(fold) + ": ";
    if (split.degenerate() || split.val.empty()) {
      warnings.push_back(tag + (split.val.empty() ? "no validation pairs" : "degenerate training data") +
                         "; skipped");
      return;
    }
    if (options.hooks.on_access) options.hooks.on_access(Phase::kFit, fold, split.train);
    const DetectorChain chain =
        extract_detectors(split.train, space, max_n, options.C, options.rejection);
    if (static_cast<int>(chain.detectors.size()) < max_n) {
      warnings.push_back(tag + "only " + std::to_string(chain.detectors.size()) +
                         " detectors (" + chain.stop_reason + "); deeper n scored as 0");
    }
    const auto gold = labels_of(split.val);
    if (options.hooks.on_access) options.hooks.on_access(Phase::kValidate, fold, split.val);
    auto& table = scores[index];
    table.assign(masks.size(), std::vector<double>(num_n, 0.0));
    for (std::size_t m = 0; m < masks.size(); ++m) {
      for (std::size_t j = 0; j < num_n; ++j) {
        const int n = options.n_values[j];
        if (static_cast<int>(chain.detectors.size()) < n) continue;
        HFeatureConfig config;
        config.n = n;
        config.C_detector = options.C;
        config.C_final = options.C;
        config.rejection = options.rejection;
        config.mask = masks[m];
        const HFeatureModel model = fit_final(chain, config);
        const auto preds = model.predict(split.val, space);
        std::vector<int> pred(preds.size());
        for (std::size_t i = 0; i < preds.size(); ++i) pred[i] = preds[i].predictable && preds[i].label;
        table[m][j] = f1_score(pred, gold);
      }
    }
  });

  ValidationTable out;
  out.mean.assign(masks.size(), std::vector<double>(num_n, 0.0));
  for (std::size_t f = 0; f < K; ++f) {
    for (auto& w : fold_warnings[f]) out.warnings.push_back(std::move(w));
    if (scores[f].empty()) continue;
    ++out.folds_used;
    for (std::size_t m = 0; m < masks.size(); ++m) {
      for (std::size_t j = 0; j < num_n; ++j) out.mean[m][j] += scores[f][m][j];
    }
  }
  if (out.folds_used == 0) throw Error("no fold had usable training and validation data");
  for (auto& row : out.mean) {
    for (double& v : row) v /= static_cast<double>(out.folds_used);
  }
  return out;
}

}  // namespace

AblationResult ablate(const VectorSpace& space, const FoldPlan& plan,
                      const std::vector<AblationMask>& masks, const ValidationOptions& options) {
  if (masks.empty()) throw InvalidArgument("no ablation masks given");
  std::vector<AblationMask> all{AblationMask{}};
  all.insert(all.end(), masks.begin(), masks.end());
  ValidationTable table = validation_table(space, plan, all, options);

  AblationResult out;
  out.n_values = options.n_values;
  out.full_mean_f1 = table.mean[0];
  out.folds_used = table.folds_used;
  out.warnings = std::move(table.warnings);
  const double best_full = *std::max_element(out.full_mean_f1.begin(), out.full_mean_f1.end());
  for (std::size_t m = 0; m < masks.size(); ++m) {
    AblationRow row;
    row.mask = masks[m];
    row.mean_f1 = table.mean[m + 1];
    for (std::size_t j = 0; j < row.mean_f1.size(); ++j) {
      row.delta.push_back(out.full_mean_f1[j] - row.mean_f1[j]);
    }
    row.best_delta = best_full - *std::max_element(row.mean_f1.begin(), row.mean_f1.end());
    out.rows.push_back(std::move(row));
  }
  return out;
}

SweepResult iteration_sweep(const VectorSpace& space, const FoldPlan& plan,
                            const ValidationOptions& options) {
  ValidationTable table = validation_table(space, plan, {AblationMask{}}, options);
  SweepResult out;
  out.n_values = options.n_values;
  out.mean_f1 = table.mean[0];
  out.folds_used = table.folds_used;
  out.warnings = std::move(table.warnings);
  for (double v : out.mean_f1) out.delta.push_back(v - out.mean_f1.front());
  return out;
}

}  // namespace lexent
