#include <algorithm>
#include <atomic>
#include <map>
#include <mutex>
#include <thread>

#include "lexent/error.hpp"
#include "lexent/eval.hpp"
#include "lexent/metrics.hpp"
#include "lexent/model_io.hpp"
#include "lexent/vecspace.hpp"

namespace lexent {

namespace {

constexpr std::pair<ModelKind, std::string_view> kModelNames[] = {
    {ModelKind::kCosine, "cosine"},          {ModelKind::kConcat, "concat"},
    {ModelKind::kDiff, "diff"},              {ModelKind::kAsym, "asym"},
    {ModelKind::kConcatDiff, "concat_diff"}, {ModelKind::kConcatAsym, "concat_asym"},
    {ModelKind::kRbf, "rbf"},                {ModelKind::kHFeature, "hfeature"},
};

FeatureKind linear_features(ModelKind kind) {
  switch (kind) {
    case ModelKind::kConcat: return FeatureKind::kConcat;
    case ModelKind::kDiff: return FeatureKind::kDiff;
    case ModelKind::kAsym: return FeatureKind::kAsym;
    case ModelKind::kConcatDiff: return FeatureKind::kConcatDiff;
    case ModelKind::kConcatAsym: return FeatureKind::kConcatAsym;
    default: throw InvalidArgument("not a linear model kind: " + std::string(to_string(kind)));
  }
}

bool is_linear(ModelKind kind) {
  return kind != ModelKind::kCosine && kind != ModelKind::kRbf && kind != ModelKind::kHFeature;
}

// Feature rows for the pairs whose tokens both have vectors.
struct PairFeatures {
  Matrix X;
  std::vector<bool> predictable;
};

PairFeatures pair_features(FeatureKind kind, const std::vector<LabeledPair>& pairs,
                           const VectorSpace& space) {
  PairFeatures out;
  out.predictable.assign(pairs.size(), false);
  out.X = Matrix::Zero(static_cast<Eigen::Index>(pairs.size()),
                       static_cast<Eigen::Index>(feature_dim(kind, space.dim())));
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto H = space.lookup(pairs[i].consequent);
    const auto w = space.lookup(pairs[i].antecedent);
    if (!H || !w) continue;
    out.predictable[i] = true;
    out.X.row(static_cast<Eigen::Index>(i)) = feature_map(kind, *H, *w);
  }
  return out;
}

PairFeatures training_features(FeatureKind kind, const std::vector<LabeledPair>& train,
                               const VectorSpace& space) {
  PairFeatures f = pair_features(kind, train, space);
  for (std::size_t i = 0; i < train.size(); ++i) {
    if (!f.predictable[i]) {
      throw InvalidArgument("no word vector for pair (" + train[i].antecedent + ", " +
                            train[i].consequent + ")");
    }
  }
  return f;
}

template <typename DecisionFn>
std::vector<PairPrediction> predict_rows(const PairFeatures& f, DecisionFn&& decision) {
  std::vector<PairPrediction> out(f.predictable.size(), PairPrediction{false, false, 0.0});
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!f.predictable[i]) continue;
    const double d = decision(Vector(f.X.row(static_cast<Eigen::Index>(i)).transpose()));
    out[i] = {true, d >= 0.0, d};
  }
  return out;
}

}  // namespace

std::string_view to_string(ModelKind kind) {
  for (const auto& [k, name] : kModelNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

ModelKind parse_model_kind(std::string_view text) {
  for (const auto& [k, name] : kModelNames) {
    if (name == text) return k;
  }
  if (text == "rbf_concat") return ModelKind::kRbf;
  if (text == "h-feature" || text == "h_feature") return ModelKind::kHFeature;
  throw InvalidArgument("unknown model '" + std::string(text) + "'");
}

std::vector<ModelKind> all_model_kinds() {
  std::vector<ModelKind> out;
  for (const auto& entry : kModelNames) out.push_back(entry.first);
  return out;
}

PairClassifier::PairClassifier(CosineThreshold model)
    : kind_(ModelKind::kCosine), model_(model) {}

PairClassifier::PairClassifier(ModelKind kind, LinearModel model)
    : kind_(kind), model_(std::move(model)) {
  linear_features(kind);
}

PairClassifier::PairClassifier(KernelModel model)
    : kind_(ModelKind::kRbf), model_(std::move(model)) {}

PairClassifier::PairClassifier(HFeatureModel model)
    : kind_(ModelKind::kHFeature), model_(std::move(model)) {}

PairClassifier PairClassifier::fit(ModelKind kind, const std::vector<LabeledPair>& train,
                                   const VectorSpace& space, const GridPoint& point,
                                   RejectionMode rejection) {
  const auto labels = labels_of(train);
  switch (kind) {
    case ModelKind::kCosine: {
      const PairFeatures f = training_features(FeatureKind::kCosine, train, space);
      std::vector<double> sims(f.X.data(), f.X.data() + f.X.rows());
      return PairClassifier(fit_cosine_threshold(sims, labels));
    }
    case ModelKind::kRbf: {
      const PairFeatures f = training_features(FeatureKind::kRbfConcat, train, space);
      SvmOptions options;
      options.C = point.C;
      options.gamma = point.gamma;
      return PairClassifier(train_rbf_svm(f.X, labels, options));
    }
    case ModelKind::kHFeature: {
      HFeatureConfig config;
      config.n = std::max(point.n, 1);
      config.C_detector = point.C;
      config.C_final = point.final_C();
      config.gamma = point.gamma;
      config.rejection = rejection;
      return PairClassifier(fit_hfeature(train, space, config));
    }
    default: {
      const PairFeatures f = training_features(linear_features(kind), train, space);
      LogRegOptions options;
      options.C = point.C;
      return PairClassifier(kind, train_logreg(f.X, labels, options));
    }
  }
}

std::vector<PairPrediction> PairClassifier::predict(const std::vector<LabeledPair>& pairs,
                                                    const VectorSpace& space) const {
  if (const auto* cos = std::get_if<CosineThreshold>(&model_)) {
    const PairFeatures f = pair_features(FeatureKind::kCosine, pairs, space);
    return predict_rows(f, [&](const Vector& x) { return x(0) - cos->threshold; });
  }
  if (const auto* lin = std::get_if<LinearModel>(&model_)) {
    const PairFeatures f = pair_features(linear_features(kind_), pairs, space);
    return predict_rows(f, [&](const Vector& x) { return lin->decision(x); });
  }
  if (const auto* svm = std::get_if<KernelModel>(&model_)) {
    const PairFeatures f = pair_features(FeatureKind::kRbfConcat, pairs, space);
    return predict_rows(f, [&](const Vector& x) { return svm->decision(x); });
  }
  return std::get<HFeatureModel>(model_).predict(pairs, space);
}

nlohmann::json PairClassifier::to_json() const {
  nlohmann::json j;
  if (const auto* cos = std::get_if<CosineThreshold>(&model_)) {
    j = {{"kind", "cosine_threshold"}, {"threshold", cos->threshold}, {"train_f1", cos->train_f1}};
  } else if (const auto* lin = std::get_if<LinearModel>(&model_)) {
    j = lexent::to_json(*lin);
  } else if (const auto* svm = std::get_if<KernelModel>(&model_)) {
    j = lexent::to_json(*svm);
  } else {
    j = std::get<HFeatureModel>(model_).to_json();
  }
  j["model"] = std::string(to_string(kind_));
  return j;
}

std::vector<GridPoint> Grid::points(ModelKind kind) const {
  if (kind == ModelKind::kCosine) return {GridPoint{}};
  if (c_values.empty()) throw InvalidArgument("grid: no C values");
  for (double c : c_values) {
    if (!(c > 0.0)) throw InvalidArgument("grid: C values must be positive");
  }
  std::vector<GridPoint> out;
  if (is_linear(kind)) {
    for (double c : c_values) out.push_back({c, 0, 0.0, 0.0});
    return out;
  }
  if (gamma_values.empty()) throw InvalidArgument("grid: no gamma values");
  if (kind == ModelKind::kRbf) {
    for (double c : c_values) {
      for (double g : gamma_values) out.push_back({c, 0, g, 0.0});
    }
    return out;
  }
  if (n_values.empty()) throw InvalidArgument("grid: no n values");
  for (int n : n_values) {
    if (n < 1) throw InvalidArgument("grid: n values must be at least 1");
  }
  const std::vector<double> finals = separate_final_c ? c_values : std::vector<double>{0.0};
  for (double c : c_values) {
    for (int n : n_values) {
      for (double g : gamma_values) {
        for (double cf : finals) out.push_back({c, n, g, cf});
      }
    }
  }
  return out;
}

double f1_of(const std::vector<PredictionRecord>& predictions) {
  std::vector<int> pred;
  std::vector<int> gold;
  pred.reserve(predictions.size());
  gold.reserve(predictions.size());
  for (const auto& r : predictions) {
    pred.push_back(r.predictable && r.predicted);
    gold.push_back(r.pair.label);
  }
  return f1_score(pred, gold);
}

void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& fn) {
  const auto workers = static_cast<std::size_t>(std::clamp<long>(jobs, 1, static_cast<long>(std::max<std::size_t>(count, 1))));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> threads;
  for (std::size_t t = 0; t < workers; ++t) {
    threads.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : threads) t.join();
  if (failure) std::rethrow_exception(failure);
}

namespace {

double score_predictions(const std::vector<PairPrediction>& preds,
                         const std::vector<LabeledPair>& pairs) {
  std::vector<int> pred(preds.size());
  for (std::size_t i = 0; i < preds.size(); ++i) pred[i] = preds[i].predictable && preds[i].label;
  return f1_score(pred, labels_of(pairs));
}

using MaybeModel = std::optional<PairClassifier>;

// Fits every grid point. H-feature points sharing a detector C reuse one
// detector chain, extended to the largest n on the grid.
struct FoldTrainer {
  ModelKind kind;
  const std::vector<LabeledPair>& train;
  const VectorSpace& space;
  RejectionMode rejection;
  int max_n = 1;
  std::map<double, DetectorChain> chains;

  MaybeModel operator()(const GridPoint& point) {
    if (kind != ModelKind::kHFeature) return PairClassifier::fit(kind, train, space, point, rejection);
    auto it = chains.find(point.C);
    if (it == chains.end()) {
      it = chains.emplace(point.C, extract_detectors(train, space, max_n, point.C, rejection)).first;
    }
    if (static_cast<int>(it->second.detectors.size()) < point.n) return std::nullopt;
    HFeatureConfig config;
    config.n = point.n;
    config.C_detector = point.C;
    config.C_final = point.final_C();
    config.gamma = point.gamma;
    config.rejection = rejection;
    return PairClassifier(fit_final(it->second, config));
  }
};

}  // namespace

CvResult run_cv(ModelKind kind, const VectorSpace& space, const FoldPlan& plan, const Grid& grid,
                const CvOptions& options) {
  const std::vector<GridPoint> points = grid.points(kind);
  int max_n = 1;
  for (const auto& p : points) max_n = std::max(max_n, p.n);

  const auto K = static_cast<std::size_t>(plan.num_folds());
  std::vector<std::optional<FoldResult>> slots(K);
  std::vector<std::vector<std::string>> fold_warnings(K);

  auto notify = [&](Phase phase, int fold, const std::vector<LabeledPair>& pairs) {
    if (options.hooks.on_access) options.hooks.on_access(phase, fold, pairs);
  };

  parallel_for(K, options.jobs, [&](std::size_t index) {
    const int fold = static_cast<int>(index);
    const FoldSplit split = split_for_fold(plan, fold, options.use_validation);
    auto& warnings = fold_warnings[index];
    if (split.degenerate() || split.test.empty()) {
      warnings.push_back("fold " + std::to_string(fold) +
                         (split.test.empty() ? ": no test pairs" : ": degenerate training data") +
                         "; skipped");
      return;
    }
    FoldTrainer trainer{kind, split.train, space, options.rejection, max_n, {}};
    const bool has_val = !split.val.empty();
    auto fit = [&](const GridPoint& point) {
      notify(Phase::kFit, fold, split.train);
      return trainer(point);
    };
    auto score = [&](const MaybeModel& model, ScoreOn on) {
      if (!model) return -1.0;
      const auto& pairs = on == ScoreOn::kValidation ? split.val : split.train;
      notify(on == ScoreOn::kValidation ? Phase::kValidate : Phase::kFit, fold, pairs);
      return score_predictions(model->predict(pairs, space), pairs);
    };
    auto search = grid_search<MaybeModel>(points, has_val, fit, score);
    if (!search.model) {
      warnings.push_back("fold " + std::to_string(fold) + ": no grid point could be fitted; skipped");
      return;
    }
    for (const auto& w : search.warnings) warnings.push_back("fold " + std::to_string(fold) + ": " + w);

    FoldResult result;
    result.fold = fold;
    result.kind = kind;
    result.chosen = search.best;
    result.selection_score = search.score;
    result.training_fallback = search.used_training_fallback;
    result.train_size = split.train.size();
    result.val_size = split.val.size();
    notify(Phase::kTest, fold, split.test);
    const auto preds = search.model->predict(split.test, space);
    result.predictions.reserve(split.test.size());
    for (std::size_t i = 0; i < split.test.size(); ++i) {
      result.predictions.push_back(
          {split.test[i], preds[i].predictable, preds[i].predictable && preds[i].label, preds[i].decision});
    }
    result.f1 = f1_of(result.predictions);
    slots[index] = std::move(result);
  });

  CvResult out;
  out.kind = kind;
  out.num_folds = plan.num_folds();
  std::vector<PredictionRecord> pooled;
  for (std::size_t i = 0; i < K; ++i) {
    for (auto& w : fold_warnings[i]) out.warnings.push_back(std::move(w));
    if (!slots[i]) {
      out.skipped.push_back(static_cast<int>(i));
      continue;
    }
    pooled.insert(pooled.end(), slots[i]->predictions.begin(), slots[i]->predictions.end());
    out.folds.push_back(std::move(*slots[i]));
  }
  if (out.folds.empty()) throw Error("every fold was degenerate; nothing to evaluate");
  double sum = 0.0;
  for (const auto& f : out.folds) sum += f.f1;
  out.mean_f1 = sum / static_cast<double>(out.folds.size());
  out.pooled_f1 = f1_of(pooled);
  return out;
}

}  // namespace lexent
