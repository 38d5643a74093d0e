#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "lexent/cosine_threshold.hpp"
#include "lexent/features.hpp"
#include "lexent/folds.hpp"
#include "lexent/grid_search.hpp"
#include "lexent/hfeature.hpp"
#include "lexent/logreg.hpp"
#include "lexent/prediction.hpp"
#include "lexent/svm.hpp"

namespace lexent {

class VectorSpace;

enum class ModelKind {
  kCosine,
  kConcat,
  kDiff,
  kAsym,
  kConcatDiff,
  kConcatAsym,
  kRbf,
  kHFeature,
};

std::string_view to_string(ModelKind kind);
ModelKind parse_model_kind(std::string_view text);
std::vector<ModelKind> all_model_kinds();

// Any fitted pair classifier.
class PairClassifier {
 public:
  PairClassifier() = default;
  explicit PairClassifier(CosineThreshold model);
  PairClassifier(ModelKind kind, LinearModel model);
  explicit PairClassifier(KernelModel model);
  explicit PairClassifier(HFeatureModel model);

  // Pairs must have vectors for both tokens.
  static PairClassifier fit(ModelKind kind, const std::vector<LabeledPair>& train,
                            const VectorSpace& space, const GridPoint& point,
                            RejectionMode rejection = RejectionMode::kConsequentHalf);

  ModelKind kind() const { return kind_; }
  std::vector<PairPrediction> predict(const std::vector<LabeledPair>& pairs,
                                      const VectorSpace& space) const;
  const HFeatureModel* hfeature() const { return std::get_if<HFeatureModel>(&model_); }
  nlohmann::json to_json() const;

 private:
  ModelKind kind_ = ModelKind::kCosine;
  std::variant<CosineThreshold, LinearModel, KernelModel, HFeatureModel> model_;
};

// Hyperparameter axes. `n_values` only applies to the H-feature model and
// `gamma_values` only to kernel models.
struct Grid {
  std::vector<double> c_values = default_c_grid();
  std::vector<int> n_values = {1, 2, 3, 4, 5, 6};
  std::vector<double> gamma_values = {0.0};
  // Grid-search the final-classifier C on its own axis instead of sharing C
  // with detector extraction.
  bool separate_final_c = false;

  std::vector<GridPoint> points(ModelKind kind) const;
};

enum class Phase { kFit, kValidate, kTest };

// Instrumentation. `on_access` sees every pair list handed to a model, tagged
// with what it is used for. May be called from several threads at once when
// jobs > 1.
struct CvHooks {
  std::function<void(Phase, int fold, const std::vector<LabeledPair>&)> on_access;
};

struct CvOptions {
  bool use_validation = true;
  int jobs = 1;
  RejectionMode rejection = RejectionMode::kConsequentHalf;
  CvHooks hooks;
};

struct PredictionRecord {
  LabeledPair pair;
  bool predictable = true;
  bool predicted = false;
  double decision = 0.0;
};

struct FoldResult {
  int fold = 0;
  ModelKind kind = ModelKind::kCosine;
  GridPoint chosen;
  double f1 = 0.0;
  double selection_score = 0.0;  // validation F1, or training F1 on fallback
  bool training_fallback = false;
  std::size_t train_size = 0;
  std::size_t val_size = 0;
  std::vector<PredictionRecord> predictions;  // the fold's test pairs, in order
};

struct CvResult {
  ModelKind kind = ModelKind::kCosine;
  int num_folds = 0;
  std::vector<FoldResult> folds;  // surviving folds only
  std::vector<int> skipped;       // degenerate folds
  double mean_f1 = 0.0;           // mean of per-fold F1
  double pooled_f1 = 0.0;         // F1 of all test predictions pooled
  std::vector<std::string> warnings;
};

// F1 of a fold's predictions. Unpredictable pairs count as negative.
double f1_of(const std::vector<PredictionRecord>& predictions);

// Lexically-disjoint cross-validation: per fold, grid search on (train, val),
// refit the winner on train alone, score on test.
CvResult run_cv(ModelKind kind, const VectorSpace& space, const FoldPlan& plan, const Grid& grid,
                const CvOptions& options = {});

struct BootstrapResult {
  double p_value = 1.0;
  double observed_delta = 0.0;  // F1(A) - F1(B) on the full sample
  int resamples = 0;
  std::vector<std::string> warnings;
};

// One-sided paired bootstrap: the fraction of resamples in which A does not
// beat B on F1.
BootstrapResult bootstrap_compare(std::span<const int> predicted_a, std::span<const int> predicted_b,
                                  std::span<const int> gold, int resamples = 10000,
                                  std::uint64_t seed = 0);

// Pooled test predictions of two runs over the same fold plan, aligned by
// pair. Throws if the runs cover different pairs.
struct AlignedPredictions {
  std::vector<int> a;
  std::vector<int> b;
  std::vector<int> gold;
};
AlignedPredictions align_predictions(const CvResult& a, const CvResult& b);

struct ValidationOptions {
  double C = 1.0;
  std::vector<int> n_values = {1, 2, 3, 4, 5, 6};
  RejectionMode rejection = RejectionMode::kConsequentHalf;
  int jobs = 1;
  CvHooks hooks;
};

struct AblationRow {
  AblationMask mask;
  std::vector<double> mean_f1;      // per n
  std::vector<double> delta;        // full minus ablated, per n
  double best_delta = 0.0;          // max over n of full minus max over n of ablated
};

struct AblationResult {
  std::vector<int> n_values;
  std::vector<double> full_mean_f1;  // per n
  std::vector<AblationRow> rows;
  int folds_used = 0;
  std::vector<std::string> warnings;
};

// Mean validation F1 of the full and each ablated H-feature model at fixed C,
// for every n. Each fold trains on its training split and scores on its
// validation fold.
AblationResult ablate(const VectorSpace& space, const FoldPlan& plan,
                      const std::vector<AblationMask>& masks, const ValidationOptions& options = {});

struct SweepResult {
  std::vector<int> n_values;
  std::vector<double> mean_f1;
  std::vector<double> delta;  // against the first entry of n_values
  int folds_used = 0;
  std::vector<std::string> warnings;
};

SweepResult iteration_sweep(const VectorSpace& space, const FoldPlan& plan,
                            const ValidationOptions& options = {});

// Runs fn(i) for i in [0, count) on up to `jobs` threads.
void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& fn);

}  // namespace lexent
