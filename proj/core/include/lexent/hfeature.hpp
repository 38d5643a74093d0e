#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "lexent/linalg.hpp"
#include "lexent/logreg.hpp"
#include "lexent/pairs.hpp"
#include "lexent/prediction.hpp"
#include "lexent/svm.hpp"

namespace lexent {

class VectorSpace;

// Component of x along p: (x.p / |p|^2) p. Throws on a zero p.
Vector project(const Vector& x, const Vector& p);

struct Rejection {
  Vector vector;
  bool exhausted = false;
};

// x minus its projection on p, rescaled to unit length. A rejection shorter
// than 1e-9 comes back as the zero vector with `exhausted` set.
Rejection reject_and_renormalize(const Vector& x, const Vector& p);

// <H.w, H.p, w.p, (H - w).p>
std::array<double, 4> meta_features(const Vector& consequent, const Vector& antecedent,
                                    const Vector& detector);

// Which direction is removed from antecedent vectors after each iteration.
enum class RejectionMode {
  kConsequentHalf,  // both sides lose the unit H-half of the Concat hyperplane
  kPerHalf,         // consequents lose the H-half, antecedents the w-half
};

std::string_view to_string(RejectionMode mode);
RejectionMode parse_rejection_mode(std::string_view text);

// Meta-feature groups withheld from the final classifier.
struct AblationMask {
  bool drop_similarity = false;  // slot 1
  bool drop_detectors = false;   // slots 2 and 3
  bool drop_inclusion = false;   // slot 4

  bool valid() const { return !(drop_similarity && drop_detectors && drop_inclusion); }
  std::vector<int> kept_slots() const;
  std::string name() const;
  static AblationMask parse(std::string_view text);

  friend bool operator==(const AblationMask&, const AblationMask&) = default;
};

struct Detector {
  Vector direction;    // unit H-half of the Concat hyperplane, k dims
  Vector antecedent_direction;  // unit w-half; only used by kPerHalf
  LinearModel source_model;
  int iteration = 0;   // 1-based
  double train_f1 = 0.0;  // of the Concat classifier on its own training data
};

// Fold-local copies of the word vectors of a pair set, one table for the
// consequent side and one for the antecedent side. Rejections are applied per
// distinct token, so the global space is never touched.
class PairVectors {
 public:
  // Throws InvalidArgument naming the first token without a vector.
  static PairVectors gather(const std::vector<LabeledPair>& pairs, const VectorSpace& space);

  std::size_t num_pairs() const { return pair_rows_.size(); }
  std::size_t dim() const { return static_cast<std::size_t>(consequents_.cols()); }
  Vector consequent(std::size_t pair) const;
  Vector antecedent(std::size_t pair) const;

  const RowMatrix& consequent_table() const { return consequents_; }
  const RowMatrix& antecedent_table() const { return antecedents_; }

  // Removes the detector's direction(s) from every stored vector.
  void reject(const Detector& detector, RejectionMode mode);
  bool all_exhausted() const;

 private:
  RowMatrix consequents_;
  RowMatrix antecedents_;
  std::vector<bool> consequent_exhausted_;
  std::vector<bool> antecedent_exhausted_;
  std::vector<std::pair<Eigen::Index, Eigen::Index>> pair_rows_;  // (consequent, antecedent)
};

// Trains a balanced logistic regression on <H, w> and keeps the normalized
// H-half of its weights. Throws "null detector" if that half vanishes.
Detector extract_detector(const PairVectors& vectors, std::span<const int> labels, double C,
                          int iteration = 1);

struct HFeatureConfig {
  int n = 1;
  double C_detector = 1.0;
  double C_final = 1.0;
  double gamma = 0.0;  // <= 0: 1 / (number of final features)
  RejectionMode rejection = RejectionMode::kConsequentHalf;
  AblationMask mask;
  double svm_tolerance = 1e-3;
};

// Output of the iterative stage alone. Detectors and meta-features for a
// chain of length m serve any n <= m, since iteration i never looks ahead.
struct DetectorChain {
  std::vector<Detector> detectors;
  Matrix meta;               // train pairs x 4 * detectors.size()
  std::vector<int> labels;
  std::uint64_t vocabulary_hash = 0;
  PairVectors final_vectors;  // training vectors after the last rejection
  std::string stop_reason;    // set when fewer detectors than requested
};

DetectorChain extract_detectors(const std::vector<LabeledPair>& train, const VectorSpace& space,
                                int max_iterations, double C_detector,
                                RejectionMode rejection = RejectionMode::kConsequentHalf);

// Columns of `meta` for the first n iterations, minus ablated slots.
Matrix select_meta_features(const Matrix& meta, int n, const AblationMask& mask);

class HFeatureModel {
 public:
  HFeatureModel() = default;
  HFeatureModel(std::vector<Detector> detectors, KernelModel final_model, HFeatureConfig config,
                std::uint64_t vocabulary_hash, double final_train_f1);

  int n() const { return static_cast<int>(detectors_.size()); }
  const std::vector<Detector>& detectors() const { return detectors_; }
  const KernelModel& final_model() const { return final_; }
  const HFeatureConfig& config() const { return config_; }
  std::uint64_t vocabulary_hash() const { return vocabulary_hash_; }
  double final_train_f1() const { return final_train_f1_; }

  // Replays the stored rejections on each pair's vectors and classifies the
  // 4n meta-features. Never refits.
  std::vector<PairPrediction> predict(const std::vector<LabeledPair>& pairs,
                                      const VectorSpace& space) const;
  // Raw (unablated) meta-features of one pair.
  Vector meta_features_of(const Vector& consequent, const Vector& antecedent) const;

  nlohmann::json to_json() const;
  static HFeatureModel from_json(const nlohmann::json& j);

 private:
  std::vector<Detector> detectors_;
  KernelModel final_;
  HFeatureConfig config_;
  std::uint64_t vocabulary_hash_ = 0;
  double final_train_f1_ = 0.0;
};

// Final RBF-SVM over the first config.n detectors of the chain.
HFeatureModel fit_final(const DetectorChain& chain, const HFeatureConfig& config);

// The full pipeline: n rounds of detector extraction and rejection, then the
// final classifier. Throws "space exhausted" if the rejections leave nothing.
HFeatureModel fit_hfeature(const std::vector<LabeledPair>& train, const VectorSpace& space,
                           const HFeatureConfig& config);

std::uint64_t training_vocabulary_hash(const std::vector<LabeledPair>& pairs);

}  // namespace lexent
