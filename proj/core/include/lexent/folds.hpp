#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "lexent/pairs.hpp"

namespace lexent {

// Partition of the distinct antecedent tokens into K folds. Every pair
// belongs to the fold of its antecedent.
class FoldPlan {
 public:
  FoldPlan(int num_folds, std::uint64_t seed, std::map<std::string, int> fold_of,
           std::vector<LabeledPair> pairs);

  int num_folds() const { return num_folds_; }
  std::uint64_t seed() const { return seed_; }
  const std::vector<LabeledPair>& pairs() const { return pairs_; }
  const std::map<std::string, int>& assignment() const { return fold_of_; }
  int fold_of(const std::string& antecedent) const;
  std::vector<std::string> antecedents_in(int fold) const;

 private:
  int num_folds_;
  std::uint64_t seed_;
  std::map<std::string, int> fold_of_;
  std::vector<LabeledPair> pairs_;
};

// Shuffles the distinct antecedents with `seed` and deals them round-robin,
// so fold sizes differ by at most one antecedent.
FoldPlan make_folds(const std::vector<LabeledPair>& pairs, int num_folds, std::uint64_t seed);

struct FoldSplit {
  int fold = 0;
  std::vector<LabeledPair> train;
  std::vector<LabeledPair> val;
  std::vector<LabeledPair> test;

  // Empty or single-class training data; such folds are skipped.
  bool degenerate() const;
};

// Test: pairs whose antecedent is in fold i. Validation (optional): fold i-1
// (mod K) minus pairs sharing any token with test. Train: everything else that
// shares no token, on either side, with test (nor with validation).
FoldSplit split_for_fold(const FoldPlan& plan, int fold, bool use_validation);

// Every token on either side of the pairs.
std::set<std::string> vocabulary(const std::vector<LabeledPair>& pairs);

}  // namespace lexent
