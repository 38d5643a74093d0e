#include "lexent/folds.hpp"

#include <algorithm>

#include "lexent/error.hpp"
#include "lexent/random.hpp"

namespace lexent {

FoldPlan::FoldPlan(int num_folds, std::uint64_t seed, std::map<std::string, int> fold_of,
                   std::vector<LabeledPair> pairs)
    : num_folds_(num_folds), seed_(seed), fold_of_(std::move(fold_of)), pairs_(std::move(pairs)) {
  for (const auto& p : pairs_) {
    if (!fold_of_.contains(p.antecedent)) {
      throw InvalidArgument("fold plan: antecedent '" + p.antecedent + "' has no fold");
    }
  }
}

int FoldPlan::fold_of(const std::string& antecedent) const {
  auto it = fold_of_.find(antecedent);
  if (it == fold_of_.end()) throw InvalidArgument("no fold for '" + antecedent + "'");
  return it->second;
}

std::vector<std::string> FoldPlan::antecedents_in(int fold) const {
  std::vector<std::string> out;
  for (const auto& [token, f] : fold_of_) {
    if (f == fold) out.push_back(token);
  }
  return out;
}

FoldPlan make_folds(const std::vector<LabeledPair>& pairs, int num_folds, std::uint64_t seed) {
  if (num_folds < 2) throw InvalidArgument("make_folds: need at least 2 folds");
  std::vector<std::string> antecedents;
  {
    std::set<std::string> distinct;
    for (const auto& p : pairs) distinct.insert(p.antecedent);
    antecedents.assign(distinct.begin(), distinct.end());
  }
  if (antecedents.size() < static_cast<std::size_t>(num_folds)) {
    throw InvalidArgument("make_folds: " + std::to_string(antecedents.size()) +
                          " distinct antecedents cannot fill " + std::to_string(num_folds) +
                          " folds");
  }
  auto rng = make_rng(seed, "make_folds");
  std::shuffle(antecedents.begin(), antecedents.end(), rng);
  std::map<std::string, int> fold_of;
  for (std::size_t i = 0; i < antecedents.size(); ++i) {
    fold_of.emplace(antecedents[i], static_cast<int>(i % static_cast<std::size_t>(num_folds)));
  }
  return FoldPlan(num_folds, seed, std::move(fold_of), pairs);
}

bool FoldSplit::degenerate() const {
  bool pos = false;
  bool neg = false;
  for (const auto& p : train) (p.label ? pos : neg) = true;
  return !(pos && neg);
}

std::set<std::string> vocabulary(const std::vector<LabeledPair>& pairs) {
  std::set<std::string> vocab;
  for (const auto& p : pairs) {
    vocab.insert(p.antecedent);
    vocab.insert(p.consequent);
  }
  return vocab;
}

FoldSplit split_for_fold(const FoldPlan& plan, int fold, bool use_validation) {
  const int k = plan.num_folds();
  if (fold < 0 || fold >= k) throw InvalidArgument("split_for_fold: fold out of range");
  const int val_fold = (fold + k - 1) % k;

  FoldSplit split;
  split.fold = fold;
  for (const auto& p : plan.pairs()) {
    if (plan.fold_of(p.antecedent) == fold) split.test.push_back(p);
  }
  const auto test_vocab = vocabulary(split.test);
  auto touches = [](const std::set<std::string>& vocab, const LabeledPair& p) {
    return vocab.contains(p.antecedent) || vocab.contains(p.consequent);
  };

  std::set<std::string> val_vocab;
  if (use_validation) {
    for (const auto& p : plan.pairs()) {
      if (plan.fold_of(p.antecedent) == val_fold && !touches(test_vocab, p)) {
        split.val.push_back(p);
      }
    }
    val_vocab = vocabulary(split.val);
  }

  for (const auto& p : plan.pairs()) {
    const int f = plan.fold_of(p.antecedent);
    if (f == fold || (use_validation && f == val_fold)) continue;
    if (touches(test_vocab, p) || touches(val_vocab, p)) continue;
    split.train.push_back(p);
  }
  return split;
}

}  // namespace lexent
