#pragma once

#include <cstddef>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

namespace lexent {

class VectorSpace;

// "antecedent entails consequent", e.g. (cat, animal, true).
struct LabeledPair {
  std::string antecedent;
  std::string consequent;
  bool label = false;

  friend bool operator==(const LabeledPair&, const LabeledPair&) = default;
};

// Reads `antecedent<TAB>consequent<TAB>label` lines; `#` lines and blank lines
// are skipped. Labels: 0/1/true/false/True/False. A pair repeated with a
// different label is an error.
std::vector<LabeledPair> read_pairs(std::istream& in, const std::string& source = "<pairs>");
std::vector<LabeledPair> load_pairs(const std::string& path);
void write_pairs(const std::vector<LabeledPair>& pairs, std::ostream& out);

struct FilterResult {
  std::vector<LabeledPair> kept;
  std::size_t dropped = 0;
};

// Keeps pairs whose antecedent and consequent both have word vectors.
FilterResult filter_to_vocab(const std::vector<LabeledPair>& pairs, const VectorSpace& space);

// Labels as 0/1 ints, the form the classifiers take.
std::vector<int> labels_of(const std::vector<LabeledPair>& pairs);

}  // namespace lexent
