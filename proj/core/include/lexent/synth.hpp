#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lexent/count_matrix.hpp"
#include "lexent/pairs.hpp"

namespace lexent {

// Generator for planted-pattern corpora. Each category has one hypernym and
// a few hyponyms; all of them share the category's topical contexts, and the
// hypernym additionally co-occurs with Hearst-pattern contexts built from its
// hyponyms (`nmod:such_as+cat`). Categories are dealt to pattern families by
// `family_share`, so with two families some hypernyms only ever show the
// second pattern.
struct SynthConfig {
  int categories = 40;
  int hyponyms_per_category = 3;
  // Context templates, `{}` is replaced by a hyponym.
  std::vector<std::string> pattern_families = {"nmod:such_as+{}"};
  double noise = 0.1;
  std::uint64_t seed = 1;

  // Relative share of categories covered by each family (defaults to equal).
  std::vector<double> family_share;
  // Expected pattern count per (hypernym, pattern context), per family.
  std::vector<double> family_strength;
  // Rate at which a pattern context also fires with other hypernyms of the
  // same family ("things such as cats"), relative to its own hypernym.
  double cross_rate = 0.15;

  int topical_contexts = 6;
  double topical_count = 8.0;
  // Unrelated filler words, used as consequents of random negatives.
  int distractors = 0;
  int distractor_contexts = 4;

  // Negatives generated per hyponym.
  int cohyponym_negatives = 1;
  int random_hypernym_negatives = 1;
  int random_distractor_negatives = 0;
  // Reversed (hypernym -> hyponym) negatives per category.
  int reversed_negatives = 0;

  static SynthConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

struct SynthCorpus {
  CountMatrix counts;
  std::vector<LabeledPair> pairs;
  std::vector<std::string> hypernyms;
  std::vector<std::vector<std::string>> hyponyms;      // per category
  std::vector<int> family_of_category;                 // -1 when uncovered
  std::vector<std::vector<std::string>> family_contexts;  // per family
};

SynthCorpus synth_corpus(const SynthConfig& config);

}  // namespace lexent
