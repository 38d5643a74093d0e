#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "lexent/linalg.hpp"
#include "lexent/pairs.hpp"
#include "lexent/synth.hpp"
#include "lexent/vecspace.hpp"
#include "oracles.hpp"

namespace fixtures {

// One "such as" family over 100 small categories, light noise. Negatives are
// one co-hyponym and one random hypernym per hyponym.
lexent::SynthConfig one_family();

// Two families; the first covers fewer categories with a weaker pattern, the
// second covers the rest with a stronger one. Heavier noise than one_family.
lexent::SynthConfig two_family();

// two_family() with the second family removed and every category moved to
// the first, otherwise identical.
lexent::SynthConfig one_family_matched();

// Positives against random negatives only (other hypernyms and filler words).
lexent::SynthConfig random_negatives();
// one_family() with a faint pattern drowned in noise, plus reversed negatives.
// Nothing saturates, so each meta-feature group has something to contribute.
lexent::SynthConfig weak_pattern();

inline constexpr std::size_t kDim = 60;

struct World {
  lexent::SynthCorpus corpus;
  lexent::VectorSpace space;
  std::vector<lexent::LabeledPair> pairs;  // filtered to the space

  std::vector<std::string> family(std::size_t f) const { return corpus.family_contexts.at(f); }
  bool in_family(const std::string& context, std::size_t f) const;
};

// Built once per process and config name.
const World& world(const std::string& name);
World make_world(const lexent::SynthConfig& config, std::size_t k = kDim);

// Fresh empty directory under the system temp dir, removed at exit.
std::filesystem::path temp_dir(const std::string& tag);

lexent::Matrix to_matrix(const oracle::Dense& d);
oracle::Dense to_dense(const lexent::Matrix& m);

}  // namespace fixtures
