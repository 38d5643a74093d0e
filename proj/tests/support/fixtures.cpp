#include "fixtures.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <mutex>
#include <random>

#include "lexent/error.hpp"

namespace fixtures {

using lexent::SynthConfig;

SynthConfig one_family() {
  SynthConfig c;
  c.categories = 100;
  c.hyponyms_per_category = 3;
  c.pattern_families = {"nmod:such_as+{}"};
  c.noise = 0.1;
  c.seed = 1;
  return c;
}

SynthConfig two_family() {
  SynthConfig c;
  c.categories = 100;
  c.hyponyms_per_category = 3;
  c.pattern_families = {"nmod:such_as+{}", "nmod:including+{}"};
  c.family_share = {0.4, 0.6};
  c.family_strength = {2.0, 6.0};
  c.cross_rate = 1.0;
  c.noise = 0.6;
  c.topical_count = 3.0;
  c.seed = 2;
  return c;
}

SynthConfig one_family_matched() {
  SynthConfig c = two_family();
  c.pattern_families = {"nmod:such_as+{}"};
  c.family_share = {1.0};
  c.family_strength = {2.0};
  return c;
}

SynthConfig random_negatives() {
  SynthConfig c = one_family();
  c.cohyponym_negatives = 0;
  c.random_hypernym_negatives = 1;
  c.distractors = 60;
  c.random_distractor_negatives = 1;
  return c;
}

SynthConfig weak_pattern() {
  SynthConfig c = one_family();
  c.noise = 1.0;
  c.family_strength = {1.0};
  c.reversed_negatives = 3;
  return c;
}

bool World::in_family(const std::string& context, std::size_t f) const {
  const auto& fam = corpus.family_contexts.at(f);
  return std::find(fam.begin(), fam.end(), context) != fam.end();
}

World make_world(const SynthConfig& config, std::size_t k) {
  World w{lexent::synth_corpus(config), lexent::VectorSpace{}, {}};
  lexent::SpaceBuildOptions options;
  options.k = k;
  w.space = lexent::build_space(w.corpus.counts, options);
  w.pairs = lexent::filter_to_vocab(w.corpus.pairs, w.space).kept;
  return w;
}

const World& world(const std::string& name) {
  static std::mutex mutex;
  static std::map<std::string, World> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(name);
  if (it != cache.end()) return it->second;
  SynthConfig config;
  if (name == "one_family") config = one_family();
  else if (name == "two_family") config = two_family();
  else if (name == "one_family_matched") config = one_family_matched();
  else if (name == "random_negatives") config = random_negatives();
  else if (name == "weak_pattern") config = weak_pattern();
  else throw lexent::InvalidArgument("unknown fixture world " + name);
  return cache.emplace(name, make_world(config)).first->second;
}

std::filesystem::path temp_dir(const std::string& tag) {
  static std::vector<std::filesystem::path> created;
  static bool registered = false;
  if (!registered) {
    registered = true;
    std::atexit([] {
      std::error_code ec;
      for (const auto& p : created) std::filesystem::remove_all(p, ec);
    });
  }
  std::random_device rd;
  const auto dir = std::filesystem::temp_directory_path() /
                   ("lexent-" + tag + "-" + std::to_string(rd()) + std::to_string(rd()));
  std::filesystem::create_directories(dir);
  created.push_back(dir);
  return dir;
}

lexent::Matrix to_matrix(const oracle::Dense& d) {
  lexent::Matrix m(static_cast<Eigen::Index>(d.size()),
                   static_cast<Eigen::Index>(d.empty() ? 0 : d[0].size()));
  for (std::size_t i = 0; i < d.size(); ++i) {
    for (std::size_t j = 0; j < d[i].size(); ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = d[i][j];
    }
  }
  return m;
}

oracle::Dense to_dense(const lexent::Matrix& m) {
  oracle::Dense d(static_cast<std::size_t>(m.rows()), std::vector<double>(static_cast<std::size_t>(m.cols())));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) d[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = m(i, j);
  }
  return d;
}

}  // namespace fixtures
