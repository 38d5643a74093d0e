#include "lexent/synth.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <random>
#include <set>

#include "lexent/error.hpp"
#include "lexent/random.hpp"

namespace lexent {
namespace {

struct NamedCategory {
  const char* hypernym;
  std::array<const char*, 6> hyponyms;
};

// A few readable categories first; the rest get generated names.
constexpr std::array<NamedCategory, 4> kNamed = {{
    {"animal", {"cat", "dog", "horse", "cow", "sheep", "goat"}},
    {"furniture", {"sofa", "chair", "table", "bed", "desk", "shelf"}},
    {"vehicle", {"car", "truck", "bus", "van", "tractor", "tram"}},
    {"fruit", {"apple", "pear", "plum", "cherry", "peach", "mango"}},
}};

std::string hypernym_name(int c) {
  if (c < static_cast<int>(kNamed.size())) return kNamed[static_cast<std::size_t>(c)].hypernym;
  return "hyper" + std::to_string(c);
}

std::string hyponym_name(int c, int j) {
  if (c < static_cast<int>(kNamed.size()) && j < 6) {
    return kNamed[static_cast<std::size_t>(c)].hyponyms[static_cast<std::size_t>(j)];
  }
  return "hypo" + std::to_string(c) + "_" + std::to_string(j);
}

std::string instantiate(const std::string& tmpl, const std::string& hyponym) {
  const auto pos = tmpl.find("{}");
  if (pos == std::string::npos) return tmpl + hyponym;
  return tmpl.substr(0, pos) + hyponym + tmpl.substr(pos + 2);
}

template <typename Rng>
void add_poisson(CountMatrix& m, const std::string& word, const std::string& context, double mean,
                 Rng& rng) {
  if (mean <= 0.0) return;
  std::poisson_distribution<int> dist(mean);
  const int n = dist(rng);
  if (n > 0) m.add(word, context, n);
}

template <typename Rng>
std::vector<std::size_t> sample_indices(std::size_t population, std::size_t count, Rng& rng) {
  std::vector<std::size_t> idx(population);
  std::iota(idx.begin(), idx.end(), 0);
  std::shuffle(idx.begin(), idx.end(), rng);
  idx.resize(std::min(count, population));
  return idx;
}

void validate(const SynthConfig& c) {
  if (c.categories < 2) throw InvalidArgument("synth: need at least 2 categories");
  if (c.hyponyms_per_category < 2) throw InvalidArgument("synth: need at least 2 hyponyms per category");
  if (c.noise < 0.0) throw InvalidArgument("synth: noise must be >= 0");
  if (!c.family_share.empty() && c.family_share.size() != c.pattern_families.size()) {
    throw InvalidArgument("synth: family_share must have one entry per pattern family");
  }
  if (!c.family_strength.empty() && c.family_strength.size() != c.pattern_families.size()) {
    throw InvalidArgument("synth: family_strength must have one entry per pattern family");
  }
}

}  // namespace

SynthConfig SynthConfig::from_json(const nlohmann::json& j) {
  SynthConfig c;
  try {
    c.categories = j.at("categories").get<int>();
    c.hyponyms_per_category = j.at("hyponyms_per_category").get<int>();
    c.pattern_families = j.at("pattern_families").get<std::vector<std::string>>();
    c.noise = j.at("noise").get<double>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.family_share = j.value("family_share", c.family_share);
    c.family_strength = j.value("family_strength", c.family_strength);
    c.cross_rate = j.value("cross_rate", c.cross_rate);
    c.topical_contexts = j.value("topical_contexts", c.topical_contexts);
    c.topical_count = j.value("topical_count", c.topical_count);
    c.distractors = j.value("distractors", c.distractors);
    c.distractor_contexts = j.value("distractor_contexts", c.distractor_contexts);
    c.cohyponym_negatives = j.value("cohyponym_negatives", c.cohyponym_negatives);
    c.random_hypernym_negatives = j.value("random_hypernym_negatives", c.random_hypernym_negatives);
    c.random_distractor_negatives =
        j.value("random_distractor_negatives", c.random_distractor_negatives);
    c.reversed_negatives = j.value("reversed_negatives", c.reversed_negatives);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("synth config: ") + e.what());
  }
  validate(c);
  return c;
}

nlohmann::json SynthConfig::to_json() const {
  return {
      {"categories", categories},
      {"hyponyms_per_category", hyponyms_per_category},
      {"pattern_families", pattern_families},
      {"noise", noise},
      {"seed", seed},
      {"family_share", family_share},
      {"family_strength", family_strength},
      {"cross_rate", cross_rate},
      {"topical_contexts", topical_contexts},
      {"topical_count", topical_count},
      {"distractors", distractors},
      {"distractor_contexts", distractor_contexts},
      {"cohyponym_negatives", cohyponym_negatives},
      {"random_hypernym_negatives", random_hypernym_negatives},
      {"random_distractor_negatives", random_distractor_negatives},
      {"reversed_negatives", reversed_negatives},
  };
}

SynthCorpus synth_corpus(const SynthConfig& config) {
  validate(config);
  const int num_cat = config.categories;
  const int per_cat = config.hyponyms_per_category;
  const auto num_fam = config.pattern_families.size();

  SynthCorpus out;
  out.family_contexts.resize(num_fam);
  out.family_of_category.assign(static_cast<std::size_t>(num_cat), -1);
  for (int c = 0; c < num_cat; ++c) {
    out.hypernyms.push_back(hypernym_name(c));
    auto& hypos = out.hyponyms.emplace_back();
    for (int j = 0; j < per_cat; ++j) hypos.push_back(hyponym_name(c, j));
  }

  // Categories are dealt to families by cumulative share.
  if (num_fam > 0) {
    std::vector<double> share = config.family_share;
    if (share.empty()) share.assign(num_fam, 1.0);
    const double total = std::accumulate(share.begin(), share.end(), 0.0);
    for (int c = 0; c < num_cat; ++c) {
      const double pos = (c + 0.5) / num_cat * total;
      double acc = 0.0;
      for (std::size_t f = 0; f < num_fam; ++f) {
        acc += share[f];
        if (pos < acc || f + 1 == num_fam) {
          out.family_of_category[static_cast<std::size_t>(c)] = static_cast<int>(f);
          break;
        }
      }
    }
  }
  std::vector<double> strength = config.family_strength;
  if (strength.empty()) strength.assign(num_fam, 6.0);

  auto rng = make_rng(config.seed, "synth_corpus");
  CountMatrix& m = out.counts;

  for (int c = 0; c < num_cat; ++c) {
    const auto& hyper = out.hypernyms[static_cast<std::size_t>(c)];
    const auto& hypos = out.hyponyms[static_cast<std::size_t>(c)];
    for (int t = 0; t < config.topical_contexts; ++t) {
      const std::string ctx = "topic" + std::to_string(c) + ":" + std::to_string(t);
      add_poisson(m, hyper, ctx, config.topical_count, rng);
      for (const auto& x : hypos) add_poisson(m, x, ctx, config.topical_count, rng);
    }
    // Hyponym-specific contexts; the hypernym sees them too, less often.
    for (const auto& x : hypos) {
      for (int t = 0; t < 2; ++t) {
        const std::string ctx = "own:" + x + ":" + std::to_string(t);
        add_poisson(m, x, ctx, config.topical_count, rng);
        add_poisson(m, hyper, ctx, 0.5 * config.topical_count, rng);
      }
    }
  }

  // Hearst-pattern contexts.
  for (int c = 0; c < num_cat; ++c) {
    const int f = out.family_of_category[static_cast<std::size_t>(c)];
    if (f < 0) continue;
    const auto fi = static_cast<std::size_t>(f);
    for (const auto& x : out.hyponyms[static_cast<std::size_t>(c)]) {
      const std::string ctx = instantiate(config.pattern_families[fi], x);
      out.family_contexts[fi].push_back(ctx);
      add_poisson(m, out.hypernyms[static_cast<std::size_t>(c)], ctx, strength[fi], rng);
      for (int other = 0; other < num_cat; ++other) {
        if (other == c || out.family_of_category[static_cast<std::size_t>(other)] != f) continue;
        add_poisson(m, out.hypernyms[static_cast<std::size_t>(other)], ctx,
                    config.cross_rate * strength[fi], rng);
      }
    }
  }

  std::vector<std::string> distractors;
  const int pool = std::max(1, config.distractors / 2);
  for (int d = 0; d < config.distractors; ++d) {
    const std::string word = "filler" + std::to_string(d);
    distractors.push_back(word);
    for (auto idx : sample_indices(static_cast<std::size_t>(pool),
                                   static_cast<std::size_t>(config.distractor_contexts), rng)) {
      add_poisson(m, word, "misc:" + std::to_string(idx), config.topical_count, rng);
    }
    // Guarantee the word exists even if every draw came up zero.
    m.add(word, "misc:" + std::to_string(d % pool), 1.0);
  }

  // Uniform background noise, proportional to each word's mass.
  if (config.noise > 0.0) {
    std::vector<double> mass(m.rows(), 0.0);
    for (const auto& e : m.entries()) mass[e.row] += e.value;
    const std::size_t num_cols = m.cols();
    std::uniform_int_distribution<std::size_t> pick(0, num_cols - 1);
    for (std::size_t r = 0; r < m.rows(); ++r) {
      std::poisson_distribution<int> events(config.noise * mass[r]);
      const int n = events(rng);
      for (int e = 0; e < n; ++e) m.add(r, pick(rng), 1.0);
    }
  }

  // Pairs.
  auto& pairs = out.pairs;
  for (int c = 0; c < num_cat; ++c) {
    const auto& hyper = out.hypernyms[static_cast<std::size_t>(c)];
    const auto& hypos = out.hyponyms[static_cast<std::size_t>(c)];
    for (std::size_t j = 0; j < hypos.size(); ++j) {
      const auto& x = hypos[j];
      pairs.push_back({x, hyper, true});
      std::vector<std::size_t> others;
      for (std::size_t o = 0; o < hypos.size(); ++o) {
        if (o != j) others.push_back(o);
      }
      for (auto o : sample_indices(others.size(),
                                   static_cast<std::size_t>(config.cohyponym_negatives), rng)) {
        pairs.push_back({x, hypos[others[o]], false});
      }
      for (auto o : sample_indices(static_cast<std::size_t>(num_cat - 1),
                                   static_cast<std::size_t>(config.random_hypernym_negatives),
                                   rng)) {
        const auto other = static_cast<int>(o) >= c ? o + 1 : o;
        pairs.push_back({x, out.hypernyms[other], false});
      }
      for (auto o : sample_indices(distractors.size(),
                                   static_cast<std::size_t>(config.random_distractor_negatives),
                                   rng)) {
        pairs.push_back({x, distractors[o], false});
      }
    }
    for (auto j : sample_indices(hypos.size(), static_cast<std::size_t>(config.reversed_negatives),
                                 rng)) {
      pairs.push_back({hyper, hypos[j], false});
    }
  }
  return out;
}

}  // namespace lexent
