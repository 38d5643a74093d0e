#include "lexent/vecspace.hpp"

#include <cmath>

#include "lexent/error.hpp"

namespace lexent {

CountMatrix ppmi_transform(const CountMatrix& counts) {
  if (counts.empty()) throw InvalidArgument("empty counts");
  const auto entries = counts.entries();
  std::vector<double> row_totals(counts.rows(), 0.0);
  std::vector<double> col_totals(counts.cols(), 0.0);
  double grand_total = 0.0;
  for (const auto& e : entries) {
    row_totals[e.row] += e.value;
    col_totals[e.col] += e.value;
    grand_total += e.value;
  }
  if (!(grand_total > 0.0)) throw InvalidArgument("empty counts");

  CountMatrix out = counts.with_same_index();
  for (const auto& e : entries) {
    // log(p(w,c) / (p(w) p(c))) with every probability taken over the grand total.
    const double pmi = std::log(e.value * grand_total / (row_totals[e.row] * col_totals[e.col]));
    if (pmi > 0.0) out.add(e.row, e.col, pmi);
  }
  return out;
}

std::string_view to_string(Side side) { return side == Side::kWord ? "word" : "context"; }

Side parse_side(std::string_view text) {
  if (text == "word") return Side::kWord;
  if (text == "context") return Side::kContext;
  throw InvalidArgument("unknown side '" + std::string(text) + "' (expected word|context)");
}

std::vector<bool> normalize_rows(RowMatrix& m) {
  std::vector<bool> zero(static_cast<std::size_t>(m.rows()), false);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    const double norm = m.row(i).norm();
    if (norm > 0.0) {
      m.row(i) /= norm;
    } else {
      zero[static_cast<std::size_t>(i)] = true;
    }
  }
  return zero;
}

VectorSpace::VectorSpace(RowMatrix words, RowMatrix contexts, Vector sigma,
                         std::vector<std::string> word_tokens,
                         std::vector<std::string> context_tokens, nlohmann::json meta)
    : words_(std::move(words)),
      contexts_(std::move(contexts)),
      sigma_(std::move(sigma)),
      word_tokens_(std::move(word_tokens)),
      context_tokens_(std::move(context_tokens)),
      meta_(std::move(meta)) {
  if (static_cast<std::size_t>(words_.rows()) != word_tokens_.size() ||
      static_cast<std::size_t>(contexts_.rows()) != context_tokens_.size()) {
    throw InvalidArgument("vector space: token count does not match matrix rows");
  }
  if (words_.cols() != sigma_.size() || contexts_.cols() != sigma_.size()) {
    throw InvalidArgument("vector space: W, C and sigma disagree on k");
  }
  for (const auto& t : word_tokens_) word_index_.intern(t);
  for (const auto& t : context_tokens_) context_index_.intern(t);
  if (word_index_.size() != word_tokens_.size() ||
      context_index_.size() != context_tokens_.size()) {
    throw InvalidArgument("vector space: duplicate tokens");
  }
  live_words_.resize(word_tokens_.size());
  for (std::size_t i = 0; i < word_tokens_.size(); ++i) {
    live_words_[i] = words_.row(static_cast<Eigen::Index>(i)).squaredNorm() > 0.0;
  }
}

std::optional<std::size_t> VectorSpace::find(std::string_view token, Side side) const {
  return side == Side::kWord ? word_index_.find(token) : context_index_.find(token);
}

std::optional<Vector> VectorSpace::lookup(std::string_view token, Side side) const {
  const auto id = find(token, side);
  if (!id) return std::nullopt;
  if (side == Side::kWord) {
    if (!live_words_[*id]) return std::nullopt;
    return Vector(words_.row(static_cast<Eigen::Index>(*id)).transpose());
  }
  return Vector(contexts_.row(static_cast<Eigen::Index>(*id)).transpose());
}

bool VectorSpace::contains(std::string_view token, Side side) const {
  const auto id = find(token, side);
  if (!id) return false;
  return side == Side::kContext || live_words_[*id];
}

VectorSpace build_space(const CountMatrix& counts, const SpaceBuildOptions& options) {
  if (counts.empty()) throw InvalidArgument("empty counts");
  const CountMatrix capped = (options.max_words || options.max_contexts)
                                 ? cap_vocabulary(counts, options.max_words, options.max_contexts)
                                 : counts;
  const CountMatrix weighted = ppmi_transform(capped);
  const SvdResult svd = truncated_svd(weighted, options.k, options.svd);

  RowMatrix words = svd.U * svd.sigma.asDiagonal();
  RowMatrix contexts = svd.V;
  const auto zero_words = normalize_rows(words);
  normalize_rows(contexts);

  std::size_t zero_count = 0;
  for (bool z : zero_words) zero_count += z ? 1 : 0;

  nlohmann::json meta = {
      {"k", options.k},
      {"num_words", weighted.rows()},
      {"num_contexts", weighted.cols()},
      {"nonzeros", weighted.nonzeros()},
      {"seed", options.svd.seed},
      {"weighting", "ppmi"},
      {"word_rows", "normalize(U_k * S_k)"},
      {"context_rows", "normalize(V_k)"},
      {"contexts_normalized", true},
      {"zero_word_rows", zero_count},
      {"max_words", options.max_words},
      {"max_contexts", options.max_contexts},
      {"svd",
       {{"dense_threshold", options.svd.dense_threshold},
        {"oversample", options.svd.oversample},
        {"power_iterations", options.svd.power_iterations}}},
  };
  return VectorSpace(std::move(words), std::move(contexts), svd.sigma,
                     weighted.row_index().tokens(), weighted.col_index().tokens(),
                     std::move(meta));
}

VectorSpace build_space(const CountMatrix& counts, std::size_t k) {
  SpaceBuildOptions options;
  options.k = k;
  return build_space(counts, options);
}

}  // namespace lexent
