#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "lexent/count_matrix.hpp"
#include "lexent/linalg.hpp"

namespace lexent {

// Positive pointwise mutual information with natural log and no smoothing.
// Cells that come out as zero are dropped. Throws InvalidArgument("empty
// counts") on an empty matrix.
CountMatrix ppmi_transform(const CountMatrix& counts);

struct SvdOptions {
  std::uint64_t seed = 0;
  // Inputs whose smaller side is at most this many rows/cols go through an
  // exact dense SVD; larger ones use the randomized range finder.
  std::size_t dense_threshold = 600;
  std::size_t oversample = 10;
  int power_iterations = 6;
};

struct SvdResult {
  Matrix U;       // rows x k
  Vector sigma;   // k, non-increasing
  Matrix V;       // cols x k
};

// Best rank-k approximation U diag(sigma) V^T. Signs are fixed so the largest
// magnitude entry of every column of U is positive, which makes results
// comparable across the dense and randomized paths.
SvdResult truncated_svd(const Eigen::SparseMatrix<double>& matrix, std::size_t k,
                        const SvdOptions& options = {});
SvdResult truncated_svd(const Matrix& matrix, std::size_t k, const SvdOptions& options = {});
SvdResult truncated_svd(const CountMatrix& matrix, std::size_t k,
                        const SvdOptions& options = {});

enum class Side { kWord, kContext };

std::string_view to_string(Side side);
Side parse_side(std::string_view text);

struct SpaceBuildOptions {
  std::size_t k = 50;
  std::size_t max_words = 0;
  std::size_t max_contexts = 0;
  SvdOptions svd;
};

// A built distributional space. Word rows are U_k S_k and context rows V_k,
// both normalized to unit length, so that W C^T reproduces the PPMI matrix up
// to row scaling. Immutable once built.
class VectorSpace {
 public:
  VectorSpace() = default;  // empty, k = 0
  VectorSpace(RowMatrix words, RowMatrix contexts, Vector sigma,
              std::vector<std::string> word_tokens, std::vector<std::string> context_tokens,
              nlohmann::json meta = nlohmann::json::object());

  std::size_t dim() const { return static_cast<std::size_t>(sigma_.size()); }
  std::size_t num_words() const { return word_tokens_.size(); }
  std::size_t num_contexts() const { return context_tokens_.size(); }

  const RowMatrix& words() const { return words_; }
  const RowMatrix& contexts() const { return contexts_; }
  const Vector& sigma() const { return sigma_; }
  const std::vector<std::string>& word_tokens() const { return word_tokens_; }
  const std::vector<std::string>& context_tokens() const { return context_tokens_; }
  const nlohmann::json& meta() const { return meta_; }

  std::optional<std::size_t> find(std::string_view token, Side side) const;

  // Missing (not an error) for unknown tokens and for words whose PPMI row
  // was all zero.
  std::optional<Vector> lookup(std::string_view token, Side side = Side::kWord) const;
  bool contains(std::string_view token, Side side = Side::kWord) const;

 private:
  RowMatrix words_;
  RowMatrix contexts_;
  Vector sigma_;
  std::vector<std::string> word_tokens_;
  std::vector<std::string> context_tokens_;
  TokenIndex word_index_;
  TokenIndex context_index_;
  std::vector<bool> live_words_;
  nlohmann::json meta_;
};

// PPMI -> truncated SVD -> row-normalized W and C.
VectorSpace build_space(const CountMatrix& counts, const SpaceBuildOptions& options);
VectorSpace build_space(const CountMatrix& counts, std::size_t k);

// Directory layout: meta.json, words.tsv, contexts.tsv, sigma.tsv. Floats are
// written with 9 significant digits.
void save_space(const VectorSpace& space, const std::string& dir);
VectorSpace load_space(const std::string& dir);

// Scales rows to unit length in place; returns which rows were zero (left
// untouched).
std::vector<bool> normalize_rows(RowMatrix& m);

}  // namespace lexent
