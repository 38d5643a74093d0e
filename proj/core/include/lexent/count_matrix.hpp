#pragma once

#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <Eigen/SparseCore>

namespace lexent {

// Interns strings into dense ids, in order of first appearance.
class TokenIndex {
 public:
  std::size_t intern(std::string_view token);
  std::optional<std::size_t> find(std::string_view token) const;
  const std::string& token(std::size_t id) const { return tokens_[id]; }
  const std::vector<std::string>& tokens() const { return tokens_; }
  std::size_t size() const { return tokens_.size(); }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, std::size_t> ids_;
};

// Sparse word x context matrix of nonnegative weights. Raw co-occurrence counts
// and their PPMI reweighting share this representation. Entries are kept sorted
// by (row, col); adding to an existing key accumulates, so keys stay unique.
class CountMatrix {
 public:
  struct Entry {
    std::size_t row;
    std::size_t col;
    double value;
  };

  CountMatrix() = default;

  // Accumulates `value` (> 0) into (word, context).
  void add(std::string_view word, std::string_view context, double value);
  void add(std::size_t row, std::size_t col, double value);

  std::size_t add_row(std::string_view word) { return rows_.intern(word); }
  std::size_t add_col(std::string_view context) { return cols_.intern(context); }

  std::size_t rows() const { return rows_.size(); }
  std::size_t cols() const { return cols_.size(); }
  std::size_t nonzeros() const { return cells_.size(); }
  bool empty() const { return cells_.empty(); }

  const TokenIndex& row_index() const { return rows_; }
  const TokenIndex& col_index() const { return cols_; }

  double at(std::size_t row, std::size_t col) const;
  double total() const;
  std::vector<Entry> entries() const;

  Eigen::SparseMatrix<double> to_sparse() const;

  // Tokens are "r<i>" / "c<j>"; zero cells are not stored.
  static CountMatrix from_dense(const Eigen::MatrixXd& dense);
  Eigen::MatrixXd to_dense() const;

  // Same token maps, no entries.
  CountMatrix with_same_index() const;

 private:
  TokenIndex rows_;
  TokenIndex cols_;
  std::map<std::pair<std::size_t, std::size_t>, double> cells_;
};

// Parses `word<TAB>context<TAB>count` lines. Any malformed line raises
// ParseError naming the line.
CountMatrix read_counts_tsv(std::istream& in, const std::string& source = "<counts>");
CountMatrix read_counts_tsv(const std::string& path);
void write_counts_tsv(const CountMatrix& counts, std::ostream& out);

// Keeps the `max_rows` most frequent words and `max_cols` most frequent
// contexts (by total count); 0 means no cap. Ties go to the earlier token.
CountMatrix cap_vocabulary(const CountMatrix& counts, std::size_t max_rows,
                           std::size_t max_cols);

}  // namespace lexent
