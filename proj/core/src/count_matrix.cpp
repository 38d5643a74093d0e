#include "lexent/count_matrix.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>

#include "lexent/error.hpp"

namespace lexent {

std::size_t TokenIndex::intern(std::string_view token) {
  auto it = ids_.find(std::string(token));
  if (it != ids_.end()) return it->second;
  const std::size_t id = tokens_.size();
  tokens_.emplace_back(token);
  ids_.emplace(tokens_.back(), id);
  return id;
}

std::optional<std::size_t> TokenIndex::find(std::string_view token) const {
  auto it = ids_.find(std::string(token));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

void CountMatrix::add(std::string_view word, std::string_view context, double value) {
  add(rows_.intern(word), cols_.intern(context), value);
}

void CountMatrix::add(std::size_t row, std::size_t col, double value) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw InvalidArgument("count matrix entries must be positive and finite");
  }
  if (row >= rows_.size() || col >= cols_.size()) {
    throw InvalidArgument("count matrix index out of range");
  }
  cells_[{row, col}] += value;
}

double CountMatrix::at(std::size_t row, std::size_t col) const {
  auto it = cells_.find({row, col});
  return it == cells_.end() ? 0.0 : it->second;
}

double CountMatrix::total() const {
  double sum = 0.0;
  for (const auto& [key, value] : cells_) sum += value;
  return sum;
}

std::vector<CountMatrix::Entry> CountMatrix::entries() const {
  std::vector<Entry> out;
  out.reserve(cells_.size());
  for (const auto& [key, value] : cells_) out.push_back({key.first, key.second, value});
  return out;
}

Eigen::SparseMatrix<double> CountMatrix::to_sparse() const {
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(cells_.size());
  for (const auto& [key, value] : cells_) {
    triplets.emplace_back(static_cast<int>(key.first), static_cast<int>(key.second), value);
  }
  Eigen::SparseMatrix<double> m(static_cast<Eigen::Index>(rows()),
                                static_cast<Eigen::Index>(cols()));
  m.setFromTriplets(triplets.begin(), triplets.end());
  m.makeCompressed();
  return m;
}

CountMatrix CountMatrix::from_dense(const Eigen::MatrixXd& dense) {
  CountMatrix m;
  for (Eigen::Index i = 0; i < dense.rows(); ++i) m.add_row("r" + std::to_string(i));
  for (Eigen::Index j = 0; j < dense.cols(); ++j) m.add_col("c" + std::to_string(j));
  for (Eigen::Index i = 0; i < dense.rows(); ++i) {
    for (Eigen::Index j = 0; j < dense.cols(); ++j) {
      if (dense(i, j) != 0.0) {
        m.add(static_cast<std::size_t>(i), static_cast<std::size_t>(j), dense(i, j));
      }
    }
  }
  return m;
}

Eigen::MatrixXd CountMatrix::to_dense() const {
  Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows()),
                                                static_cast<Eigen::Index>(cols()));
  for (const auto& [key, value] : cells_) {
    dense(static_cast<Eigen::Index>(key.first), static_cast<Eigen::Index>(key.second)) = value;
  }
  return dense;
}

CountMatrix CountMatrix::with_same_index() const {
  CountMatrix m;
  m.rows_ = rows_;
  m.cols_ = cols_;
  return m;
}

namespace {

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  return fields;
}

}  // namespace

CountMatrix read_counts_tsv(std::istream& in, const std::string& source) {
  CountMatrix counts;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_tabs(line);
    if (fields.size() != 3) {
      throw ParseError(source, line_no, "expected word<TAB>context<TAB>count");
    }
    if (fields[0].empty() || fields[1].empty()) {
      throw ParseError(source, line_no, "empty word or context");
    }
    long long count = 0;
    const auto* first = fields[2].data();
    const auto* last = first + fields[2].size();
    const auto [ptr, ec] = std::from_chars(first, last, count);
    if (ec != std::errc() || ptr != last || count <= 0) {
      throw ParseError(source, line_no,
                       "count must be a positive integer, got '" + std::string(fields[2]) + "'");
    }
    counts.add(fields[0], fields[1], static_cast<double>(count));
  }
  return counts;
}

CountMatrix read_counts_tsv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open counts file: " + path);
  return read_counts_tsv(in, path);
}

void write_counts_tsv(const CountMatrix& counts, std::ostream& out) {
  for (const auto& e : counts.entries()) {
    out << counts.row_index().token(e.row) << '\t' << counts.col_index().token(e.col) << '\t'
        << static_cast<long long>(std::llround(e.value)) << '\n';
  }
}

namespace {

std::vector<bool> keep_top(const std::vector<double>& totals, std::size_t cap) {
  std::vector<bool> keep(totals.size(), true);
  if (cap == 0 || cap >= totals.size()) return keep;
  std::vector<std::size_t> order(totals.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return totals[a] > totals[b]; });
  std::fill(keep.begin(), keep.end(), false);
  for (std::size_t i = 0; i < cap; ++i) keep[order[i]] = true;
  return keep;
}

}  // namespace

CountMatrix cap_vocabulary(const CountMatrix& counts, std::size_t max_rows,
                           std::size_t max_cols) {
  std::vector<double> row_totals(counts.rows(), 0.0);
  std::vector<double> col_totals(counts.cols(), 0.0);
  const auto entries = counts.entries();
  for (const auto& e : entries) {
    row_totals[e.row] += e.value;
    col_totals[e.col] += e.value;
  }
  const auto keep_rows = keep_top(row_totals, max_rows);
  const auto keep_cols = keep_top(col_totals, max_cols);
  CountMatrix out;
  for (std::size_t r = 0; r < counts.rows(); ++r) {
    if (keep_rows[r]) out.add_row(counts.row_index().token(r));
  }
  for (std::size_t c = 0; c < counts.cols(); ++c) {
    if (keep_cols[c]) out.add_col(counts.col_index().token(c));
  }
  for (const auto& e : entries) {
    if (keep_rows[e.row] && keep_cols[e.col]) {
      out.add(counts.row_index().token(e.row), counts.col_index().token(e.col), e.value);
    }
  }
  return out;
}

}  // namespace lexent
