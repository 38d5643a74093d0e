#pragma once

#include <iosfwd>
#include <set>
#include <string>
#include <vector>

#include "lexent/hfeature.hpp"
#include "lexent/linalg.hpp"
#include "lexent/logreg.hpp"
#include "lexent/vecspace.hpp"

namespace lexent {

struct Neighbor {
  std::string token;
  double cosine = 0.0;
  bool in_dataset = false;
};

struct NeighborReport {
  std::string query;
  Side side = Side::kWord;
  std::size_t top_k = 0;
  std::vector<Neighbor> neighbors;  // cosine non-increasing, ties by token
};

// Rows of W (or C) most similar to `direction`. Zero rows are never listed.
// `dataset` marks tokens that occur in the data; may be null.
NeighborReport nearest(const VectorSpace& space, const Vector& direction, Side side,
                       std::size_t top_k, const std::set<std::string>* dataset = nullptr,
                       std::string query = "direction");

// |p.<H, w> - (p_H.H + p_w.w)| for a hyperplane p over concatenated pairs.
double decomposition_residual(const Vector& hyperplane, const Vector& consequent,
                              const Vector& antecedent);
double decomposition_residual(const LinearModel& concat, const Vector& consequent,
                              const Vector& antecedent);

// Nearest contexts of each detector, in iteration order.
std::vector<NeighborReport> per_iteration_contexts(const HFeatureModel& model,
                                                   const VectorSpace& space, std::size_t top_k,
                                                   const std::set<std::string>* dataset = nullptr);

// Columns rank, token, cosine, in_dataset.
void write_markdown(std::ostream& out, const NeighborReport& report);
void write_tsv(std::ostream& out, const NeighborReport& report);

}  // namespace lexent
