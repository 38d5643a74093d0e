#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "lexent/linalg.hpp"

namespace lexent {

// Pair feature maps of the baseline classifiers. H is the consequent (candidate
// hypernym), w the antecedent.
enum class FeatureKind {
  kCosine,       // [H.w]
  kConcat,       // <H, w>
  kDiff,         // H - w
  kAsym,         // <H - w, (H - w)^2>
  kConcatDiff,   // <H, w, H - w>
  kConcatAsym,   // <H, w, H - w, (H - w)^2>
  kRbfConcat,    // <H, w>, fed to an RBF kernel
};

std::string_view to_string(FeatureKind kind);
FeatureKind parse_feature_kind(std::string_view text);

std::size_t feature_dim(FeatureKind kind, std::size_t k);

Vector feature_map(FeatureKind kind, const Vector& consequent, const Vector& antecedent);

// One feature row per (H, w) pair.
Matrix feature_matrix(FeatureKind kind, const std::vector<Vector>& consequents,
                      const std::vector<Vector>& antecedents);

}  // namespace lexent
