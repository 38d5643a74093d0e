#include "lexent/features.hpp"

#include <string>

#include "lexent/error.hpp"

namespace lexent {

std::string_view to_string(FeatureKind kind) {
  switch (kind) {
    case FeatureKind::kCosine: return "cosine";
    case FeatureKind::kConcat: return "concat";
    case FeatureKind::kDiff: return "diff";
    case FeatureKind::kAsym: return "asym";
    case FeatureKind::kConcatDiff: return "concat_diff";
    case FeatureKind::kConcatAsym: return "concat_asym";
    case FeatureKind::kRbfConcat: return "rbf_concat";
  }
  return "?";
}

FeatureKind parse_feature_kind(std::string_view text) {
  for (auto kind : {FeatureKind::kCosine, FeatureKind::kConcat, FeatureKind::kDiff,
                    FeatureKind::kAsym, FeatureKind::kConcatDiff, FeatureKind::kConcatAsym,
                    FeatureKind::kRbfConcat}) {
    if (to_string(kind) == text) return kind;
  }
  throw InvalidArgument("unknown feature kind '" + std::string(text) + "'");
}

std::size_t feature_dim(FeatureKind kind, std::size_t k) {
  switch (kind) {
    case FeatureKind::kCosine: return 1;
    case FeatureKind::kConcat: return 2 * k;
    case FeatureKind::kDiff: return k;
    case FeatureKind::kAsym: return 2 * k;
    case FeatureKind::kConcatDiff: return 3 * k;
    case FeatureKind::kConcatAsym: return 4 * k;
    case FeatureKind::kRbfConcat: return 2 * k;
  }
  return 0;
}

Vector feature_map(FeatureKind kind, const Vector& H, const Vector& w) {
  if (H.size() != w.size()) {
    throw InvalidArgument("feature_map: dimension mismatch (" + std::to_string(H.size()) +
                          " vs " + std::to_string(w.size()) + ")");
  }
  const Eigen::Index k = H.size();
  Vector out(static_cast<Eigen::Index>(feature_dim(kind, static_cast<std::size_t>(k))));
  switch (kind) {
    case FeatureKind::kCosine:
      out(0) = H.dot(w);
      break;
    case FeatureKind::kConcat:
    case FeatureKind::kRbfConcat:
      out << H, w;
      break;
    case FeatureKind::kDiff:
      out = H - w;
      break;
    case FeatureKind::kAsym: {
      const Vector d = H - w;
      out << d, d.cwiseProduct(d);
      break;
    }
    case FeatureKind::kConcatDiff:
      out << H, w, H - w;
      break;
    case FeatureKind::kConcatAsym: {
      const Vector d = H - w;
      out << H, w, d, d.cwiseProduct(d);
      break;
    }
  }
  return out;
}

Matrix feature_matrix(FeatureKind kind, const std::vector<Vector>& consequents,
                      const std::vector<Vector>& antecedents) {
  if (consequents.size() != antecedents.size()) {
    throw InvalidArgument("feature_matrix: consequent/antecedent count mismatch");
  }
  if (consequents.empty()) return Matrix(0, 0);
  const auto k = static_cast<std::size_t>(consequents.front().size());
  Matrix X(static_cast<Eigen::Index>(consequents.size()),
           static_cast<Eigen::Index>(feature_dim(kind, k)));
  for (std::size_t i = 0; i < consequents.size(); ++i) {
    X.row(static_cast<Eigen::Index>(i)) = feature_map(kind, consequents[i], antecedents[i]);
  }
  return X;
}

}  // namespace lexent
