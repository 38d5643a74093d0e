#include "lexent/analysis.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>

#include "lexent/error.hpp"

namespace lexent {

NeighborReport nearest(const VectorSpace& space, const Vector& direction, Side side,
                       std::size_t top_k, const std::set<std::string>* dataset, std::string query) {
  if (static_cast<std::size_t>(direction.size()) != space.dim()) {
    throw InvalidArgument("nearest: direction has " + std::to_string(direction.size()) +
                          " dims, space has " + std::to_string(space.dim()));
  }
  const double dnorm = direction.norm();
  if (!(dnorm > 0.0)) throw InvalidArgument("nearest: zero direction");

  const RowMatrix& rows = side == Side::kWord ? space.words() : space.contexts();
  const auto& tokens = side == Side::kWord ? space.word_tokens() : space.context_tokens();
  const Vector unit = direction / dnorm;

  std::vector<Neighbor> all;
  all.reserve(tokens.size());
  for (Eigen::Index r = 0; r < rows.rows(); ++r) {
    const double rnorm = rows.row(r).norm();
    if (!(rnorm > 0.0)) continue;
    const double cos = rows.row(r).dot(unit) / rnorm;
    const auto& token = tokens[static_cast<std::size_t>(r)];
    all.push_back({token, cos, dataset && dataset->count(token) > 0});
  }
  const auto keep = std::min(top_k, all.size());
  auto order = [](const Neighbor& a, const Neighbor& b) {
    if (a.cosine != b.cosine) return a.cosine > b.cosine;
    return a.token < b.token;
  };
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(keep), all.end(), order);
  all.resize(keep);
  return {std::move(query), side, top_k, std::move(all)};
}

double decomposition_residual(const Vector& hyperplane, const Vector& consequent,
                              const Vector& antecedent) {
  const auto k = consequent.size();
  if (antecedent.size() != k || hyperplane.size() != 2 * k) {
    throw InvalidArgument("decomposition_residual: hyperplane must have twice the word dimension");
  }
  Vector pair(2 * k);
  pair << consequent, antecedent;
  const double joint = hyperplane.dot(pair);
  const double split = hyperplane.head(k).dot(consequent) + hyperplane.tail(k).dot(antecedent);
  return std::abs(joint - split);
}

double decomposition_residual(const LinearModel& concat, const Vector& consequent,
                              const Vector& antecedent) {
  return decomposition_residual(concat.weights, consequent, antecedent);
}

std::vector<NeighborReport> per_iteration_contexts(const HFeatureModel& model,
                                                   const VectorSpace& space, std::size_t top_k,
                                                   const std::set<std::string>* dataset) {
  std::vector<NeighborReport> out;
  for (const auto& d : model.detectors()) {
    out.push_back(nearest(space, d.direction, Side::kContext, top_k, dataset,
                          "detector " + std::to_string(d.iteration)));
  }
  return out;
}

namespace {

std::string cosine_text(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

}  // namespace

void write_markdown(std::ostream& out, const NeighborReport& report) {
  out << "### " << report.query << " (" << to_string(report.side) << "s, top " << report.top_k
      << ")\n\n";
  out << "| rank | token | cosine | in_dataset |\n";
  out << "|---:|---|---:|:---:|\n";
  for (std::size_t i = 0; i < report.neighbors.size(); ++i) {
    const auto& n = report.neighbors[i];
    out << "| " << i + 1 << " | " << (n.in_dataset ? "**" + n.token + "**" : n.token) << " | "
        << cosine_text(n.cosine) << " | " << (n.in_dataset ? "yes" : "no") << " |\n";
  }
  out << '\n';
}

void write_tsv(std::ostream& out, const NeighborReport& report) {
  out << "rank\ttoken\tcosine\tin_dataset\n";
  for (std::size_t i = 0; i < report.neighbors.size(); ++i) {
    const auto& n = report.neighbors[i];
    out << i + 1 << '\t' << n.token << '\t' << cosine_text(n.cosine) << '\t'
        << (n.in_dataset ? 1 : 0) << '\n';
  }
}

}  // namespace lexent
