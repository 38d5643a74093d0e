#include "lexent/hfeature.hpp"

#include <algorithm>
#include <set>

#include "lexent/error.hpp"
#include "lexent/features.hpp"
#include "lexent/metrics.hpp"
#include "lexent/model_io.hpp"
#include "lexent/random.hpp"
#include "lexent/vecspace.hpp"

namespace lexent {

Vector project(const Vector& x, const Vector& p) {
  if (x.size() != p.size()) throw InvalidArgument("project: dimension mismatch");
  const double pp = p.squaredNorm();
  if (!(pp > 0.0)) throw InvalidArgument("project: zero direction");
  return (x.dot(p) / pp) * p;
}

Rejection reject_and_renormalize(const Vector& x, const Vector& p) {
  Vector r = x - project(x, p);
  const double norm = r.norm();
  if (norm < 1e-9) return {Vector::Zero(x.size()), true};
  return {r / norm, false};
}

std::array<double, 4> meta_features(const Vector& H, const Vector& w, const Vector& p) {
  if (H.size() != w.size() || H.size() != p.size()) {
    throw InvalidArgument("meta_features: dimension mismatch");
  }
  const double hp = H.dot(p);
  const double wp = w.dot(p);
  return {H.dot(w), hp, wp, hp - wp};
}

std::string_view to_string(RejectionMode mode) {
  return mode == RejectionMode::kConsequentHalf ? "consequent_half" : "per_half";
}

RejectionMode parse_rejection_mode(std::string_view text) {
  if (text == "consequent_half") return RejectionMode::kConsequentHalf;
  if (text == "per_half") return RejectionMode::kPerHalf;
  throw InvalidArgument("unknown rejection mode '" + std::string(text) + "'");
}

std::vector<int> AblationMask::kept_slots() const {
  std::vector<int> slots;
  if (!drop_similarity) slots.push_back(0);
  if (!drop_detectors) {
    slots.push_back(1);
    slots.push_back(2);
  }
  if (!drop_inclusion) slots.push_back(3);
  return slots;
}

std::string AblationMask::name() const {
  std::string out;
  auto add = [&](bool on, const char* label) {
    if (!on) return;
    if (!out.empty()) out += '+';
    out += label;
  };
  add(drop_similarity, "no_similarity");
  add(drop_detectors, "no_detectors");
  add(drop_inclusion, "no_inclusion");
  return out.empty() ? "full" : out;
}

AblationMask AblationMask::parse(std::string_view text) {
  AblationMask mask;
  if (text == "full" || text == "none" || text.empty()) return mask;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = std::min(text.find('+', start), text.size());
    const auto part = text.substr(start, end - start);
    if (part == "no_similarity" || part == "similarity") mask.drop_similarity = true;
    else if (part == "no_detectors" || part == "detectors") mask.drop_detectors = true;
    else if (part == "no_inclusion" || part == "inclusion") mask.drop_inclusion = true;
    else throw InvalidArgument("unknown ablation '" + std::string(part) + "'");
    start = end + 1;
  }
  if (!mask.valid()) throw InvalidArgument("ablation mask drops every slot group");
  return mask;
}

PairVectors PairVectors::gather(const std::vector<LabeledPair>& pairs, const VectorSpace& space) {
  PairVectors out;
  TokenIndex cons;
  TokenIndex ante;
  std::vector<Vector> cons_rows;
  std::vector<Vector> ante_rows;
  auto fetch = [&](const std::string& token) {
    auto v = space.lookup(token);
    if (!v) throw InvalidArgument("no word vector for '" + token + "'");
    return *v;
  };
  for (const auto& p : pairs) {
    const auto before_c = cons.size();
    const auto c = cons.intern(p.consequent);
    if (cons.size() != before_c) cons_rows.push_back(fetch(p.consequent));
    const auto before_a = ante.size();
    const auto a = ante.intern(p.antecedent);
    if (ante.size() != before_a) ante_rows.push_back(fetch(p.antecedent));
    out.pair_rows_.emplace_back(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(a));
  }
  const auto k = static_cast<Eigen::Index>(space.dim());
  out.consequents_.resize(static_cast<Eigen::Index>(cons_rows.size()), k);
  out.antecedents_.resize(static_cast<Eigen::Index>(ante_rows.size()), k);
  for (std::size_t i = 0; i < cons_rows.size(); ++i) {
    out.consequents_.row(static_cast<Eigen::Index>(i)) = cons_rows[i].transpose();
  }
  for (std::size_t i = 0; i < ante_rows.size(); ++i) {
    out.antecedents_.row(static_cast<Eigen::Index>(i)) = ante_rows[i].transpose();
  }
  out.consequent_exhausted_.assign(cons_rows.size(), false);
  out.antecedent_exhausted_.assign(ante_rows.size(), false);
  return out;
}

Vector PairVectors::consequent(std::size_t pair) const {
  return consequents_.row(pair_rows_[pair].first).transpose();
}

Vector PairVectors::antecedent(std::size_t pair) const {
  return antecedents_.row(pair_rows_[pair].second).transpose();
}

namespace {

void reject_table(RowMatrix& table, std::vector<bool>& exhausted, const Vector& direction) {
  for (Eigen::Index r = 0; r < table.rows(); ++r) {
    const Vector row = table.row(r).transpose();
    Rejection rej = reject_and_renormalize(row, direction);
    table.row(r) = rej.vector.transpose();
    if (rej.exhausted) exhausted[static_cast<std::size_t>(r)] = true;
  }
}

}  // namespace

void PairVectors::reject(const Detector& detector, RejectionMode mode) {
  reject_table(consequents_, consequent_exhausted_, detector.direction);
  const Vector& ante_dir = (mode == RejectionMode::kPerHalf && detector.antecedent_direction.size())
                               ? detector.antecedent_direction
                               : detector.direction;
  reject_table(antecedents_, antecedent_exhausted_, ante_dir);
}

bool PairVectors::all_exhausted() const {
  return std::all_of(consequent_exhausted_.begin(), consequent_exhausted_.end(),
                     [](bool b) { return b; }) &&
         std::all_of(antecedent_exhausted_.begin(), antecedent_exhausted_.end(),
                     [](bool b) { return b; });
}

Detector extract_detector(const PairVectors& vectors, std::span<const int> labels, double C,
                          int iteration) {
  if (vectors.num_pairs() == 0) throw InvalidArgument("extract_detector: no training pairs");
  if (labels.size() != vectors.num_pairs()) {
    throw InvalidArgument("extract_detector: label count mismatch");
  }
  const auto k = static_cast<Eigen::Index>(vectors.dim());
  Matrix X(static_cast<Eigen::Index>(vectors.num_pairs()), 2 * k);
  for (std::size_t i = 0; i < vectors.num_pairs(); ++i) {
    X.row(static_cast<Eigen::Index>(i)) =
        feature_map(FeatureKind::kConcat, vectors.consequent(i), vectors.antecedent(i));
  }
  LogRegOptions options;
  options.C = C;
  options.balanced = true;
  Detector d;
  d.source_model = train_logreg(X, labels, options);
  d.iteration = iteration;

  const Vector h_half = d.source_model.weights.head(k);
  const Vector w_half = d.source_model.weights.tail(k);
  const double h_norm = h_half.norm();
  if (h_norm < 1e-12) throw InvalidArgument("null detector");
  d.direction = h_half / h_norm;
  const double w_norm = w_half.norm();
  d.antecedent_direction = w_norm > 1e-12 ? Vector(w_half / w_norm) : Vector(d.direction);

  const Vector dec = d.source_model.decisions(X);
  std::vector<int> pred(labels.size());
  for (std::size_t i = 0; i < pred.size(); ++i) pred[i] = dec(static_cast<Eigen::Index>(i)) >= 0.0;
  d.train_f1 = f1_score(pred, labels);
  return d;
}

std::uint64_t training_vocabulary_hash(const std::vector<LabeledPair>& pairs) {
  std::set<std::string> vocab;
  for (const auto& p : pairs) {
    vocab.insert(p.antecedent);
    vocab.insert(p.consequent);
  }
  std::uint64_t h = fnv1a64("");
  for (const auto& t : vocab) {
    h = fnv1a64(t, h);
    h = fnv1a64(std::string_view("\n", 1), h);
  }
  return h;
}

DetectorChain extract_detectors(const std::vector<LabeledPair>& train, const VectorSpace& space,
                                int max_iterations, double C_detector, RejectionMode rejection) {
  if (max_iterations < 1) throw InvalidArgument("need at least one iteration");
  DetectorChain chain;
  chain.labels = labels_of(train);
  chain.vocabulary_hash = training_vocabulary_hash(train);
  chain.final_vectors = PairVectors::gather(train, space);
  PairVectors& vectors = chain.final_vectors;
  const auto num_pairs = static_cast<Eigen::Index>(train.size());
  chain.meta = Matrix::Zero(num_pairs, 4 * max_iterations);

  for (int it = 1; it <= max_iterations; ++it) {
    if (vectors.all_exhausted()) {
      chain.stop_reason = "space exhausted";
      break;
    }
    Detector d;
    try {
      d = extract_detector(vectors, chain.labels, C_detector, it);
    } catch (const InvalidArgument& e) {
      chain.stop_reason = e.what();
      break;
    }
    for (Eigen::Index i = 0; i < num_pairs; ++i) {
      const auto f = meta_features(vectors.consequent(static_cast<std::size_t>(i)),
                                   vectors.antecedent(static_cast<std::size_t>(i)), d.direction);
      for (int s = 0; s < 4; ++s) chain.meta(i, 4 * (it - 1) + s) = f[static_cast<std::size_t>(s)];
    }
    vectors.reject(d, rejection);
    chain.detectors.push_back(std::move(d));
  }
  chain.meta.conservativeResize(num_pairs, 4 * static_cast<Eigen::Index>(chain.detectors.size()));
  return chain;
}

Matrix select_meta_features(const Matrix& meta, int n, const AblationMask& mask) {
  if (!mask.valid()) throw InvalidArgument("ablation mask drops every slot group");
  if (n < 1 || 4 * n > meta.cols()) throw InvalidArgument("select_meta_features: n out of range");
  const auto slots = mask.kept_slots();
  Matrix out(meta.rows(), n * static_cast<Eigen::Index>(slots.size()));
  Eigen::Index col = 0;
  for (int i = 0; i < n; ++i) {
    for (int s : slots) out.col(col++) = meta.col(4 * i + s);
  }
  return out;
}

HFeatureModel::HFeatureModel(std::vector<Detector> detectors, KernelModel final_model,
                             HFeatureConfig config, std::uint64_t vocabulary_hash,
                             double final_train_f1)
    : detectors_(std::move(detectors)),
      final_(std::move(final_model)),
      config_(config),
      vocabulary_hash_(vocabulary_hash),
      final_train_f1_(final_train_f1) {
  config_.n = static_cast<int>(detectors_.size());
}

Vector HFeatureModel::meta_features_of(const Vector& consequent, const Vector& antecedent) const {
  Vector H = consequent;
  Vector w = antecedent;
  Vector out(4 * n());
  for (int i = 0; i < n(); ++i) {
    const Detector& d = detectors_[static_cast<std::size_t>(i)];
    const auto f = meta_features(H, w, d.direction);
    for (int s = 0; s < 4; ++s) out(4 * i + s) = f[static_cast<std::size_t>(s)];
    H = reject_and_renormalize(H, d.direction).vector;
    const Vector& ante_dir =
        (config_.rejection == RejectionMode::kPerHalf && d.antecedent_direction.size())
            ? d.antecedent_direction
            : d.direction;
    w = reject_and_renormalize(w, ante_dir).vector;
  }
  return out;
}

std::vector<PairPrediction> HFeatureModel::predict(const std::vector<LabeledPair>& pairs,
                                                   const VectorSpace& space) const {
  std::vector<PairPrediction> out;
  out.reserve(pairs.size());
  const auto slots = config_.mask.kept_slots();
  for (const auto& p : pairs) {
    const auto H = space.lookup(p.consequent);
    const auto w = space.lookup(p.antecedent);
    if (!H || !w) {
      out.push_back({false, false, 0.0});
      continue;
    }
    Matrix meta = meta_features_of(*H, *w).transpose();
    const Vector x = select_meta_features(meta, n(), config_.mask).row(0).transpose();
    const double decision = final_.decision(x);
    out.push_back({true, decision >= 0.0, decision});
  }
  return out;
}

HFeatureModel fit_final(const DetectorChain& chain, const HFeatureConfig& config) {
  if (config.n < 1) throw InvalidArgument("n must be at least 1");
  if (static_cast<int>(chain.detectors.size()) < config.n) {
    throw Error(chain.stop_reason.empty() ? "detector chain too short" : chain.stop_reason);
  }
  const Matrix X = select_meta_features(chain.meta, config.n, config.mask);
  SvmOptions svm;
  svm.C = config.C_final;
  svm.gamma = config.gamma > 0.0 ? config.gamma : 1.0 / static_cast<double>(X.cols());
  svm.balanced = true;
  svm.tolerance = config.svm_tolerance;
  KernelModel final_model = train_rbf_svm(X, chain.labels, svm);

  const Vector dec = final_model.decisions(X);
  std::vector<int> pred(chain.labels.size());
  for (std::size_t i = 0; i < pred.size(); ++i) pred[i] = dec(static_cast<Eigen::Index>(i)) >= 0.0;
  const double train_f1 = f1_score(pred, chain.labels);

  std::vector<Detector> detectors(chain.detectors.begin(), chain.detectors.begin() + config.n);
  HFeatureConfig stored = config;
  stored.gamma = svm.gamma;
  return HFeatureModel(std::move(detectors), std::move(final_model), stored,
                       chain.vocabulary_hash, train_f1);
}

HFeatureModel fit_hfeature(const std::vector<LabeledPair>& train, const VectorSpace& space,
                           const HFeatureConfig& config) {
  if (config.n < 1) throw InvalidArgument("n must be at least 1");
  const DetectorChain chain =
      extract_detectors(train, space, config.n, config.C_detector, config.rejection);
  return fit_final(chain, config);
}

nlohmann::json HFeatureModel::to_json() const {
  nlohmann::json detectors = nlohmann::json::array();
  for (const auto& d : detectors_) {
    detectors.push_back({{"iteration", d.iteration},
                         {"direction", lexent::to_json(d.direction)},
                         {"antecedent_direction", lexent::to_json(d.antecedent_direction)},
                         {"train_f1", d.train_f1},
                         {"source_model", lexent::to_json(d.source_model)}});
  }
  return {
      {"kind", "hfeature"},
      {"config",
       {{"n", config_.n},
        {"C_detector", config_.C_detector},
        {"C_final", config_.C_final},
        {"gamma", config_.gamma},
        {"rejection", std::string(to_string(config_.rejection))},
        {"ablation", config_.mask.name()},
        {"svm_tolerance", config_.svm_tolerance}}},
      {"detectors", detectors},
      {"final", lexent::to_json(final_)},
      {"vocabulary_hash", vocabulary_hash_},
      {"final_train_f1", final_train_f1_},
  };
}

HFeatureModel HFeatureModel::from_json(const nlohmann::json& j) {
  try {
    if (j.at("kind").get<std::string>() != "hfeature") {
      throw InvalidArgument("not an hfeature model");
    }
    const auto& c = j.at("config");
    HFeatureConfig config;
    config.n = c.at("n").get<int>();
    config.C_detector = c.at("C_detector").get<double>();
    config.C_final = c.at("C_final").get<double>();
    config.gamma = c.at("gamma").get<double>();
    config.rejection = parse_rejection_mode(c.at("rejection").get<std::string>());
    config.mask = AblationMask::parse(c.at("ablation").get<std::string>());
    config.svm_tolerance = c.value("svm_tolerance", 1e-3);
    std::vector<Detector> detectors;
    for (const auto& dj : j.at("detectors")) {
      Detector d;
      d.iteration = dj.at("iteration").get<int>();
      d.direction = vector_from_json(dj.at("direction"));
      d.antecedent_direction = vector_from_json(dj.at("antecedent_direction"));
      d.train_f1 = dj.at("train_f1").get<double>();
      d.source_model = linear_model_from_json(dj.at("source_model"));
      detectors.push_back(std::move(d));
    }
    return HFeatureModel(std::move(detectors), kernel_model_from_json(j.at("final")), config,
                         j.at("vocabulary_hash").get<std::uint64_t>(),
                         j.at("final_train_f1").get<double>());
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed hfeature model: ") + e.what());
  }
}

}  // namespace lexent
