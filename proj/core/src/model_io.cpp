#include "lexent/model_io.hpp"

#include "lexent/error.hpp"

namespace lexent {

nlohmann::json to_json(const Vector& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

Vector vector_from_json(const nlohmann::json& j) {
  const auto values = j.get<std::vector<double>>();
  return Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

nlohmann::json to_json(const ClassWeights& w) {
  return {{"negative", w.negative}, {"positive", w.positive}};
}

ClassWeights class_weights_from_json(const nlohmann::json& j) {
  return {j.at("negative").get<double>(), j.at("positive").get<double>()};
}

nlohmann::json to_json(const LinearModel& m) {
  return {{"kind", "linear"},
          {"weights", to_json(m.weights)},
          {"intercept", m.intercept},
          {"C", m.C},
          {"class_weights", to_json(m.class_weights)},
          {"iterations", m.iterations},
          {"converged", m.converged},
          {"gradient_norm", m.gradient_norm}};
}

LinearModel linear_model_from_json(const nlohmann::json& j) {
  try {
    LinearModel m;
    m.weights = vector_from_json(j.at("weights"));
    m.intercept = j.at("intercept").get<double>();
    m.C = j.at("C").get<double>();
    m.class_weights = class_weights_from_json(j.at("class_weights"));
    m.iterations = j.value("iterations", 0);
    m.converged = j.value("converged", false);
    m.gradient_norm = j.value("gradient_norm", 0.0);
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed linear model: ") + e.what());
  }
}

nlohmann::json to_json(const KernelModel& m) {
  nlohmann::json svs = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.support_vectors.rows(); ++i) {
    svs.push_back(to_json(Vector(m.support_vectors.row(i).transpose())));
  }
  return {{"kind", "rbf_svm"},
          {"support_vectors", svs},
          {"alphas", to_json(m.alphas)},
          {"support_labels", m.support_labels},
          {"intercept", m.intercept},
          {"gamma", m.gamma},
          {"C", m.C},
          {"class_weights", to_json(m.class_weights)},
          {"iterations", m.iterations},
          {"converged", m.converged}};
}

KernelModel kernel_model_from_json(const nlohmann::json& j) {
  try {
    KernelModel m;
    const auto& svs = j.at("support_vectors");
    m.alphas = vector_from_json(j.at("alphas"));
    m.support_labels = j.at("support_labels").get<std::vector<int>>();
    const auto rows = static_cast<Eigen::Index>(svs.size());
    if (rows != m.alphas.size() || m.support_labels.size() != svs.size()) {
      throw InvalidArgument("malformed kernel model: support data lengths disagree");
    }
    const Eigen::Index cols = rows ? static_cast<Eigen::Index>(svs[0].size()) : 0;
    m.support_vectors.resize(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
      const Vector row = vector_from_json(svs[static_cast<std::size_t>(i)]);
      if (row.size() != cols) throw InvalidArgument("malformed kernel model: ragged support vectors");
      m.support_vectors.row(i) = row.transpose();
    }
    m.intercept = j.at("intercept").get<double>();
    m.gamma = j.at("gamma").get<double>();
    m.C = j.at("C").get<double>();
    m.class_weights = class_weights_from_json(j.at("class_weights"));
    m.iterations = j.value("iterations", 0L);
    m.converged = j.value("converged", false);
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed kernel model: ") + e.what());
  }
}

}  // namespace lexent
