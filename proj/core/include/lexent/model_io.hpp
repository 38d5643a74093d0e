#pragma once

#include <nlohmann/json.hpp>

#include "lexent/logreg.hpp"
#include "lexent/svm.hpp"

namespace lexent {

nlohmann::json to_json(const ClassWeights& w);
ClassWeights class_weights_from_json(const nlohmann::json& j);

nlohmann::json to_json(const LinearModel& m);
LinearModel linear_model_from_json(const nlohmann::json& j);

nlohmann::json to_json(const KernelModel& m);
KernelModel kernel_model_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Vector& v);
Vector vector_from_json(const nlohmann::json& j);

}  // namespace lexent
