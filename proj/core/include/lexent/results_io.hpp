#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lexent/eval.hpp"

namespace lexent {

nlohmann::json to_json(const GridPoint& point);
nlohmann::json to_json(const CvResult& result, bool with_predictions = false);
nlohmann::json to_json(const AblationResult& result);
nlohmann::json to_json(const SweepResult& result);

// Columns: model,dataset,fold,C,n,f1
void write_summary_csv(std::ostream& out, const std::vector<CvResult>& results,
                       const std::string& dataset);

// Columns: antecedent, consequent, gold, pred, decision (tab separated, with
// a header line). Test pairs in fold order.
void write_predictions_tsv(std::ostream& out, const CvResult& result);
std::vector<PredictionRecord> read_predictions_tsv(std::istream& in, const std::string& source);

// Columns: mask,n,full_f1,ablated_f1,delta; one extra row per mask with n=best.
void write_ablation_csv(std::ostream& out, const AblationResult& result);
// Columns: n,mean_f1,delta
void write_sweep_csv(std::ostream& out, const SweepResult& result);

}  // namespace lexent
