#include "lexent/results_io.hpp"

#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "lexent/error.hpp"

namespace lexent {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string fmt_decision(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    out.push_back(line.substr(start, tab == std::string::npos ? std::string::npos : tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return out;
}

}  // namespace

nlohmann::json to_json(const GridPoint& p) {
  nlohmann::json j = {{"C", p.C}};
  if (p.n > 0) j["n"] = p.n;
  if (p.gamma > 0.0) j["gamma"] = p.gamma;
  if (p.C_final > 0.0) j["C_final"] = p.C_final;
  return j;
}

nlohmann::json to_json(const CvResult& r, bool with_predictions) {
  nlohmann::json folds = nlohmann::json::array();
  for (const auto& f : r.folds) {
    nlohmann::json fj = {{"fold", f.fold},
                         {"chosen", to_json(f.chosen)},
                         {"test_f1", f.f1},
                         {"selection_f1", f.selection_score},
                         {"selected_on", f.training_fallback ? "train" : "validation"},
                         {"train_pairs", f.train_size},
                         {"validation_pairs", f.val_size},
                         {"test_pairs", f.predictions.size()}};
    if (with_predictions) {
      nlohmann::json preds = nlohmann::json::array();
      for (const auto& p : f.predictions) {
        preds.push_back({{"antecedent", p.pair.antecedent},
                         {"consequent", p.pair.consequent},
                         {"gold", p.pair.label},
                         {"predicted", p.predicted},
                         {"predictable", p.predictable},
                         {"decision", p.decision}});
      }
      fj["predictions"] = std::move(preds);
    }
    folds.push_back(std::move(fj));
  }
  return {{"model", std::string(to_string(r.kind))},
          {"num_folds", r.num_folds},
          {"mean_f1", r.mean_f1},
          {"pooled_f1", r.pooled_f1},
          {"skipped_folds", r.skipped},
          {"folds", std::move(folds)},
          {"warnings", r.warnings}};
}

nlohmann::json to_json(const AblationResult& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"mask", row.mask.name()},
                    {"mean_f1", row.mean_f1},
                    {"delta", row.delta},
                    {"best_delta", row.best_delta}});
  }
  return {{"n_values", r.n_values},
          {"full_mean_f1", r.full_mean_f1},
          {"ablations", std::move(rows)},
          {"folds_used", r.folds_used},
          {"warnings", r.warnings}};
}

nlohmann::json to_json(const SweepResult& r) {
  return {{"n_values", r.n_values},
          {"mean_f1", r.mean_f1},
          {"delta", r.delta},
          {"folds_used", r.folds_used},
          {"warnings", r.warnings}};
}

void write_summary_csv(std::ostream& out, const std::vector<CvResult>& results,
                       const std::string& dataset) {
  out << "model,dataset,fold,C,n,f1\n";
  for (const auto& r : results) {
    for (const auto& f : r.folds) {
      out << to_string(r.kind) << ',' << dataset << ',' << f.fold << ',' << fmt(f.chosen.C) << ','
          << f.chosen.n << ',' << fmt(f.f1) << '\n';
    }
    out << to_string(r.kind) << ',' << dataset << ",mean,,," << fmt(r.mean_f1) << '\n';
  }
}

void write_predictions_tsv(std::ostream& out, const CvResult& r) {
  out << "antecedent\tconsequent\tgold\tpred\tdecision\n";
  for (const auto& f : r.folds) {
    for (const auto& p : f.predictions) {
      out << p.pair.antecedent << '\t' << p.pair.consequent << '\t' << (p.pair.label ? 1 : 0)
          << '\t' << (p.predicted ? 1 : 0) << '\t'
          << (p.predictable ? fmt_decision(p.decision) : std::string("nan")) << '\n';
    }
  }
}

std::vector<PredictionRecord> read_predictions_tsv(std::istream& in, const std::string& source) {
  std::vector<PredictionRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line_no == 1 && line.rfind("antecedent\t", 0) == 0) continue;
    const auto cols = split_tabs(line);
    if (cols.size() != 5) throw ParseError(source, line_no, "expected 5 tab-separated columns");
    auto flag = [&](const std::string& s) {
      if (s == "0") return false;
      if (s == "1") return true;
      throw ParseError(source, line_no, "expected 0 or 1, got '" + s + "'");
    };
    PredictionRecord r;
    r.pair = {cols[0], cols[1], flag(cols[2])};
    r.predicted = flag(cols[3]);
    if (cols[4] == "nan") {
      r.predictable = false;
    } else {
      std::istringstream num(cols[4]);
      if (!(num >> r.decision)) throw ParseError(source, line_no, "bad decision value");
    }
    out.push_back(std::move(r));
  }
  return out;
}

void write_ablation_csv(std::ostream& out, const AblationResult& r) {
  out << "mask,n,full_f1,ablated_f1,delta\n";
  for (const auto& row : r.rows) {
    double best_ablated = 0.0;
    double best_full = 0.0;
    for (std::size_t j = 0; j < r.n_values.size(); ++j) {
      out << row.mask.name() << ',' << r.n_values[j] << ',' << fmt(r.full_mean_f1[j]) << ','
          << fmt(row.mean_f1[j]) << ',' << fmt(row.delta[j]) << '\n';
      best_ablated = std::max(best_ablated, row.mean_f1[j]);
      best_full = std::max(best_full, r.full_mean_f1[j]);
    }
    out << row.mask.name() << ",best," << fmt(best_full) << ',' << fmt(best_ablated) << ','
        << fmt(row.best_delta) << '\n';
  }
}

void write_sweep_csv(std::ostream& out, const SweepResult& r) {
  out << "n,mean_f1,delta\n";
  for (std::size_t j = 0; j < r.n_values.size(); ++j) {
    out << r.n_values[j] << ',' << fmt(r.mean_f1[j]) << ',' << fmt(r.delta[j]) << '\n';
  }
}

}  // namespace lexent
