#include "lexent/pairs.hpp"

#include <fstream>
#include <map>
#include <utility>

#include "lexent/error.hpp"
#include "lexent/vecspace.hpp"

namespace lexent {
namespace {

bool parse_label(const std::string& text, bool& label) {
  if (text == "1" || text == "true" || text == "True") {
    label = true;
    return true;
  }
  if (text == "0" || text == "false" || text == "False") {
    label = false;
    return true;
  }
  return false;
}

}  // namespace

std::vector<LabeledPair> read_pairs(std::istream& in, const std::string& source) {
  std::vector<LabeledPair> pairs;
  std::map<std::pair<std::string, std::string>, std::pair<bool, std::size_t>> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto t1 = line.find('\t');
    const auto t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string::npos || line.find('\t', t2 + 1) != std::string::npos) {
      throw ParseError(source, line_no, "expected antecedent<TAB>consequent<TAB>label");
    }
    LabeledPair p;
    p.antecedent = line.substr(0, t1);
    p.consequent = line.substr(t1 + 1, t2 - t1 - 1);
    if (p.antecedent.empty() || p.consequent.empty()) {
      throw ParseError(source, line_no, "empty antecedent or consequent");
    }
    if (!parse_label(line.substr(t2 + 1), p.label)) {
      throw ParseError(source, line_no, "bad label '" + line.substr(t2 + 1) + "'");
    }
    auto [it, inserted] =
        seen.try_emplace({p.antecedent, p.consequent}, std::make_pair(p.label, line_no));
    if (!inserted && it->second.first != p.label) {
      throw ParseError(source, line_no,
                       "conflicting labels for pair (" + p.antecedent + ", " + p.consequent +
                           "), first seen on line " + std::to_string(it->second.second));
    }
    pairs.push_back(std::move(p));
  }
  return pairs;
}

std::vector<LabeledPair> load_pairs(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open pair file: " + path);
  return read_pairs(in, path);
}

void write_pairs(const std::vector<LabeledPair>& pairs, std::ostream& out) {
  for (const auto& p : pairs) {
    out << p.antecedent << '\t' << p.consequent << '\t' << (p.label ? 1 : 0) << '\n';
  }
}

FilterResult filter_to_vocab(const std::vector<LabeledPair>& pairs, const VectorSpace& space) {
  FilterResult r;
  for (const auto& p : pairs) {
    if (space.contains(p.antecedent) && space.contains(p.consequent)) {
      r.kept.push_back(p);
    } else {
      ++r.dropped;
    }
  }
  return r;
}

std::vector<int> labels_of(const std::vector<LabeledPair>& pairs) {
  std::vector<int> y;
  y.reserve(pairs.size());
  for (const auto& p : pairs) y.push_back(p.label ? 1 : 0);
  return y;
}

}  // namespace lexent
