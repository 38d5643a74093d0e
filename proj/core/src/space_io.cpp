#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "lexent/error.hpp"
#include "lexent/vecspace.hpp"

namespace lexent {
namespace {

namespace fs = std::filesystem;

void write_rows(const std::string& path, const std::vector<std::string>& tokens,
                const RowMatrix& m) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  char buf[32];
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    out << tokens[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.9g", m(i, j));
      out << ' ' << buf;
    }
    out << '\n';
  }
}

void read_rows(const std::string& path, std::size_t k, std::vector<std::string>& tokens,
               RowMatrix& m) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::vector<double> values;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string token;
    fields >> token;
    std::size_t count = 0;
    double v = 0.0;
    while (fields >> v) {
      values.push_back(v);
      ++count;
    }
    if (count != k) {
      throw ParseError(path, line_no,
                       "expected " + std::to_string(k) + " values, got " + std::to_string(count));
    }
    tokens.push_back(std::move(token));
  }
  m = Eigen::Map<RowMatrix>(values.data(), static_cast<Eigen::Index>(tokens.size()),
                            static_cast<Eigen::Index>(k));
}

}  // namespace

void save_space(const VectorSpace& space, const std::string& dir) {
  fs::create_directories(dir);
  {
    std::ofstream meta(fs::path(dir) / "meta.json");
    if (!meta) throw Error("cannot write meta.json in " + dir);
    nlohmann::json m = space.meta();
    m["k"] = space.dim();
    m["num_words"] = space.num_words();
    m["num_contexts"] = space.num_contexts();
    meta << m.dump(2) << '\n';
  }
  write_rows((fs::path(dir) / "words.tsv").string(), space.word_tokens(), space.words());
  write_rows((fs::path(dir) / "contexts.tsv").string(), space.context_tokens(), space.contexts());
  std::ofstream sigma(fs::path(dir) / "sigma.tsv");
  char buf[32];
  for (Eigen::Index i = 0; i < space.sigma().size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.9g", space.sigma()(i));
    sigma << buf << '\n';
  }
}

VectorSpace load_space(const std::string& dir) {
  std::ifstream meta_in(fs::path(dir) / "meta.json");
  if (!meta_in) throw Error("cannot open " + (fs::path(dir) / "meta.json").string());
  nlohmann::json meta;
  try {
    meta = nlohmann::json::parse(meta_in);
  } catch (const nlohmann::json::exception& e) {
    throw Error("malformed meta.json in " + dir + ": " + e.what());
  }
  const auto k = meta.at("k").get<std::size_t>();

  std::vector<std::string> word_tokens;
  std::vector<std::string> context_tokens;
  RowMatrix words;
  RowMatrix contexts;
  read_rows((fs::path(dir) / "words.tsv").string(), k, word_tokens, words);
  read_rows((fs::path(dir) / "contexts.tsv").string(), k, context_tokens, contexts);

  std::ifstream sigma_in(fs::path(dir) / "sigma.tsv");
  if (!sigma_in) throw Error("cannot open sigma.tsv in " + dir);
  std::vector<double> s;
  double v = 0.0;
  while (sigma_in >> v) s.push_back(v);
  if (s.size() != k) throw Error("sigma.tsv has " + std::to_string(s.size()) + " values, expected " +
                                 std::to_string(k));
  Vector sigma = Eigen::Map<Vector>(s.data(), static_cast<Eigen::Index>(k));
  return VectorSpace(std::move(words), std::move(contexts), std::move(sigma),
                     std::move(word_tokens), std::move(context_tokens), std::move(meta));
}

}  // namespace lexent
