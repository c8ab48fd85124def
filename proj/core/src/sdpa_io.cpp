#include "orbitope/sdpa_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace orbitope {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct ParseError : Error {
  ParseError(int line, int col, const std::string& what)
      : Error("sdpa parse error at line " + std::to_string(line) + ", column " +
              std::to_string(col) + ": " + what) {}
};

}  // namespace

std::string export_sdpa(const SdpProblem& p) {
  std::ostringstream os;
  const int m = static_cast<int>(p.constraints.size());
  os << m << "\n";
  os << p.block_sizes.size() << "\n";
  for (size_t k = 0; k < p.block_sizes.size(); ++k)
    os << p.block_sizes[k] << (k + 1 < p.block_sizes.size() ? " " : "\n");
  if (p.block_sizes.size() == 0) os << "\n";
  for (int i = 0; i < m; ++i) os << fmt(p.rhs(i)) << (i + 1 < m ? " " : "");
  os << "\n";
  const double sign = (p.sense == SdpSense::Minimize) ? -1.0 : 1.0;
  auto emit = [&](int matno, const BlockMat& M, double scale) {
    for (size_t k = 0; k < M.blocks.size(); ++k) {
      const auto& blk = M.blocks[k];
      for (int i = 0; i < blk.rows(); ++i)
        for (int j = i; j < blk.cols(); ++j)
          if (blk(i, j) != 0.0)
            os << matno << " " << (k + 1) << " " << (i + 1) << " " << (j + 1) << " "
               << fmt(scale * blk(i, j)) << "\n";
    }
  };
  if (p.sense != SdpSense::FeasibilityOnly) emit(0, p.objective, sign);
  for (int c = 0; c < m; ++c) emit(c + 1, p.constraints[c], 1.0);
  return os.str();
}

SdpProblem import_sdpa(const std::string& text) {
  // Tokenize; SDPA allows {, }, (, ), and commas as separators.
  std::istringstream is(text);
  std::string line;
  std::vector<std::pair<int, std::string>> tokens;  // (line number, token)
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && (line[0] == '"' || line[0] == '*')) continue;  // comment
    std::string cleaned = line;
    for (char& ch : cleaned)
      if (ch == '{' || ch == '}' || ch == '(' || ch == ')' || ch == ',') ch = ' ';
    std::istringstream ls(cleaned);
    std::string tok;
    while (ls >> tok) tokens.push_back({lineno, tok});
  }
  size_t pos = 0;
  auto next = [&](const char* what) -> std::string {
    if (pos >= tokens.size()) throw ParseError(lineno, 0, std::string("unexpected end of file, expected ") + what);
    return tokens[pos++].second;
  };
  auto next_int = [&](const char* what) {
    std::string t = next(what);
    try {
      return std::stoi(t);
    } catch (...) {
      throw ParseError(tokens[pos - 1].first, static_cast<int>(pos), std::string("expected integer for ") + what + ", got '" + t + "'");
    }
  };
  auto next_double = [&](const char* what) {
    std::string t = next(what);
    try {
      size_t used = 0;
      double v = std::stod(t, &used);
      if (used != t.size()) throw std::invalid_argument(t);
      return v;
    } catch (...) {
      throw ParseError(tokens[pos - 1].first, static_cast<int>(pos), std::string("expected number for ") + what + ", got '" + t + "'");
    }
  };

  SdpProblem p;
  p.sense = SdpSense::Maximize;
  const int m = next_int("constraint count");
  const int nblocks = next_int("block count");
  std::vector<int> sizes(nblocks);
  for (int k = 0; k < nblocks; ++k) {
    int s = next_int("block size");
    sizes[k] = std::abs(s);  // negative marks a diagonal block; stored dense
  }
  p.block_sizes = sizes;
  p.rhs.resize(m);
  for (int i = 0; i < m; ++i) p.rhs(i) = next_double("rhs entry");
  p.objective = BlockMat::zeros(sizes);
  p.constraints.assign(m, BlockMat::zeros(sizes));
  while (pos < tokens.size()) {
    int matno = next_int("matrix number");
    int blk = next_int("block number");
    int i = next_int("row");
    int j = next_int("column");
    double v = next_double("entry value");
    if (matno < 0 || matno > m) throw ParseError(tokens[pos - 1].first, 1, "matrix number out of range");
    if (blk < 1 || blk > nblocks) throw ParseError(tokens[pos - 1].first, 2, "block number out of range");
    if (i < 1 || j < 1 || i > sizes[blk - 1] || j > sizes[blk - 1])
      throw ParseError(tokens[pos - 1].first, 3, "entry index out of range");
    BlockMat& target = (matno == 0) ? p.objective : p.constraints[matno - 1];
    target.blocks[blk - 1](i - 1, j - 1) = v;
    target.blocks[blk - 1](j - 1, i - 1) = v;
  }
  return p;
}

void write_sdpa_file(const SdpProblem& p, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open for writing: " + path);
  out << export_sdpa(p);
}

SdpProblem read_sdpa_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open for reading: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return import_sdpa(ss.str());
}

}  // namespace orbitope
