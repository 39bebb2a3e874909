#include "code_model.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

namespace qcldpc {

ExponentMatrix::ExponentMatrix(std::size_t block_rows, std::size_t block_cols,
                               std::size_t circulant, std::vector<int> shifts)
    : rows_(block_rows), cols_(block_cols), circulant_(circulant), shifts_(std::move(shifts)) {
  if (circulant_ == 0) throw Error("circulant size must be positive");
  if (rows_ == 0 || cols_ == 0) throw Error("exponent matrix must have at least one block");
  if (rows_ > cols_) {
    throw Error("exponent matrix has more block rows (" + std::to_string(rows_) +
                ") than block columns (" + std::to_string(cols_) + ")");
  }
  if (shifts_.size() != rows_ * cols_) throw Error("exponent matrix size mismatch");
  for (std::size_t j = 0; j < rows_; ++j) {
    for (std::size_t l = 0; l < cols_; ++l) {
      const int s = shifts_[j * cols_ + l];
      if (s < -1 || s >= static_cast<long long>(circulant_)) {
        throw Error("shift " + std::to_string(s) + " at block (" + std::to_string(j) + ", " +
                    std::to_string(l) + ") outside [-1, " + std::to_string(circulant_ - 1) + "]");
      }
    }
  }
}

ExponentMatrix ExponentMatrix::with_circulant(std::size_t circulant) const {
  std::vector<int> reduced = shifts_;
  for (int& s : reduced) {
    if (s >= 0) s %= static_cast<int>(circulant);
  }
  return ExponentMatrix(rows_, cols_, circulant, std::move(reduced));
}

SparseParityCheck::SparseParityCheck(std::size_t num_vars,
                                     const std::vector<std::vector<std::uint32_t>>& rows)
    : num_vars_(num_vars) {
  row_start_.reserve(rows.size() + 1);
  std::vector<std::uint32_t> sorted;
  for (std::size_t m = 0; m < rows.size(); ++m) {
    sorted = rows[m];
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t k = 0; k < sorted.size(); ++k) {
      if (sorted[k] >= num_vars) {
        throw Error("check " + std::to_string(m) + " references variable " +
                    std::to_string(sorted[k]) + " >= N = " + std::to_string(num_vars));
      }
      if (k > 0 && sorted[k] == sorted[k - 1]) {
        throw Error("check " + std::to_string(m) + " lists variable " +
                    std::to_string(sorted[k]) + " twice");
      }
    }
    cols_.insert(cols_.end(), sorted.begin(), sorted.end());
    row_start_.push_back(cols_.size());
  }
}

std::vector<std::vector<std::uint32_t>> SparseParityCheck::rows() const {
  std::vector<std::vector<std::uint32_t>> out(num_checks());
  for (std::size_t m = 0; m < out.size(); ++m) {
    auto r = row(m);
    out[m].assign(r.begin(), r.end());
  }
  return out;
}

EdgeLayout::EdgeLayout(const SparseParityCheck& h) {
  const std::size_t M = h.num_checks();
  const std::size_t N = h.num_vars();
  const std::size_t E = h.num_edges();
  if (E > std::numeric_limits<std::uint32_t>::max()) throw Error("too many edges");

  check_start_.resize(M + 1);
  edge_var_.resize(E);
  std::vector<std::uint32_t> var_degree(N, 0);
  std::uint32_t e = 0;
  for (std::size_t m = 0; m < M; ++m) {
    check_start_[m] = e;
    for (std::uint32_t n : h.row(m)) {
      edge_var_[e++] = n;
      ++var_degree[n];
    }
    max_check_degree_ = std::max(max_check_degree_, e - check_start_[m]);
  }
  check_start_[M] = e;

  var_start_.resize(N + 1);
  var_start_[0] = 0;
  for (std::size_t n = 0; n < N; ++n) {
    var_start_[n + 1] = var_start_[n] + var_degree[n];
    max_var_degree_ = std::max(max_var_degree_, var_degree[n]);
  }
  // Filling in edge order keeps each lut_v[n] sorted.
  var_edges_.resize(E);
  std::vector<std::uint32_t> fill(var_start_.begin(), var_start_.end() - 1);
  for (std::uint32_t id = 0; id < E; ++id) var_edges_[fill[edge_var_[id]]++] = id;

  if (M > 0) {
    const std::uint32_t d = check_start_[1] - check_start_[0];
    bool regular = true;
    for (std::size_t m = 0; m < M && regular; ++m) regular = check_start_[m + 1] - check_start_[m] == d;
    if (regular) row_weight_ = d;
  }
}

SparseParityCheck expand_qc(const ExponentMatrix& exp) {
  const std::size_t p = exp.circulant();
  std::vector<std::vector<std::uint32_t>> rows(exp.block_rows() * p);
  for (std::size_t j = 0; j < exp.block_rows(); ++j) {
    for (std::size_t i = 0; i < p; ++i) {
      auto& row = rows[j * p + i];
      for (std::size_t l = 0; l < exp.block_cols(); ++l) {
        const int s = exp.shift(j, l);
        if (s < 0) continue;
        row.push_back(static_cast<std::uint32_t>(l * p + (i + s) % p));
      }
    }
  }
  return SparseParityCheck(exp.block_cols() * p, rows);
}

CodeStats code_stats(const SparseParityCheck& h) {
  CodeStats s;
  s.num_vars = h.num_vars();
  s.num_checks = h.num_checks();
  s.num_edges = h.num_edges();

  std::vector<std::size_t> col(h.num_vars(), 0);
  s.min_row_weight = h.num_checks() ? std::numeric_limits<std::size_t>::max() : 0;
  for (std::size_t m = 0; m < h.num_checks(); ++m) {
    const auto r = h.row(m);
    s.min_row_weight = std::min(s.min_row_weight, r.size());
    s.max_row_weight = std::max(s.max_row_weight, r.size());
    for (auto n : r) ++col[n];
  }
  if (!col.empty()) {
    const auto [lo, hi] = std::minmax_element(col.begin(), col.end());
    s.min_col_weight = *lo;
    s.max_col_weight = *hi;
  }
  s.degenerate = s.min_row_weight == 0 || s.min_col_weight == 0;
  s.regular = !s.degenerate && s.min_row_weight == s.max_row_weight &&
              s.min_col_weight == s.max_col_weight;
  s.rate_bound = s.num_vars ? 1.0 - static_cast<double>(s.num_checks) / s.num_vars : 0.0;
  return s;
}

CodeFormat parse_code_format(const std::string& name) {
  if (name == "alist") return CodeFormat::alist;
  if (name == "qc" || name == "qc-exponent" || name == "qc_exponent") return CodeFormat::qc_exponent;
  throw Error("unknown code format '" + name + "' (expected alist or qc-exponent)");
}

namespace {

// Line-oriented integer reader that skips blank lines and, optionally,
// lines starting with '#'.
class LineReader {
 public:
  LineReader(std::istream& in, bool comments) : in_(in), comments_(comments) {}

  std::vector<long long> next(const char* what) {
    std::string text;
    while (std::getline(in_, text)) {
      ++line_;
      const auto first = text.find_first_not_of(" \t\r");
      if (first == std::string::npos) continue;
      if (comments_ && text[first] == '#') continue;
      std::istringstream ss(text);
      std::vector<long long> values;
      long long v;
      while (ss >> v) values.push_back(v);
      ss.clear();
      std::string rest;
      if (ss >> rest) throw ParseError(line_, std::string("non-integer token '") + rest + "' in " + what);
      return values;
    }
    throw ParseError(line_ + 1, std::string("unexpected end of file, expected ") + what);
  }

  std::size_t line() const { return line_; }

  /// Consumes the rest of the stream; true if it held anything but blank or
  /// comment lines (line() then points at the first such line).
  bool has_trailing_data() {
    std::string text;
    while (std::getline(in_, text)) {
      ++line_;
      const auto first = text.find_first_not_of(" \t\r");
      if (first == std::string::npos) continue;
      if (comments_ && text[first] == '#') continue;
      return true;
    }
    return false;
  }

 private:
  std::istream& in_;
  bool comments_;
  std::size_t line_ = 0;
};

void expect_count(const LineReader& r, const std::vector<long long>& v, std::size_t n,
                  const char* what) {
  if (v.size() != n) {
    throw ParseError(r.line(), std::string(what) + ": expected " + std::to_string(n) +
                                   " values, found " + std::to_string(v.size()));
  }
}

LoadedCode read_alist(std::istream& in) {
  LineReader r(in, false);
  auto header = r.next("header 'N M'");
  expect_count(r, header, 2, "header");
  if (header[0] <= 0 || header[1] < 0) throw ParseError(r.line(), "N must be positive and M non-negative");
  const auto N = static_cast<std::size_t>(header[0]);
  const auto M = static_cast<std::size_t>(header[1]);

  auto maxima = r.next("'max_col_weight max_row_weight'");
  expect_count(r, maxima, 2, "weight maxima");
  const long long max_col = maxima[0];
  const long long max_row = maxima[1];

  auto col_w = r.next("column weights");
  expect_count(r, col_w, N, "column weights");
  std::vector<long long> row_w;
  if (M > 0) {
    row_w = r.next("row weights");
    expect_count(r, row_w, M, "row weights");
  }

  const auto check_weights = [&](const std::vector<long long>& w, long long max, const char* what) {
    long long seen = 0;
    for (long long x : w) {
      if (x < 0 || x > max) throw ParseError(r.line(), std::string(what) + " weight out of range");
      seen = std::max(seen, x);
    }
    if (seen != max && !w.empty()) {
      throw ParseError(r.line(), std::string("declared maximum ") + what + " weight " +
                                     std::to_string(max) + " != actual " + std::to_string(seen));
    }
  };
  check_weights(col_w, max_col, "column");
  check_weights(row_w, max_row, "row");
  const long long col_total = std::accumulate(col_w.begin(), col_w.end(), 0LL);
  const long long row_total = std::accumulate(row_w.begin(), row_w.end(), 0LL);
  if (col_total != row_total) {
    throw ParseError(r.line(), "edge count mismatch: column weights sum to " +
                                   std::to_string(col_total) + ", row weights to " +
                                   std::to_string(row_total));
  }

  // Lists may be zero padded up to the maximum weight.
  const auto read_list = [&](std::size_t weight, std::size_t limit, const char* what) {
    auto v = r.next(what);
    std::vector<std::uint32_t> out;
    for (std::size_t k = 0; k < v.size(); ++k) {
      if (k < weight) {
        if (v[k] < 1 || v[k] > static_cast<long long>(limit)) {
          throw ParseError(r.line(), std::string(what) + ": index " + std::to_string(v[k]) +
                                         " outside [1, " + std::to_string(limit) + "]");
        }
        out.push_back(static_cast<std::uint32_t>(v[k] - 1));
      } else if (v[k] != 0) {
        throw ParseError(r.line(), std::string(what) + ": " + std::to_string(v.size()) +
                                       " entries but declared weight " + std::to_string(weight));
      }
    }
    if (out.size() != weight) {
      throw ParseError(r.line(), std::string(what) + ": found " + std::to_string(out.size()) +
                                     " entries, declared weight " + std::to_string(weight));
    }
    return out;
  };

  std::vector<std::vector<std::uint32_t>> var_lists(N);
  for (std::size_t n = 0; n < N; ++n) {
    var_lists[n] = read_list(static_cast<std::size_t>(col_w[n]), M, "variable adjacency");
  }
  std::vector<std::vector<std::uint32_t>> rows(M);
  std::vector<std::size_t> row_lines(M);
  for (std::size_t m = 0; m < M; ++m) {
    rows[m] = read_list(static_cast<std::size_t>(row_w[m]), N, "check adjacency");
    row_lines[m] = r.line();
  }

  // The two halves must describe the same incidence.
  std::vector<std::vector<std::uint32_t>> from_vars(M);
  for (std::size_t n = 0; n < N; ++n) {
    for (auto m : var_lists[n]) from_vars[m].push_back(static_cast<std::uint32_t>(n));
  }
  for (std::size_t m = 0; m < M; ++m) {
    auto a = rows[m];
    auto b = from_vars[m];
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (std::adjacent_find(a.begin(), a.end()) != a.end()) {
      throw ParseError(row_lines[m], "check " + std::to_string(m + 1) + " lists a variable twice");
    }
    if (a != b) {
      throw ParseError(row_lines[m], "check " + std::to_string(m + 1) +
                                         " disagrees with the variable adjacency lists");
    }
  }
  return {SparseParityCheck(N, rows), std::nullopt};
}

LoadedCode read_qc(std::istream& in) {
  LineReader r(in, true);
  auto header = r.next("header 'J L p'");
  expect_count(r, header, 3, "header");
  if (header[0] <= 0 || header[1] <= 0 || header[2] <= 0) {
    throw ParseError(r.line(), "J, L and p must be positive");
  }
  const auto J = static_cast<std::size_t>(header[0]);
  const auto L = static_cast<std::size_t>(header[1]);
  const auto p = static_cast<std::size_t>(header[2]);
  if (J > L) throw ParseError(r.line(), "J must not exceed L");

  std::vector<int> shifts;
  shifts.reserve(J * L);
  for (std::size_t j = 0; j < J; ++j) {
    auto row = r.next("shift row");
    expect_count(r, row, L, "shift row");
    for (std::size_t l = 0; l < L; ++l) {
      if (row[l] < -1 || row[l] >= static_cast<long long>(p)) {
        throw ParseError(r.line(), "shift " + std::to_string(row[l]) + " at block (" +
                                       std::to_string(j) + ", " + std::to_string(l) +
                                       ") outside [-1, " + std::to_string(p - 1) + "]");
      }
      shifts.push_back(static_cast<int>(row[l]));
    }
  }
  if (r.has_trailing_data()) throw ParseError(r.line(), "trailing data after shift rows");
  ExponentMatrix exp(J, L, p, std::move(shifts));
  return {expand_qc(exp), exp};
}

}  // namespace

LoadedCode read_code(std::istream& in, CodeFormat format) {
  return format == CodeFormat::alist ? read_alist(in) : read_qc(in);
}

LoadedCode load_code(const std::filesystem::path& path, CodeFormat format) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open code file " + path.string());
  try {
    return read_code(in, format);
  } catch (const ParseError& e) {
    throw ParseError(e.line(), path.string() + ": " + e.what());
  }
}

void write_alist(std::ostream& out, const SparseParityCheck& h) {
  const std::size_t N = h.num_vars();
  const std::size_t M = h.num_checks();
  std::vector<std::vector<std::uint32_t>> var_lists(N);
  std::size_t max_row = 0;
  for (std::size_t m = 0; m < M; ++m) {
    max_row = std::max(max_row, h.row(m).size());
    for (auto n : h.row(m)) var_lists[n].push_back(static_cast<std::uint32_t>(m));
  }
  std::size_t max_col = 0;
  for (const auto& v : var_lists) max_col = std::max(max_col, v.size());

  const auto write_padded = [&out](std::span<const std::uint32_t> idx, std::size_t width) {
    for (std::size_t k = 0; k < width; ++k) {
      if (k) out << ' ';
      out << (k < idx.size() ? idx[k] + 1 : 0);
    }
    out << '\n';
  };

  out << N << ' ' << M << '\n' << max_col << ' ' << max_row << '\n';
  for (std::size_t n = 0; n < N; ++n) out << (n ? " " : "") << var_lists[n].size();
  out << '\n';
  for (std::size_t m = 0; m < M; ++m) out << (m ? " " : "") << h.row(m).size();
  out << '\n';
  for (const auto& v : var_lists) write_padded(v, max_col);
  for (std::size_t m = 0; m < M; ++m) write_padded(h.row(m), max_row);
}

void write_qc_exponent(std::ostream& out, const ExponentMatrix& exp) {
  out << exp.block_rows() << ' ' << exp.block_cols() << ' ' << exp.circulant() << '\n';
  for (std::size_t j = 0; j < exp.block_rows(); ++j) {
    for (std::size_t l = 0; l < exp.block_cols(); ++l) out << (l ? " " : "") << exp.shift(j, l);
    out << '\n';
  }
}

void save_code(const std::filesystem::path& path, const LoadedCode& code, CodeFormat format) {
  if (format == CodeFormat::qc_exponent && !code.exponent) {
    throw Error("qc-exponent output needs a quasi-cyclic code with a known shift grid");
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  if (format == CodeFormat::alist) {
    write_alist(out, code.h);
  } else {
    write_qc_exponent(out, *code.exponent);
  }
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace qcldpc
