#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace qcldpc {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A file could not be opened or written.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Raised by the code-file readers; carries the 1-based line that failed.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// J x L grid of circulant shift numbers; -1 is the all-zero block.
class ExponentMatrix {
 public:
  ExponentMatrix() = default;
  /// Throws Error naming the first cell that is out of range.
  ExponentMatrix(std::size_t block_rows, std::size_t block_cols, std::size_t circulant,
                 std::vector<int> shifts);

  std::size_t block_rows() const { return rows_; }
  std::size_t block_cols() const { return cols_; }
  std::size_t circulant() const { return circulant_; }
  int shift(std::size_t j, std::size_t l) const { return shifts_[j * cols_ + l]; }
  std::span<const int> shifts() const { return shifts_; }

  /// Same grid with every non-negative shift reduced modulo `circulant`.
  ExponentMatrix with_circulant(std::size_t circulant) const;

  bool operator==(const ExponentMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::size_t circulant_ = 1;
  std::vector<int> shifts_;
};

/// Sparse parity-check matrix stored by rows (checks).
class SparseParityCheck {
 public:
  SparseParityCheck() = default;
  /// rows[m] lists the variables of check m in the order they appear in H.
  /// Throws Error on an out-of-range or repeated variable index.
  SparseParityCheck(std::size_t num_vars, const std::vector<std::vector<std::uint32_t>>& rows);

  std::size_t num_checks() const { return row_start_.size() - 1; }
  std::size_t num_vars() const { return num_vars_; }
  std::size_t num_edges() const { return cols_.size(); }
  std::span<const std::uint32_t> row(std::size_t m) const {
    return {cols_.data() + row_start_[m], cols_.data() + row_start_[m + 1]};
  }
  std::vector<std::vector<std::uint32_t>> rows() const;

  bool operator==(const SparseParityCheck&) const = default;

 private:
  std::size_t num_vars_ = 0;
  std::vector<std::size_t> row_start_{0};
  std::vector<std::uint32_t> cols_;
};

/// Flattened Tanner-graph edge store shared by the block decoders.
///
/// Edge ids are assigned row-major: check by check, left to right within a
/// check. lut_c(m) is therefore the contiguous id range of check m; lut_v(n)
/// lists the ids incident to variable n in increasing order.
class EdgeLayout {
 public:
  struct Range {
    std::uint32_t begin;
    std::uint32_t end;
    std::uint32_t size() const { return end - begin; }
  };

  EdgeLayout() = default;
  explicit EdgeLayout(const SparseParityCheck& h);

  std::size_t num_checks() const { return check_start_.size() - 1; }
  std::size_t num_vars() const { return var_start_.size() - 1; }
  std::size_t num_edges() const { return edge_var_.size(); }

  Range lut_c(std::size_t m) const {
    return {check_start_[m], check_start_[m + 1]};
  }
  std::span<const std::uint32_t> lut_v(std::size_t n) const {
    return {var_edges_.data() + var_start_[n], var_edges_.data() + var_start_[n + 1]};
  }
  /// Variable index at the end of edge e.
  std::uint32_t edge_var(std::size_t e) const { return edge_var_[e]; }

  /// Row weight when every check has the same degree (lut_c[m] then starts at
  /// m * d_c); nullopt otherwise.
  std::optional<std::uint32_t> regular_row_weight() const { return row_weight_; }
  std::uint32_t max_check_degree() const { return max_check_degree_; }
  std::uint32_t max_var_degree() const { return max_var_degree_; }

 private:
  std::vector<std::uint32_t> check_start_{0};
  std::vector<std::uint32_t> var_start_{0};
  std::vector<std::uint32_t> var_edges_;
  std::vector<std::uint32_t> edge_var_;
  std::optional<std::uint32_t> row_weight_;
  std::uint32_t max_check_degree_ = 0;
  std::uint32_t max_var_degree_ = 0;
};

SparseParityCheck expand_qc(const ExponentMatrix& exp);

struct CodeStats {
  std::size_t num_vars = 0;
  std::size_t num_checks = 0;
  std::size_t num_edges = 0;
  std::size_t min_row_weight = 0;
  std::size_t max_row_weight = 0;
  std::size_t min_col_weight = 0;
  std::size_t max_col_weight = 0;
  bool regular = false;
  /// Some row or column carries no ones.
  bool degenerate = false;
  /// 1 - M/N; equals the rate when H has full rank.
  double rate_bound = 0.0;
};

CodeStats code_stats(const SparseParityCheck& h);

enum class CodeFormat { alist, qc_exponent };

/// Parses "alist" / "qc" / "qc-exponent"; throws Error otherwise.
CodeFormat parse_code_format(const std::string& name);

struct LoadedCode {
  SparseParityCheck h;
  std::optional<ExponentMatrix> exponent;
};

LoadedCode read_code(std::istream& in, CodeFormat format);
LoadedCode load_code(const std::filesystem::path& path, CodeFormat format);

void write_alist(std::ostream& out, const SparseParityCheck& h);
void write_qc_exponent(std::ostream& out, const ExponentMatrix& exp);

/// Writes `code` in `format`. qc-exponent output requires the exponent grid,
/// so converting a plain alist code to qc-exponent throws Error.
void save_code(const std::filesystem::path& path, const LoadedCode& code, CodeFormat format);

}  // namespace qcldpc
