#include "oracle/oracle.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "llr_math.hpp"

namespace qcldpc::oracle {

namespace {

double log_add(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double hi = a > b ? a : b;
  const double lo = a > b ? b : a;
  return hi + std::log1p(std::exp(lo - hi));
}

}  // namespace

std::vector<double> exact_posterior_llr(const SparseParityCheck& h, const std::vector<double>& mu) {
  const std::size_t N = h.num_vars();
  if (N > 20) throw Error("exact posterior needs N <= 20, got N = " + std::to_string(N));
  if (mu.size() != N) throw Error("channel LLR count does not match the code length");

  const double ninf = -std::numeric_limits<double>::infinity();
  std::vector<double> log_zero(N, ninf), log_one(N, ninf);
  for (std::uint32_t word = 0; word < (1u << N); ++word) {
    bool valid = true;
    for (std::size_t m = 0; m < h.num_checks() && valid; ++m) {
      unsigned parity = 0;
      for (auto n : h.row(m)) parity ^= (word >> n) & 1u;
      valid = parity == 0;
    }
    if (!valid) continue;
    double weight = 0.0;
    for (std::size_t n = 0; n < N; ++n) weight += ((word >> n) & 1u) ? -0.5 * mu[n] : 0.5 * mu[n];
    for (std::size_t n = 0; n < N; ++n) {
      double& acc = ((word >> n) & 1u) ? log_one[n] : log_zero[n];
      acc = log_add(acc, weight);
    }
  }
  std::vector<double> out(N);
  for (std::size_t n = 0; n < N; ++n) {
    if (log_one[n] == ninf) {
      out[n] = std::numeric_limits<double>::infinity();
    } else if (log_zero[n] == ninf) {
      out[n] = -std::numeric_limits<double>::infinity();
    } else {
      out[n] = log_zero[n] - log_one[n];
    }
  }
  return out;
}

namespace {

struct Edge {
  std::size_t frame;
  std::size_t var;  // within the frame
  double msg = 0.0;
};

// Explicit finite unwrapped matrix: check layer r, local check rho, lists the
// edges to frames r - m_s .. r (those that exist), oldest frame first, columns
// increasing.
struct WindowGraph {
  std::vector<Edge> edges;
  std::vector<std::vector<std::vector<std::size_t>>> check;  // [layer][rho] -> edge ids
  std::vector<std::vector<std::vector<std::size_t>>> var;    // [frame][nu] -> edge ids
};

WindowGraph build_window(const LdpcccCode& code, std::size_t frames) {
  const ExponentMatrix& base = code.base();
  const SparseParityCheck h = expand_qc(base);
  const std::size_t lambda = code.lambda();
  const std::size_t p = base.circulant();
  const std::size_t rows_per_block = base.block_rows() / lambda * p;
  const std::size_t cols_per_block = base.block_cols() / lambda * p;
  const std::size_t layers = frames + lambda - 1;

  WindowGraph g;
  g.check.assign(layers, std::vector<std::vector<std::size_t>>(rows_per_block));
  g.var.assign(frames, std::vector<std::vector<std::size_t>>(cols_per_block));
  for (std::size_t r = 0; r < layers; ++r) {
    for (std::size_t rho = 0; rho < rows_per_block; ++rho) {
      const std::size_t qc_row = (r % lambda) * rows_per_block + rho;
      for (std::size_t back = lambda; back-- > 0;) {
        if (back > r) continue;
        const std::size_t f = r - back;
        if (f >= frames) continue;
        const std::size_t col_lo = (f % lambda) * cols_per_block;
        for (auto col : h.row(qc_row)) {
          if (col < col_lo || col >= col_lo + cols_per_block) continue;
          g.check[r][rho].push_back(g.edges.size());
          g.edges.push_back({f, col - col_lo});
        }
      }
    }
  }
  // Layers visited in increasing order, rows increasing: each variable's list
  // comes out ordered by (layer, rho).
  for (std::size_t r = 0; r < layers; ++r) {
    for (const auto& row : g.check[r]) {
      for (auto e : row) g.var[g.edges[e].frame][g.edges[e].var].push_back(e);
    }
  }
  return g;
}

void check_node(WindowGraph& g, const std::vector<std::size_t>& row) {
  const std::size_t d = row.size();
  if (d == 0) return;
  if (d == 1) {
    g.edges[row[0]].msg = saturate(atanh_twice(1.0));
    return;
  }
  if (d == 2) {
    const double a = g.edges[row[0]].msg;
    const double b = g.edges[row[1]].msg;
    g.edges[row[0]].msg = saturate(b);
    g.edges[row[1]].msg = saturate(a);
    return;
  }
  std::vector<double> t(d), alpha(d);
  for (std::size_t k = 0; k < d; ++k) t[k] = tanh_half(g.edges[row[k]].msg);
  for (std::size_t k = 0; k < d; ++k) {
    double left = 1.0;
    for (std::size_t l = 0; l < k; ++l) left = left * t[l];
    double right = 1.0;
    for (std::size_t l = d; l-- > k + 1;) right = t[l] * right;
    alpha[k] = saturate(atanh_twice(left * right));
  }
  for (std::size_t k = 0; k < d; ++k) g.edges[row[k]].msg = alpha[k];
}

double variable_node(WindowGraph& g, const std::vector<std::size_t>& col, double mu) {
  const std::size_t d = col.size();
  std::vector<double> beta(d);
  double total = mu;
  for (std::size_t k = 0; k < d; ++k) {
    double left = mu;
    for (std::size_t l = 0; l < k; ++l) left = left + g.edges[col[l]].msg;
    double right = 0.0;
    for (std::size_t l = d; l-- > k + 1;) right = g.edges[col[l]].msg + right;
    beta[k] = saturate(left + right);
    total = total + g.edges[col[k]].msg;
  }
  for (std::size_t k = 0; k < d; ++k) g.edges[col[k]].msg = beta[k];
  return saturate(total);
}

}  // namespace

std::vector<ReferenceFrame> reference_window_decoder(const LdpcccCode& code, std::size_t processors,
                                                     const std::vector<std::vector<double>>& mu_frames) {
  if (processors == 0) throw Error("the pipeline needs at least one processor");
  const std::size_t K = mu_frames.size();
  if (K == 0) return {};
  const std::size_t c = code.frame_size();
  const std::size_t lambda = code.lambda();
  const std::size_t window = processors * lambda;
  const std::size_t F = K + window - 1;

  std::vector<std::vector<double>> mu(F, std::vector<double>(c, 0.0));
  for (std::size_t f = 0; f < K; ++f) {
    if (mu_frames[f].size() != c) throw Error("frame length does not match the code");
    for (std::size_t n = 0; n < c; ++n) mu[f][n] = saturate(mu_frames[f][n]);
  }

  WindowGraph g = build_window(code, F);
  std::vector<ReferenceFrame> out;
  for (std::size_t t = 0; t < F; ++t) {
    for (std::size_t n = 0; n < c; ++n) {
      for (auto e : g.var[t][n]) g.edges[e].msg = mu[t][n];
    }
    for (std::size_t i = 0; i < processors; ++i) {
      if (t < i * lambda) break;
      for (const auto& row : g.check[t - i * lambda]) check_node(g, row);
    }
    for (std::size_t i = 0; i < processors; ++i) {
      if (t < i * lambda + lambda - 1) break;
      const std::size_t f = t - i * lambda - (lambda - 1);
      std::vector<double> post(c);
      for (std::size_t n = 0; n < c; ++n) post[n] = variable_node(g, g.var[f][n], mu[f][n]);
      if (i + 1 == processors && f < K) {
        ReferenceFrame rf;
        rf.index = f;
        rf.tail = t >= K;
        rf.posterior = post;
        rf.bits.resize(c);
        for (std::size_t n = 0; n < c; ++n) rf.bits[n] = post[n] < 0.0 ? 1 : 0;
        out.push_back(std::move(rf));
      }
    }
  }
  return out;
}

}  // namespace qcldpc::oracle
