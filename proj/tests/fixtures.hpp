#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "code_model.hpp"

namespace fixtures {

inline std::string source_path(const std::string& rel) { return std::string(QCLDPC_SOURCE_DIR) + "/" + rel; }

inline qcldpc::LoadedCode code_a() {
  return qcldpc::load_code(source_path("codes/code_a.qc"), qcldpc::CodeFormat::qc_exponent);
}

/// Code A's shift grid reduced to a smaller circulant.
inline qcldpc::ExponentMatrix code_a_scaled(std::size_t p) { return code_a().exponent->with_circulant(p); }

/// 4 x 8 example matrix with 16 ones, two per column.
inline qcldpc::SparseParityCheck example_4x8() {
  return qcldpc::SparseParityCheck(8, {{1, 3, 4, 7}, {0, 1, 2, 5}, {2, 5, 6, 7}, {0, 3, 4, 6}});
}

/// 5 x 10 irregular example matrix.
inline qcldpc::SparseParityCheck example_5x10() {
  const char* rows[] = {"1111010101", "1011001111", "0101000100", "1000101111", "0011101010"};
  std::vector<std::vector<std::uint32_t>> r;
  for (const char* row : rows) {
    std::vector<std::uint32_t> idx;
    for (std::uint32_t n = 0; row[n]; ++n) {
      if (row[n] == '1') idx.push_back(n);
    }
    r.push_back(idx);
  }
  return qcldpc::SparseParityCheck(10, r);
}

/// Random sparse matrix; rows may be empty.
inline qcldpc::SparseParityCheck random_matrix(std::mt19937_64& rng, std::size_t N, std::size_t M,
                                               std::size_t max_row) {
  std::vector<std::vector<std::uint32_t>> rows(M);
  std::vector<std::uint32_t> all(N);
  std::iota(all.begin(), all.end(), 0u);
  for (auto& row : rows) {
    const std::size_t w = std::uniform_int_distribution<std::size_t>(0, std::min(max_row, N))(rng);
    std::shuffle(all.begin(), all.end(), rng);
    row.assign(all.begin(), all.begin() + w);
  }
  return qcldpc::SparseParityCheck(N, rows);
}

/// Random cycle-free code, checks of degree 2..4: each new check joins
/// variables from distinct connected components.
inline qcldpc::SparseParityCheck random_tree_code(std::mt19937_64& rng, std::size_t N) {
  std::vector<std::size_t> parent(N);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::vector<std::vector<std::uint32_t>> rows;
  for (int attempt = 0; attempt < 4 * int(N); ++attempt) {
    const std::size_t d = std::uniform_int_distribution<std::size_t>(2, 4)(rng);
    std::vector<std::uint32_t> row;
    std::vector<std::size_t> roots;
    for (int tries = 0; tries < 20 && row.size() < d; ++tries) {
      const std::uint32_t v = std::uniform_int_distribution<std::uint32_t>(0, std::uint32_t(N - 1))(rng);
      const std::size_t r = find(v);
      if (std::find(roots.begin(), roots.end(), r) != roots.end()) continue;
      roots.push_back(r);
      row.push_back(v);
    }
    if (row.size() < 2) continue;
    for (std::size_t k = 1; k < roots.size(); ++k) parent[roots[k]] = roots[0];
    rows.push_back(row);
  }
  return qcldpc::SparseParityCheck(N, rows);
}

/// Largest number of checks on the shortest path between two variables
/// (infinite distances ignored); at least 1.
inline std::size_t variable_diameter(const qcldpc::SparseParityCheck& h) {
  const std::size_t N = h.num_vars();
  std::vector<std::vector<std::size_t>> adj(N);
  for (std::size_t m = 0; m < h.num_checks(); ++m) {
    for (auto a : h.row(m)) {
      for (auto b : h.row(m)) {
        if (a != b) adj[a].push_back(b);
      }
    }
  }
  std::size_t diam = 1;
  for (std::size_t s = 0; s < N; ++s) {
    std::vector<std::size_t> dist(N, SIZE_MAX);
    std::vector<std::size_t> queue{s};
    dist[s] = 0;
    for (std::size_t q = 0; q < queue.size(); ++q) {
      for (auto nb : adj[queue[q]]) {
        if (dist[nb] == SIZE_MAX) {
          dist[nb] = dist[queue[q]] + 1;
          diam = std::max(diam, dist[nb]);
          queue.push_back(nb);
        }
      }
    }
  }
  return diam;
}

}  // namespace fixtures
