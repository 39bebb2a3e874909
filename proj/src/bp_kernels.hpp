#pragma once

// Per-node sum-product kernels over Gamma-wide message packages.
//
// A node of degree d is handed as d package pointers; each package holds the
// Gamma lane values of one edge contiguously. Both the block decoder and the
// streaming decoder go through these two functions, so their arithmetic (and
// its association order) is identical.

#include <cstddef>
#include <cstdint>

#include "llr_math.hpp"

namespace qcldpc::kernels {

/// Scratch doubles needed by check_update / variable_update for degree d.
inline std::size_t scratch_size(std::size_t max_degree, std::size_t gamma) {
  return 2 * (max_degree + 1) * gamma;
}

namespace detail {
template <bool Masked>
inline void store(double* dst, double value, const std::uint8_t* active, std::size_t g) {
  if constexpr (Masked) {
    dst[g] = active[g] ? value : dst[g];
  } else {
    (void)active;
    dst[g] = value;
  }
}
}  // namespace detail

/// Replaces the variable-to-check messages in `pkg[0..d)` with the
/// check-to-variable messages
///   alpha_k = 2 atanh( prod_{l != k} tanh(beta_l / 2) ),
/// evaluated with forward/backward partial products. Lanes with active[g] == 0
/// are left untouched when Masked.
template <bool Masked = false>
void check_update(double* const* pkg, std::size_t d, std::size_t gamma, double* scratch,
                  const std::uint8_t* active = nullptr) {
  using detail::store;
  if (d == 0) return;
  if (d == 1) {
    // Empty product: the check pins the bit, up to the atanh clamp.
    const double pinned = saturate(atanh_twice(1.0));
    for (std::size_t g = 0; g < gamma; ++g) store<Masked>(pkg[0], pinned, active, g);
    return;
  }
  if (d == 2) {
    // Single-element exclusive set: the product is the identity map.
    double* a = pkg[0];
    double* b = pkg[1];
    for (std::size_t g = 0; g < gamma; ++g) {
      const double va = a[g];
      const double vb = b[g];
      store<Masked>(a, saturate(vb), active, g);
      store<Masked>(b, saturate(va), active, g);
    }
    return;
  }

  double* t = scratch;                // d x gamma tanh values
  double* fw = scratch + d * gamma;   // (d-1) x gamma forward products
  double* bw = fw + (d - 1) * gamma;  // gamma running backward product

  for (std::size_t k = 0; k < d; ++k) {
    const double* in = pkg[k];
    double* out = t + k * gamma;
    for (std::size_t g = 0; g < gamma; ++g) out[g] = tanh_half(in[g]);
  }
  for (std::size_t g = 0; g < gamma; ++g) fw[g] = t[g];
  for (std::size_t k = 1; k + 1 < d; ++k) {
    const double* prev = fw + (k - 1) * gamma;
    const double* tk = t + k * gamma;
    double* cur = fw + k * gamma;
    for (std::size_t g = 0; g < gamma; ++g) cur[g] = prev[g] * tk[g];
  }

  {
    const double* last_fw = fw + (d - 2) * gamma;
    const double* t_last = t + (d - 1) * gamma;
    double* out = pkg[d - 1];
    for (std::size_t g = 0; g < gamma; ++g) {
      store<Masked>(out, saturate(atanh_twice(last_fw[g])), active, g);
      bw[g] = t_last[g];
    }
  }
  for (std::size_t k = d - 2; k >= 1; --k) {
    const double* left = fw + (k - 1) * gamma;
    const double* tk = t + k * gamma;
    double* out = pkg[k];
    for (std::size_t g = 0; g < gamma; ++g) {
      store<Masked>(out, saturate(atanh_twice(left[g] * bw[g])), active, g);
      bw[g] = tk[g] * bw[g];
    }
  }
  {
    double* out = pkg[0];
    for (std::size_t g = 0; g < gamma; ++g) store<Masked>(out, saturate(atanh_twice(bw[g])), active, g);
  }
}

/// Replaces the check-to-variable messages in `pkg[0..d)` with
///   beta_k = (mu + sum_{l<k} alpha_l) + sum_{l>k} alpha_l
/// and writes the a-posteriori LLR mu + sum_l alpha_l into `posterior`
/// (when non-null). Everything stored is saturated.
template <bool Masked = false>
void variable_update(double* const* pkg, std::size_t d, const double* mu, double* posterior,
                     std::size_t gamma, double* scratch, const std::uint8_t* active = nullptr) {
  using detail::store;
  double* prefix = scratch;                    // (d + 1) x gamma
  double* suffix = scratch + (d + 1) * gamma;  // gamma

  for (std::size_t g = 0; g < gamma; ++g) prefix[g] = mu[g];
  for (std::size_t k = 0; k < d; ++k) {
    const double* prev = prefix + k * gamma;
    const double* a = pkg[k];
    double* cur = prefix + (k + 1) * gamma;
    for (std::size_t g = 0; g < gamma; ++g) cur[g] = prev[g] + a[g];
  }
  if (posterior) {
    const double* total = prefix + d * gamma;
    for (std::size_t g = 0; g < gamma; ++g) store<Masked>(posterior, saturate(total[g]), active, g);
  }
  if (d == 0) return;

  for (std::size_t g = 0; g < gamma; ++g) suffix[g] = 0.0;
  for (std::size_t k = d; k-- > 0;) {
    const double* pre = prefix + k * gamma;
    double* io = pkg[k];
    for (std::size_t g = 0; g < gamma; ++g) {
      const double alpha = io[g];
      store<Masked>(io, saturate(pre[g] + suffix[g]), active, g);
      suffix[g] = alpha + suffix[g];
    }
  }
}

}  // namespace qcldpc::kernels
