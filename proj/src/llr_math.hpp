#pragma once

// Scalar LLR primitives used by every decoder kernel.
//
// Written with plain arithmetic and bit casts (no libm calls, no branches) so
// a loop over the Gamma lanes of a message package vectorises, and so a lane
// computed in the vector body of such a loop gets exactly the same bits as a
// lane computed in the scalar epilogue.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>

namespace qcldpc {

/// Saturation bound for every stored LLR (natural-log units).
inline constexpr double kLlrMax = 50.0;

/// The product fed to 2*atanh is clamped to +-(1 - kAtanhEpsilon).
inline constexpr double kAtanhEpsilon = 1e-12;

inline double saturate(double llr) { return std::clamp(llr, -kLlrMax, kLlrMax); }

namespace detail {

inline constexpr double kLn2Hi = 6.93147180369123816490e-01;
inline constexpr double kLn2Lo = 1.90821492927058770002e-10;
inline constexpr double kInvLn2 = 1.44269504088896338700e+00;
inline constexpr double kRoundMagic = 0x1.8p52;
inline constexpr std::int64_t kRoundMagicBits = 0x4338000000000000LL;
inline constexpr std::int64_t kSqrtHalfBits = 0x3FE6A09E667F3BCDLL;

/// 2^k for an integer-valued k in [-1022, 1023] given as int64.
inline double pow2(std::int64_t k) {
  return std::bit_cast<double>(static_cast<std::uint64_t>(k + 1023) << 52);
}

}  // namespace detail

/// e^x - 1 with full relative accuracy near zero. Valid for |x| <= 700.
inline double expm1_llr(double x) {
  using namespace detail;
  const double shifted = x * kInvLn2 + kRoundMagic;
  const double k = shifted - kRoundMagic;
  const std::int64_t ki =
      std::bit_cast<std::int64_t>(shifted) - std::bit_cast<std::int64_t>(kRoundMagic);
  const double r = (x - k * kLn2Hi) - k * kLn2Lo;  // |r| <= ln2/2

  // e^r - 1 = r + r^2/2! + ... + r^14/14!
  double p = 1.0 / 87178291200.0;
  p = p * r + 1.0 / 6227020800.0;
  p = p * r + 1.0 / 479001600.0;
  p = p * r + 1.0 / 39916800.0;
  p = p * r + 1.0 / 3628800.0;
  p = p * r + 1.0 / 362880.0;
  p = p * r + 1.0 / 40320.0;
  p = p * r + 1.0 / 5040.0;
  p = p * r + 1.0 / 720.0;
  p = p * r + 1.0 / 120.0;
  p = p * r + 1.0 / 24.0;
  p = p * r + 1.0 / 6.0;
  p = p * r + 0.5;
  const double em1_r = r + (r * r) * p;

  const double scale = pow2(ki);
  return scale * em1_r + (scale - 1.0);
}

/// log(1 + z) for z > -1, accurate near zero.
inline double log1p_llr(double z) {
  using namespace detail;
  const double u = 1.0 + z;
  const auto bits = std::bit_cast<std::uint64_t>(u);

  // u = m * 2^e with m in [sqrt(1/2), sqrt(2)), by offsetting the bit
  // pattern so the exponent field rolls over at sqrt(2).
  const std::int64_t offset = std::bit_cast<std::int64_t>(bits) - kSqrtHalfBits;
  const std::int64_t k = offset >> 52;
  const double m = std::bit_cast<double>(
      static_cast<std::uint64_t>((offset & 0x000FFFFFFFFFFFFFLL) + kSqrtHalfBits));
  const double e = std::bit_cast<double>(static_cast<std::uint64_t>(kRoundMagicBits + k)) -
                   kRoundMagic;

  // log m = 2 atanh(s), s = (m-1)/(m+1), |s| <= 0.1716
  const double s = (m - 1.0) / (m + 1.0);
  const double s2 = s * s;
  double q = 1.0 / 25.0;
  q = q * s2 + 1.0 / 23.0;
  q = q * s2 + 1.0 / 21.0;
  q = q * s2 + 1.0 / 19.0;
  q = q * s2 + 1.0 / 17.0;
  q = q * s2 + 1.0 / 15.0;
  q = q * s2 + 1.0 / 13.0;
  q = q * s2 + 1.0 / 11.0;
  q = q * s2 + 1.0 / 9.0;
  q = q * s2 + 1.0 / 7.0;
  q = q * s2 + 1.0 / 5.0;
  q = q * s2 + 1.0 / 3.0;
  const double log_m = 2.0 * s + (2.0 * s) * (s2 * q);

  // Rounding of 1 + z is compensated to first order.
  const double correction = (z - (u - 1.0)) / u;
  return (e * kLn2Hi + (log_m + (e * kLn2Lo + correction)));
}

/// tanh(llr / 2).
inline double tanh_half(double llr) {
  const double em1 = expm1_llr(llr);
  return em1 / (em1 + 2.0);
}

/// 2 * atanh(x) with x clamped to +-(1 - kAtanhEpsilon).
inline double atanh_twice(double x) {
  const double limit = 1.0 - kAtanhEpsilon;
  const double abs_x = std::fabs(x);
  const double a = abs_x > limit ? limit : abs_x;
  // Odd function; evaluating on |x| keeps 1 + z away from cancellation.
  return std::copysign(log1p_llr((2.0 * a) / (1.0 - a)), x);
}

}  // namespace qcldpc
