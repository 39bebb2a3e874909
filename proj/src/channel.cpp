#include "channel.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "code_model.hpp"

namespace qcldpc {

double ebn0_to_sigma(double ebn0_db, double rate) {
  if (!(rate > 0.0 && rate <= 1.0)) {
    throw Error("code rate must be in (0, 1], got " + std::to_string(rate));
  }
  return std::sqrt(1.0 / (2.0 * rate * std::pow(10.0, ebn0_db / 10.0)));
}

Philox4x32 philox4x32_10(std::uint32_t c0, std::uint32_t c1, std::uint32_t c2, std::uint32_t c3,
                         std::uint32_t k0, std::uint32_t k1) {
  constexpr std::uint32_t kM0 = 0xD2511F53u;
  constexpr std::uint32_t kM1 = 0xCD9E8D57u;
  constexpr std::uint32_t kW0 = 0x9E3779B9u;
  constexpr std::uint32_t kW1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = std::uint64_t(kM0) * c0;
    const std::uint64_t p1 = std::uint64_t(kM1) * c2;
    const std::uint32_t hi0 = std::uint32_t(p0 >> 32), lo0 = std::uint32_t(p0);
    const std::uint32_t hi1 = std::uint32_t(p1 >> 32), lo1 = std::uint32_t(p1);
    c0 = hi1 ^ c1 ^ k0;
    c1 = lo1;
    c2 = hi0 ^ c3 ^ k1;
    c3 = lo0;
    k0 += kW0;
    k1 += kW1;
  }
  return {{c0, c1, c2, c3}};
}

namespace {

// 53-bit uniform in (0, 1].
double unit_open_low(std::uint32_t hi, std::uint32_t lo) {
  const std::uint64_t bits = ((std::uint64_t(hi) << 32) | lo) >> 11;
  return (double(bits) + 1.0) * 0x1.0p-53;
}

struct GaussianPair {
  double first;
  double second;
};

GaussianPair gaussian_pair(std::uint64_t seed, std::uint64_t lane, std::uint64_t pair) {
  const auto r = philox4x32_10(std::uint32_t(pair), std::uint32_t(pair >> 32), std::uint32_t(lane),
                               std::uint32_t(lane >> 32), std::uint32_t(seed),
                               std::uint32_t(seed >> 32));
  const double u1 = unit_open_low(r.v[0], r.v[1]);
  const double u2 = unit_open_low(r.v[2], r.v[3]);
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  return {radius * std::cos(angle), radius * std::sin(angle)};
}

}  // namespace

double gaussian_sample(std::uint64_t seed, std::uint64_t lane, std::uint64_t position) {
  const auto g = gaussian_pair(seed, lane, position / 2);
  return position % 2 == 0 ? g.first : g.second;
}

std::vector<double> simulate_block_sigma(double sigma, std::uint64_t seed, std::size_t gamma,
                                         std::size_t n, std::uint64_t first_lane,
                                         std::uint64_t first_position) {
  if (gamma == 0) throw Error("batch width must be positive");
  if (!(sigma >= 0.0)) throw Error("noise standard deviation must be non-negative");
  std::vector<double> y(gamma * n);
  for (std::size_t g = 0; g < gamma; ++g) {
    const std::uint64_t lane = first_lane + g;
    double* out = y.data() + g * n;
    std::size_t i = 0;
    std::uint64_t pos = first_position;
    if (pos % 2 == 1 && i < n) {
      out[i++] = 1.0 + sigma * gaussian_pair(seed, lane, pos / 2).second;
      ++pos;
    }
    for (; i + 1 < n; i += 2, pos += 2) {
      const auto pr = gaussian_pair(seed, lane, pos / 2);
      out[i] = 1.0 + sigma * pr.first;
      out[i + 1] = 1.0 + sigma * pr.second;
    }
    if (i < n) out[i] = 1.0 + sigma * gaussian_pair(seed, lane, pos / 2).first;
  }
  return y;
}

std::vector<double> simulate_block(const ChannelConfig& cfg, std::size_t n, std::uint64_t first_lane,
                                   std::uint64_t first_position) {
  return simulate_block_sigma(ebn0_to_sigma(cfg.ebn0_db, cfg.rate), cfg.seed, cfg.gamma, n,
                              first_lane, first_position);
}

}  // namespace qcldpc
