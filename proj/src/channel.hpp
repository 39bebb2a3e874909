#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace qcldpc {

/// sigma = sqrt(1 / (2 R 10^(EbN0/10))) for unit-energy BPSK. Throws Error
/// unless 0 < rate <= 1.
double ebn0_to_sigma(double ebn0_db, double rate);

struct ChannelConfig {
  double ebn0_db = 0.0;
  double rate = 0.5;
  std::uint64_t seed = 0;
  std::size_t gamma = 1;
};

/// Philox4x32-10 block for counter (c0, c1, c2, c3) and key (k0, k1).
struct Philox4x32 {
  std::uint32_t v[4];
};
Philox4x32 philox4x32_10(std::uint32_t c0, std::uint32_t c1, std::uint32_t c2, std::uint32_t c3,
                         std::uint32_t k0, std::uint32_t k1);

/// Standard normal draw that depends only on (seed, lane, position).
/// Positions 2k and 2k+1 are the two outputs of one Box-Muller pair.
double gaussian_sample(std::uint64_t seed, std::uint64_t lane, std::uint64_t position);

/// All-zero codeword over AWGN: y = 1 + sigma g. Lane-major, lane g of the
/// result uses RNG lane first_lane + g at positions first_position ..
/// first_position + n - 1.
std::vector<double> simulate_block_sigma(double sigma, std::uint64_t seed, std::size_t gamma,
                                         std::size_t n, std::uint64_t first_lane = 0,
                                         std::uint64_t first_position = 0);

std::vector<double> simulate_block(const ChannelConfig& cfg, std::size_t n,
                                   std::uint64_t first_lane = 0, std::uint64_t first_position = 0);

}  // namespace qcldpc
