#pragma once

// Brute-force references for the tests. Deliberately unbatched and unclever.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "code_model.hpp"
#include "ldpccc.hpp"

namespace qcldpc::oracle {

/// Bitwise a-posteriori LLRs of the code given channel LLRs `mu`, by summing
/// over all 2^N words. Throws Error when N > 20. Bits that no codeword can
/// take come out as +/-infinity.
std::vector<double> exact_posterior_llr(const SparseParityCheck& h, const std::vector<double>& mu);

struct ReferenceFrame {
  std::uint64_t index = 0;
  bool tail = false;
  std::vector<std::uint8_t> bits;
  std::vector<double> posterior;
};

/// Decodes a finite stream of channel-LLR frames (one lane) on the explicit
/// unwrapped matrix, padded with I * Lambda - 1 zero-LLR frames, following the
/// pipelined time-slot schedule. Returns every real frame in order; frames
/// leaving after the last real push are flagged tail.
std::vector<ReferenceFrame> reference_window_decoder(const LdpcccCode& code, std::size_t processors,
                                                     const std::vector<std::vector<double>>& mu_frames);

}  // namespace qcldpc::oracle
