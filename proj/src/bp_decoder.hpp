#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "code_model.hpp"

namespace qcldpc {

inline constexpr std::size_t kDefaultGamma = 32;

/// Messages of Gamma codewords decoded in lock-step over one Tanner graph.
///
/// Edge package k (edge id k of the EdgeLayout) occupies
/// edge_values()[k * gamma, (k + 1) * gamma); channel package n likewise holds
/// the Gamma channel LLRs of variable n. Between a horizontal and a vertical
/// step the edge store holds only alphas; between a vertical and a horizontal
/// step only betas.
class MessageBatch {
 public:
  MessageBatch(std::size_t num_edges, std::size_t num_vars, std::size_t gamma);

  std::size_t gamma() const { return gamma_; }
  std::size_t num_edges() const { return edges_.size() / gamma_; }
  std::size_t num_vars() const { return channel_.size() / gamma_; }

  std::span<double> edge_values() { return edges_; }
  std::span<const double> edge_values() const { return edges_; }
  std::span<double> channel_values() { return channel_; }
  std::span<const double> channel_values() const { return channel_; }

  std::span<double> edge_package(std::size_t e) { return {edges_.data() + e * gamma_, gamma_}; }
  std::span<const double> edge_package(std::size_t e) const {
    return {edges_.data() + e * gamma_, gamma_};
  }
  std::span<double> channel_package(std::size_t n) {
    return {channel_.data() + n * gamma_, gamma_};
  }
  std::span<const double> channel_package(std::size_t n) const {
    return {channel_.data() + n * gamma_, gamma_};
  }

 private:
  std::size_t gamma_;
  std::vector<double> edges_;
  std::vector<double> channel_;
};

/// mu = 2 y / sigma^2, saturated. `received` is lane-major: lane g, bit n at
/// received[g * N + n]. Throws Error on sigma <= 0 or a size mismatch.
MessageBatch init_messages(const EdgeLayout& layout, std::span<const double> received,
                           std::size_t gamma, double sigma);

/// Same, from channel LLRs (lane-major Gamma x N) instead of channel samples.
MessageBatch init_messages_llr(const EdgeLayout& layout, std::span<const double> channel_llr,
                               std::size_t gamma);

/// Horizontal step. `active`, when non-empty, holds one flag per lane;
/// lanes with a zero flag keep their messages.
void check_node_update(MessageBatch& batch, const EdgeLayout& layout,
                       std::span<const std::uint8_t> active = {});

/// Vertical step. Writes the a-posteriori LLRs into `posterior`, which is
/// package-major (N x Gamma, variable n at [n * gamma, (n + 1) * gamma)).
void variable_node_update(MessageBatch& batch, const EdgeLayout& layout,
                          std::span<double> posterior, std::span<const std::uint8_t> active = {});

struct HardDecision {
  /// Package-major N x Gamma; 1 where the posterior is negative.
  std::vector<std::uint8_t> bits;
  /// One flag per lane: every check has even parity.
  std::vector<std::uint8_t> syndrome_ok;
};

HardDecision hard_decision_and_syndrome(std::span<const double> posterior,
                                        const EdgeLayout& layout, std::size_t gamma);

struct DecodeOptions {
  std::size_t max_iter = 30;
  /// Freeze a lane once its syndrome is satisfied. Off by default so every
  /// lane runs exactly max_iter iterations.
  bool early_stop = false;
};

struct DecodeResult {
  std::size_t gamma = 0;
  std::size_t num_vars = 0;
  /// Lane-major Gamma x N.
  std::vector<std::uint8_t> hard_bits;
  std::vector<std::uint32_t> iterations_run;
  std::vector<std::uint8_t> syndrome_ok;
  /// Lane-major Gamma x N.
  std::vector<double> posterior;

  std::span<const std::uint8_t> lane_bits(std::size_t g) const {
    return {hard_bits.data() + g * num_vars, num_vars};
  }
  std::span<const double> lane_posterior(std::size_t g) const {
    return {posterior.data() + g * num_vars, num_vars};
  }
};

/// Reusable block decoder: holds the message store and scratch for one
/// Gamma-wide batch. Not thread-safe; use one instance per worker.
class BlockDecoder {
 public:
  BlockDecoder(const EdgeLayout& layout, std::size_t gamma = kDefaultGamma);

  std::size_t gamma() const { return batch_.gamma(); }
  const EdgeLayout& layout() const { return *layout_; }

  DecodeResult decode(std::span<const double> received, double sigma, const DecodeOptions& opts);
  DecodeResult decode_llr(std::span<const double> channel_llr, const DecodeOptions& opts);

 private:
  DecodeResult run(const DecodeOptions& opts);

  const EdgeLayout* layout_;
  MessageBatch batch_;
  std::vector<double> posterior_;
};

DecodeResult decode_batch(const EdgeLayout& layout, std::span<const double> received,
                          std::size_t gamma, double sigma, const DecodeOptions& opts);

}  // namespace qcldpc
