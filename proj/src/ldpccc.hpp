#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "code_model.hpp"

namespace qcldpc {

/// LDPC convolutional code obtained by unwrapping a QC-LDPC block code along
/// the diagonal of its Lambda x Lambda sub-block partition,
/// Lambda = gcd(J, L).
///
/// Sub-block (i, j) of H_QC (rows pJ/Lambda, columns pL/Lambda) is labelled
/// i * Lambda + j. In the semi-infinite matrix, check layer r connects frames
/// r - m_s .. r, and frame r - d meets it through sub-block
/// (r mod Lambda, (r - d) mod Lambda). So the structure of a time slot depends
/// only on r mod Lambda.
class LdpcccCode {
 public:
  /// Edges of one sub-block, numbered row-major (local check, then column).
  struct SubBlock {
    std::uint32_t block_row = 0;
    std::uint32_t block_col = 0;
    /// Shift numbers of the (J/Lambda) x (L/Lambda) circulants inside.
    std::vector<int> shifts;
    /// Edge range of local check rho: [row_start[rho], row_start[rho + 1]).
    std::vector<std::uint32_t> row_start;
    /// Local variable (0..c-1) of each edge.
    std::vector<std::uint32_t> edge_col;
    /// Edges of local variable nu, increasing: col_edges[col_start[nu]..col_start[nu+1]).
    std::vector<std::uint32_t> col_start;
    std::vector<std::uint32_t> col_edges;
    /// Offset of this sub-block inside one processor's message group.
    std::size_t offset = 0;

    std::size_t num_edges() const { return edge_col.size(); }
  };

  /// Throws Error when gcd(J, L) < 2.
  explicit LdpcccCode(const ExponentMatrix& base);

  const ExponentMatrix& base() const { return base_; }
  std::size_t lambda() const { return lambda_; }
  std::size_t memory() const { return lambda_ - 1; }
  std::size_t period() const { return lambda_; }
  std::size_t frame_size() const { return frame_size_; }
  std::size_t check_layer_size() const { return layer_size_; }
  std::size_t info_bits_per_frame() const { return frame_size_ - layer_size_; }
  /// Design rate b / c = 1 - J / L.
  double rate() const;

  std::size_t num_labels() const { return lambda_ * lambda_; }
  /// Edges in H_base (one period of the convolutional matrix).
  std::size_t edges_per_period() const { return edges_per_period_; }

  /// Labels used by check layers with r mod Lambda == kappa, in frame order
  /// oldest to newest (frame r - m_s first).
  std::span<const std::uint32_t> lut_c(std::size_t kappa) const {
    return {lut_c_.data() + kappa * lambda_, lambda_};
  }
  /// Labels holding the edges of a frame with f mod Lambda == j, ordered by
  /// check layer f, f + 1, ..., f + m_s.
  std::span<const std::uint32_t> lut_v(std::size_t j) const {
    return {lut_v_.data() + j * lambda_, lambda_};
  }
  const SubBlock& sub_block(std::uint32_t label) const { return blocks_[label]; }
  /// Shift grid of a sub-block (the LUT_sub entry for `label`).
  std::span<const int> lut_sub(std::uint32_t label) const { return blocks_[label].shifts; }

 private:
  ExponentMatrix base_;
  std::size_t lambda_;
  std::size_t frame_size_;
  std::size_t layer_size_;
  std::size_t edges_per_period_ = 0;
  std::vector<std::uint32_t> lut_c_;
  std::vector<std::uint32_t> lut_v_;
  std::vector<SubBlock> blocks_;
};

LdpcccCode unwrap_qc(const ExponentMatrix& base);

/// One decoded frame leaving the last processor.
struct StreamFrame {
  std::uint64_t index = 0;
  /// Emitted by flush() (the stream was terminated with virtual frames).
  bool tail = false;
  std::size_t gamma = 0;
  std::size_t frame_size = 0;
  /// Lane-major Gamma x c.
  std::vector<std::uint8_t> bits;
  std::vector<double> posterior;
  /// Per lane: check layer `index` (whose frames are all decided once this
  /// frame leaves) has even parity on every check.
  std::vector<std::uint8_t> layer_syndrome_ok;

  std::span<const std::uint8_t> lane_bits(std::size_t g) const {
    return {bits.data() + g * frame_size, frame_size};
  }
};

/// Pipelined LDPCCC decoder: I processors, each one BP iteration apart, over a
/// circulant memory of I message groups and I * (m_s + 1) channel frames.
///
/// Frame f lives in channel slot f mod (I (m_s + 1)) and in message group
/// (f / Lambda) mod I for its whole stay; moving to the next processor is
/// only a change of which check layer / frame index a processor works on.
class StreamDecoder {
 public:
  /// What a single push did; kept for inspection.
  struct SlotActivity {
    std::uint64_t slot = 0;
    std::size_t channel_slot = 0;
    std::vector<std::int64_t> check_layers;
    std::vector<std::int64_t> variable_frames;
    std::optional<std::uint64_t> emitted;
  };

  StreamDecoder(const LdpcccCode& code, std::size_t processors, std::size_t gamma);

  const LdpcccCode& code() const { return *code_; }
  std::size_t processors() const { return processors_; }
  std::size_t gamma() const { return gamma_; }
  /// Number of frames pushed so far (the next time slot).
  std::uint64_t time_slot() const { return t_; }
  /// Message units per lane: I * E.
  std::size_t message_capacity() const { return processors_ * code_->edges_per_period(); }
  std::size_t channel_frames() const { return window_; }
  const SlotActivity& last_slot() const { return activity_; }

  /// `received` is lane-major Gamma x c; mu = 2 y / sigma^2.
  std::optional<StreamFrame> push_frame(std::span<const double> received, double sigma);
  /// Same with channel LLRs given directly.
  std::optional<StreamFrame> push_llr_frame(std::span<const double> channel_llr);

  /// Drives zero-LLR virtual frames through until every pushed frame has left
  /// the decoder; returns those frames (flagged tail) and resets the decoder.
  std::vector<StreamFrame> flush();

  void reset();

 private:
  std::optional<StreamFrame> step(std::span<const double> lane_major, double scale);
  double* group_base(std::uint64_t frame);
  double* channel_base(std::uint64_t frame);
  void seed_frame(std::uint64_t frame);
  void update_check_layer(std::uint64_t layer);
  void update_frame(std::uint64_t frame, double* posterior);
  StreamFrame emit(std::uint64_t frame);

  const LdpcccCode* code_;
  std::size_t processors_;
  std::size_t gamma_;
  std::size_t window_;
  std::uint64_t t_ = 0;
  std::vector<double> messages_;
  std::vector<double> channel_;
  std::vector<double> scratch_;
  std::vector<double*> pkg_;
  std::vector<double> posterior_;
  /// Hard decisions of the last Lambda emitted frames, package-major, indexed
  /// by frame mod Lambda.
  std::vector<std::vector<std::uint8_t>> decided_;
  SlotActivity activity_;
};

}  // namespace qcldpc
