#include "ldpccc.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <string>

#include "bp_kernels.hpp"
#include "llr_math.hpp"

namespace qcldpc {

LdpcccCode::LdpcccCode(const ExponentMatrix& base) : base_(base) {
  const std::size_t J = base.block_rows();
  const std::size_t L = base.block_cols();
  const std::size_t p = base.circulant();
  lambda_ = std::gcd(J, L);
  if (lambda_ < 2) {
    throw Error("cannot unwrap a " + std::to_string(J) + " x " + std::to_string(L) +
                " QC code: gcd(J, L) = 1 leaves no diagonal to cut along");
  }
  const std::size_t sub_rows = J / lambda_;
  const std::size_t sub_cols = L / lambda_;
  layer_size_ = sub_rows * p;
  frame_size_ = sub_cols * p;

  lut_c_.resize(lambda_ * lambda_);
  lut_v_.resize(lambda_ * lambda_);
  for (std::size_t kappa = 0; kappa < lambda_; ++kappa) {
    for (std::size_t k = 0; k < lambda_; ++k) {
      // Position k is frame r - m_s + k, i.e. column (kappa + 1 + k) mod Lambda.
      lut_c_[kappa * lambda_ + k] =
          static_cast<std::uint32_t>(kappa * lambda_ + (kappa + 1 + k) % lambda_);
    }
  }
  for (std::size_t j = 0; j < lambda_; ++j) {
    for (std::size_t d = 0; d < lambda_; ++d) {
      lut_v_[j * lambda_ + d] = static_cast<std::uint32_t>(((j + d) % lambda_) * lambda_ + j);
    }
  }

  blocks_.resize(lambda_ * lambda_);
  std::size_t offset = 0;
  for (std::size_t i = 0; i < lambda_; ++i) {
    for (std::size_t j = 0; j < lambda_; ++j) {
      SubBlock& sb = blocks_[i * lambda_ + j];
      sb.block_row = static_cast<std::uint32_t>(i);
      sb.block_col = static_cast<std::uint32_t>(j);
      sb.offset = offset;
      for (std::size_t br = 0; br < sub_rows; ++br) {
        for (std::size_t bc = 0; bc < sub_cols; ++bc) {
          sb.shifts.push_back(base.shift(i * sub_rows + br, j * sub_cols + bc));
        }
      }
      sb.row_start.assign(1, 0);
      for (std::size_t rho = 0; rho < layer_size_; ++rho) {
        const std::size_t br = rho / p;
        const std::size_t rr = rho % p;
        for (std::size_t bc = 0; bc < sub_cols; ++bc) {
          const int s = sb.shifts[br * sub_cols + bc];
          if (s < 0) continue;
          sb.edge_col.push_back(static_cast<std::uint32_t>(bc * p + (rr + s) % p));
        }
        sb.row_start.push_back(static_cast<std::uint32_t>(sb.edge_col.size()));
      }
      sb.col_start.assign(frame_size_ + 1, 0);
      for (auto c : sb.edge_col) ++sb.col_start[c + 1];
      for (std::size_t c = 0; c < frame_size_; ++c) sb.col_start[c + 1] += sb.col_start[c];
      sb.col_edges.resize(sb.edge_col.size());
      std::vector<std::uint32_t> fill(sb.col_start.begin(), sb.col_start.end() - 1);
      for (std::uint32_t e = 0; e < sb.edge_col.size(); ++e) sb.col_edges[fill[sb.edge_col[e]]++] = e;
      offset += sb.num_edges();
    }
  }
  edges_per_period_ = offset;
}

double LdpcccCode::rate() const {
  return 1.0 - static_cast<double>(base_.block_rows()) / static_cast<double>(base_.block_cols());
}

LdpcccCode unwrap_qc(const ExponentMatrix& base) { return LdpcccCode(base); }

StreamDecoder::StreamDecoder(const LdpcccCode& code, std::size_t processors, std::size_t gamma)
    : code_(&code), processors_(processors), gamma_(gamma) {
  if (processors == 0) throw Error("the pipeline needs at least one processor");
  if (gamma == 0) throw Error("batch width must be positive");
  const std::size_t lambda = code.lambda();
  window_ = processors * lambda;
  messages_.assign(processors * code.edges_per_period() * gamma, 0.0);
  channel_.assign(window_ * code.frame_size() * gamma, 0.0);

  const std::size_t sub_cols = code.base().block_cols() / lambda;
  const std::size_t sub_rows = code.base().block_rows() / lambda;
  // A check row meets at most sub_cols edges per sub-block, a column at most
  // sub_rows.
  const std::size_t max_degree = std::max(sub_cols, sub_rows) * lambda;
  scratch_.assign(kernels::scratch_size(max_degree, gamma), 0.0);
  pkg_.resize(max_degree);
  posterior_.assign(code.frame_size() * gamma, 0.0);
  decided_.assign(lambda, std::vector<std::uint8_t>(code.frame_size() * gamma, 0));
}

void StreamDecoder::reset() {
  t_ = 0;
  std::fill(messages_.begin(), messages_.end(), 0.0);
  std::fill(channel_.begin(), channel_.end(), 0.0);
  for (auto& d : decided_) std::fill(d.begin(), d.end(), 0);
  activity_ = {};
}

double* StreamDecoder::group_base(std::uint64_t frame) {
  const std::size_t group = (frame / code_->lambda()) % processors_;
  return messages_.data() + group * code_->edges_per_period() * gamma_;
}

double* StreamDecoder::channel_base(std::uint64_t frame) {
  return channel_.data() + (frame % window_) * code_->frame_size() * gamma_;
}

void StreamDecoder::seed_frame(std::uint64_t frame) {
  const double* mu = channel_base(frame);
  double* group = group_base(frame);
  for (std::uint32_t label : code_->lut_v(frame % code_->lambda())) {
    const auto& sb = code_->sub_block(label);
    double* dst = group + sb.offset * gamma_;
    for (std::size_t e = 0; e < sb.num_edges(); ++e) {
      std::copy_n(mu + std::size_t(sb.edge_col[e]) * gamma_, gamma_, dst + e * gamma_);
    }
  }
}

void StreamDecoder::update_check_layer(std::uint64_t layer) {
  const std::size_t lambda = code_->lambda();
  const auto labels = code_->lut_c(layer % lambda);
  // Frames before the start of the stream are absent, not zero.
  const std::int64_t oldest = static_cast<std::int64_t>(layer) - static_cast<std::int64_t>(lambda - 1);
  std::array<double*, 64> bases{};
  std::array<const LdpcccCode::SubBlock*, 64> blocks{};
  std::size_t used = 0;
  for (std::size_t k = 0; k < lambda; ++k) {
    const std::int64_t frame = oldest + static_cast<std::int64_t>(k);
    if (frame < 0) continue;
    const auto& sb = code_->sub_block(labels[k]);
    blocks[used] = &sb;
    bases[used] = group_base(static_cast<std::uint64_t>(frame)) + sb.offset * gamma_;
    ++used;
  }
  for (std::size_t rho = 0; rho < code_->check_layer_size(); ++rho) {
    std::size_t d = 0;
    for (std::size_t u = 0; u < used; ++u) {
      const auto& sb = *blocks[u];
      for (std::uint32_t e = sb.row_start[rho]; e < sb.row_start[rho + 1]; ++e) {
        pkg_[d++] = bases[u] + std::size_t(e) * gamma_;
      }
    }
    kernels::check_update(pkg_.data(), d, gamma_, scratch_.data());
  }
}

void StreamDecoder::update_frame(std::uint64_t frame, double* posterior) {
  const auto labels = code_->lut_v(frame % code_->lambda());
  const double* mu = channel_base(frame);
  double* group = group_base(frame);
  for (std::size_t nu = 0; nu < code_->frame_size(); ++nu) {
    std::size_t d = 0;
    for (std::uint32_t label : labels) {
      const auto& sb = code_->sub_block(label);
      double* base = group + sb.offset * gamma_;
      for (std::uint32_t k = sb.col_start[nu]; k < sb.col_start[nu + 1]; ++k) {
        pkg_[d++] = base + std::size_t(sb.col_edges[k]) * gamma_;
      }
    }
    kernels::variable_update(pkg_.data(), d, mu + nu * gamma_,
                             posterior ? posterior + nu * gamma_ : nullptr, gamma_, scratch_.data());
  }
}

StreamFrame StreamDecoder::emit(std::uint64_t frame) {
  const std::size_t c = code_->frame_size();
  const std::size_t lambda = code_->lambda();
  StreamFrame out;
  out.index = frame;
  out.gamma = gamma_;
  out.frame_size = c;
  out.bits.resize(gamma_ * c);
  out.posterior.resize(gamma_ * c);

  auto& decided = decided_[frame % lambda];
  for (std::size_t nu = 0; nu < c; ++nu) {
    for (std::size_t g = 0; g < gamma_; ++g) {
      const double llr = posterior_[nu * gamma_ + g];
      const std::uint8_t bit = llr < 0.0 ? 1 : 0;
      decided[nu * gamma_ + g] = bit;
      out.bits[g * c + nu] = bit;
      out.posterior[g * c + nu] = llr;
    }
  }

  // Check layer `frame` spans frames frame - m_s .. frame, all decided now.
  const auto labels = code_->lut_c(frame % lambda);
  std::vector<std::uint8_t> parity(gamma_);
  std::vector<std::uint8_t> failed(gamma_, 0);
  for (std::size_t rho = 0; rho < code_->check_layer_size(); ++rho) {
    std::fill(parity.begin(), parity.end(), 0);
    for (std::size_t k = 0; k < lambda; ++k) {
      const std::int64_t f = static_cast<std::int64_t>(frame) - static_cast<std::int64_t>(lambda - 1 - k);
      if (f < 0) continue;
      const auto& bits = decided_[static_cast<std::uint64_t>(f) % lambda];
      const auto& sb = code_->sub_block(labels[k]);
      for (std::uint32_t e = sb.row_start[rho]; e < sb.row_start[rho + 1]; ++e) {
        const std::uint8_t* b = bits.data() + std::size_t(sb.edge_col[e]) * gamma_;
        for (std::size_t g = 0; g < gamma_; ++g) parity[g] ^= b[g];
      }
    }
    for (std::size_t g = 0; g < gamma_; ++g) failed[g] |= parity[g];
  }
  out.layer_syndrome_ok.resize(gamma_);
  for (std::size_t g = 0; g < gamma_; ++g) out.layer_syndrome_ok[g] = failed[g] ? 0 : 1;

  // Release the frame's memory for the frame that will reuse its slot.
  double* group = group_base(frame);
  for (std::uint32_t label : code_->lut_v(frame % lambda)) {
    const auto& sb = code_->sub_block(label);
    std::fill_n(group + sb.offset * gamma_, sb.num_edges() * gamma_, 0.0);
  }
  std::fill_n(channel_base(frame), c * gamma_, 0.0);
  return out;
}

std::optional<StreamFrame> StreamDecoder::step(std::span<const double> lane_major, double scale) {
  const std::size_t c = code_->frame_size();
  const std::size_t lambda = code_->lambda();
  const std::int64_t t = static_cast<std::int64_t>(t_);
  const std::int64_t period = static_cast<std::int64_t>(lambda);
  const std::int64_t ms = period - 1;

  activity_ = {};
  activity_.slot = t_;
  activity_.channel_slot = t_ % window_;

  // (a) the new frame enters processor 1
  double* mu = channel_base(t_);
  if (lane_major.empty()) {
    std::fill_n(mu, c * gamma_, 0.0);
  } else {
    for (std::size_t nu = 0; nu < c; ++nu) {
      for (std::size_t g = 0; g < gamma_; ++g) mu[nu * gamma_ + g] = saturate(scale * lane_major[g * c + nu]);
    }
  }
  seed_frame(t_);

  // (b) every processor updates its check layer
  for (std::size_t i = 0; i < processors_; ++i) {
    const std::int64_t layer = t - static_cast<std::int64_t>(i) * period;
    if (layer < 0) break;
    update_check_layer(static_cast<std::uint64_t>(layer));
    activity_.check_layers.push_back(layer);
  }

  // (c) then the frame leaving each processor
  std::optional<StreamFrame> out;
  for (std::size_t i = 0; i < processors_; ++i) {
    const std::int64_t frame = t - static_cast<std::int64_t>(i) * period - ms;
    if (frame < 0) break;
    const bool last = i + 1 == processors_;
    update_frame(static_cast<std::uint64_t>(frame), last ? posterior_.data() : nullptr);
    activity_.variable_frames.push_back(frame);
    // (d) hard decision on the frame leaving processor I
    if (last) {
      out = emit(static_cast<std::uint64_t>(frame));
      activity_.emitted = static_cast<std::uint64_t>(frame);
    }
  }
  ++t_;
  return out;
}

std::optional<StreamFrame> StreamDecoder::push_frame(std::span<const double> received, double sigma) {
  if (!(sigma > 0.0)) throw Error("noise standard deviation must be positive");
  if (received.size() != gamma_ * code_->frame_size()) {
    throw Error("frame has " + std::to_string(received.size()) + " values, expected " +
                std::to_string(gamma_) + " x " + std::to_string(code_->frame_size()));
  }
  return step(received, 2.0 / (sigma * sigma));
}

std::optional<StreamFrame> StreamDecoder::push_llr_frame(std::span<const double> channel_llr) {
  if (channel_llr.size() != gamma_ * code_->frame_size()) {
    throw Error("frame has " + std::to_string(channel_llr.size()) + " values, expected " +
                std::to_string(gamma_) + " x " + std::to_string(code_->frame_size()));
  }
  return step(channel_llr, 1.0);
}

std::vector<StreamFrame> StreamDecoder::flush() {
  std::vector<StreamFrame> out;
  if (t_ == 0) return out;
  const std::uint64_t last = t_ - 1;
  // Frame `last` leaves at slot last + I (m_s + 1) - 1.
  const std::uint64_t final_slot = last + window_ - 1;
  while (t_ <= final_slot) {
    if (auto f = step({}, 0.0)) {
      f->tail = true;
      out.push_back(std::move(*f));
    }
  }
  reset();
  return out;
}

}  // namespace qcldpc
