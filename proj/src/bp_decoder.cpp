#include "bp_decoder.hpp"

#include <algorithm>
#include <string>

#include "bp_kernels.hpp"
#include "llr_math.hpp"

namespace qcldpc {

MessageBatch::MessageBatch(std::size_t num_edges, std::size_t num_vars, std::size_t gamma)
    : gamma_(gamma), edges_(num_edges * gamma, 0.0), channel_(num_vars * gamma, 0.0) {
  if (gamma == 0) throw Error("batch width must be positive");
}

namespace {

void check_received_size(const EdgeLayout& layout, std::span<const double> v, std::size_t gamma) {
  if (gamma == 0) throw Error("batch width must be positive");
  if (v.size() != gamma * layout.num_vars()) {
    throw Error("received block has " + std::to_string(v.size()) + " values, expected " +
                std::to_string(gamma) + " x " + std::to_string(layout.num_vars()));
  }
}

// Transposes lane-major channel LLRs into the batch and seeds every edge.
void load_channel(MessageBatch& batch, const EdgeLayout& layout, std::span<const double> llr,
                  double scale) {
  const std::size_t gamma = batch.gamma();
  const std::size_t N = layout.num_vars();
  for (std::size_t n = 0; n < N; ++n) {
    auto pkg = batch.channel_package(n);
    for (std::size_t g = 0; g < gamma; ++g) pkg[g] = saturate(scale * llr[g * N + n]);
  }
  for (std::size_t e = 0; e < layout.num_edges(); ++e) {
    auto src = batch.channel_package(layout.edge_var(e));
    std::copy(src.begin(), src.end(), batch.edge_package(e).begin());
  }
}

}  // namespace

MessageBatch init_messages(const EdgeLayout& layout, std::span<const double> received,
                           std::size_t gamma, double sigma) {
  if (!(sigma > 0.0)) throw Error("noise standard deviation must be positive");
  check_received_size(layout, received, gamma);
  MessageBatch batch(layout.num_edges(), layout.num_vars(), gamma);
  load_channel(batch, layout, received, 2.0 / (sigma * sigma));
  return batch;
}

MessageBatch init_messages_llr(const EdgeLayout& layout, std::span<const double> channel_llr,
                               std::size_t gamma) {
  check_received_size(layout, channel_llr, gamma);
  MessageBatch batch(layout.num_edges(), layout.num_vars(), gamma);
  load_channel(batch, layout, channel_llr, 1.0);
  return batch;
}

void check_node_update(MessageBatch& batch, const EdgeLayout& layout,
                       std::span<const std::uint8_t> active) {
  const std::size_t gamma = batch.gamma();
  const std::uint32_t max_d = layout.max_check_degree();
  std::vector<double> scratch(kernels::scratch_size(max_d, gamma));
  std::vector<double*> pkg(max_d);
  double* base = batch.edge_values().data();

  for (std::size_t m = 0; m < layout.num_checks(); ++m) {
    const auto r = layout.lut_c(m);
    for (std::uint32_t k = 0; k < r.size(); ++k) pkg[k] = base + std::size_t(r.begin + k) * gamma;
    if (active.empty()) {
      kernels::check_update<false>(pkg.data(), r.size(), gamma, scratch.data());
    } else {
      kernels::check_update<true>(pkg.data(), r.size(), gamma, scratch.data(), active.data());
    }
  }
}

void variable_node_update(MessageBatch& batch, const EdgeLayout& layout,
                          std::span<double> posterior, std::span<const std::uint8_t> active) {
  const std::size_t gamma = batch.gamma();
  if (posterior.size() != layout.num_vars() * gamma) throw Error("posterior buffer size mismatch");
  const std::uint32_t max_d = layout.max_var_degree();
  std::vector<double> scratch(kernels::scratch_size(max_d, gamma));
  std::vector<double*> pkg(max_d);
  double* base = batch.edge_values().data();

  for (std::size_t n = 0; n < layout.num_vars(); ++n) {
    const auto edges = layout.lut_v(n);
    for (std::size_t k = 0; k < edges.size(); ++k) pkg[k] = base + std::size_t(edges[k]) * gamma;
    const double* mu = batch.channel_package(n).data();
    double* post = posterior.data() + n * gamma;
    if (active.empty()) {
      kernels::variable_update<false>(pkg.data(), edges.size(), mu, post, gamma, scratch.data());
    } else {
      kernels::variable_update<true>(pkg.data(), edges.size(), mu, post, gamma, scratch.data(),
                                     active.data());
    }
  }
}

HardDecision hard_decision_and_syndrome(std::span<const double> posterior,
                                        const EdgeLayout& layout, std::size_t gamma) {
  HardDecision out;
  out.bits.resize(posterior.size());
  for (std::size_t i = 0; i < posterior.size(); ++i) out.bits[i] = posterior[i] < 0.0 ? 1 : 0;

  std::vector<std::uint8_t> parity(gamma);
  std::vector<std::uint8_t> failed(gamma, 0);
  for (std::size_t m = 0; m < layout.num_checks(); ++m) {
    std::fill(parity.begin(), parity.end(), 0);
    const auto r = layout.lut_c(m);
    for (std::uint32_t e = r.begin; e < r.end; ++e) {
      const std::uint8_t* b = out.bits.data() + std::size_t(layout.edge_var(e)) * gamma;
      for (std::size_t g = 0; g < gamma; ++g) parity[g] ^= b[g];
    }
    for (std::size_t g = 0; g < gamma; ++g) failed[g] |= parity[g];
  }
  out.syndrome_ok.resize(gamma);
  for (std::size_t g = 0; g < gamma; ++g) out.syndrome_ok[g] = failed[g] ? 0 : 1;
  return out;
}

BlockDecoder::BlockDecoder(const EdgeLayout& layout, std::size_t gamma)
    : layout_(&layout),
      batch_(layout.num_edges(), layout.num_vars(), gamma),
      posterior_(layout.num_vars() * gamma, 0.0) {}

DecodeResult BlockDecoder::decode(std::span<const double> received, double sigma,
                                  const DecodeOptions& opts) {
  if (!(sigma > 0.0)) throw Error("noise standard deviation must be positive");
  check_received_size(*layout_, received, gamma());
  load_channel(batch_, *layout_, received, 2.0 / (sigma * sigma));
  return run(opts);
}

DecodeResult BlockDecoder::decode_llr(std::span<const double> channel_llr,
                                      const DecodeOptions& opts) {
  check_received_size(*layout_, channel_llr, gamma());
  load_channel(batch_, *layout_, channel_llr, 1.0);
  return run(opts);
}

DecodeResult BlockDecoder::run(const DecodeOptions& opts) {
  if (opts.max_iter == 0) throw Error("max_iter must be at least 1");
  const std::size_t gamma = batch_.gamma();
  const std::size_t N = layout_->num_vars();

  std::vector<std::uint8_t> active(gamma, 1);
  std::vector<std::uint32_t> iters(gamma, 0);
  HardDecision hd;
  for (std::size_t it = 1; it <= opts.max_iter; ++it) {
    if (opts.early_stop) {
      check_node_update(batch_, *layout_, active);
      variable_node_update(batch_, *layout_, posterior_, active);
      hd = hard_decision_and_syndrome(posterior_, *layout_, gamma);
      bool any_active = false;
      for (std::size_t g = 0; g < gamma; ++g) {
        if (!active[g]) continue;
        iters[g] = static_cast<std::uint32_t>(it);
        if (hd.syndrome_ok[g]) active[g] = 0;
        any_active |= active[g] != 0;
      }
      if (!any_active) break;
    } else {
      check_node_update(batch_, *layout_);
      variable_node_update(batch_, *layout_, posterior_);
    }
  }
  if (!opts.early_stop) {
    hd = hard_decision_and_syndrome(posterior_, *layout_, gamma);
    std::fill(iters.begin(), iters.end(), static_cast<std::uint32_t>(opts.max_iter));
  }

  DecodeResult res;
  res.gamma = gamma;
  res.num_vars = N;
  res.hard_bits.resize(gamma * N);
  res.posterior.resize(gamma * N);
  for (std::size_t n = 0; n < N; ++n) {
    for (std::size_t g = 0; g < gamma; ++g) {
      res.hard_bits[g * N + n] = hd.bits[n * gamma + g];
      res.posterior[g * N + n] = posterior_[n * gamma + g];
    }
  }
  res.iterations_run = std::move(iters);
  res.syndrome_ok = std::move(hd.syndrome_ok);
  return res;
}

DecodeResult decode_batch(const EdgeLayout& layout, std::span<const double> received,
                          std::size_t gamma, double sigma, const DecodeOptions& opts) {
  BlockDecoder dec(layout, gamma);
  return dec.decode(received, sigma, opts);
}

}  // namespace qcldpc
