// Acceptance suite: one PASS/FAIL line per criterion.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <random>
#include <string>
#include <thread>

#include "bp_decoder.hpp"
#include "bp_kernels.hpp"
#include "channel.hpp"
#include "fixtures.hpp"
#include "harness.hpp"
#include "ldpccc.hpp"
#include "llr_math.hpp"
#include "oracle/oracle.hpp"

using namespace qcldpc;

namespace {

void verdict(const char* id, bool pass, const std::string& detail) {
  std::printf("criterion %s %s: %s\n", id, pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  CHECK_MESSAGE(pass, "criterion ", std::string(id), ": ", detail);
}

std::string format(const char* fmt, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, fmt, args...);
  return buf;
}

std::size_t hardware_cores() { return std::max(1u, std::thread::hardware_concurrency()); }

}  // namespace

TEST_CASE("criterion 1: block BP matches the exact posterior on cycle-free codes") {
  std::mt19937_64 rng(20240101);
  std::uniform_real_distribution<double> llr(-3.0, 3.0);
  const int codes = 50;
  double worst = 0.0;
  for (int trial = 0; trial < codes; ++trial) {
    const std::size_t N = 2 + rng() % 15;
    const auto h = fixtures::random_tree_code(rng, N);
    const EdgeLayout layout(h);
    std::vector<double> mu(N);
    for (auto& m : mu) m = llr(rng);
    const auto exact = oracle::exact_posterior_llr(h, mu);
    BlockDecoder dec(layout, 1);
    const auto res = dec.decode_llr(mu, {fixtures::variable_diameter(h), false});
    for (std::size_t n = 0; n < N; ++n) worst = std::max(worst, std::fabs(res.posterior[n] - exact[n]));
  }
  verdict("1", worst <= 1e-9, format("%d cycle-free codes (N <= 16), max |BP - exact| = %.3g (limit 1e-9)", codes, worst));
}

TEST_CASE("criterion 2: pipelined decoding is bit-identical to the reference window decoder") {
  std::mt19937_64 rng(77);
  std::size_t streams = 0, mismatches = 0, frames = 0;
  for (std::size_t p : {8, 16}) {
    const LdpcccCode cc(fixtures::code_a_scaled(p));
    const std::size_t c = cc.frame_size();
    for (int s = 0; s < 100; ++s) {
      const std::size_t I = 1 + s % 5;
      const std::size_t K = 3 * I * (cc.memory() + 1);
      const double sigma = ebn0_to_sigma(std::uniform_real_distribution<double>(0.0, 3.0)(rng), cc.rate());
      const std::uint64_t seed = rng();
      std::vector<std::vector<double>> mu;
      for (std::size_t k = 0; k < K; ++k) {
        auto y = simulate_block_sigma(sigma, seed, 1, c, 0, k * c);
        for (auto& v : y) v *= 2.0 / (sigma * sigma);
        mu.push_back(std::move(y));
      }
      const auto ref = oracle::reference_window_decoder(cc, I, mu);
      StreamDecoder dec(cc, I, 1);
      std::vector<StreamFrame> got;
      for (const auto& f : mu) {
        if (auto out = dec.push_llr_frame(f)) got.push_back(std::move(*out));
      }
      for (auto& f : dec.flush()) got.push_back(std::move(f));
      bool same = got.size() == ref.size();
      for (std::size_t k = 0; same && k < got.size(); ++k) {
        same = got[k].index == ref[k].index && got[k].tail == ref[k].tail && got[k].bits == ref[k].bits;
      }
      ++streams;
      frames += K;
      mismatches += !same;
    }
  }
  verdict("2", mismatches == 0,
          format("%zu streams of 3 I (m_s + 1) frames on Code A' with p in {8, 16} (%zu frames), %zu mismatching",
                 streams, frames, mismatches));
}

TEST_CASE("criterion 3: 32 identical lanes reproduce the single-lane result") {
  const auto h = expand_qc(fixtures::code_a_scaled(16));
  const EdgeLayout layout(h);
  const std::size_t N = h.num_vars();
  std::mt19937_64 rng(3);
  BlockDecoder one(layout, 1), wide(layout, 32);
  int failures = 0;
  const int trials = 1000;
  for (int t = 0; t < trials; ++t) {
    const double sigma = ebn0_to_sigma(std::uniform_real_distribution<double>(-1.0, 4.0)(rng), 5.0 / 6.0);
    const std::size_t iters = 1 + rng() % 8;
    const auto y = simulate_block_sigma(sigma, rng(), 1, N);
    std::vector<double> ys;
    ys.reserve(32 * N);
    for (int g = 0; g < 32; ++g) ys.insert(ys.end(), y.begin(), y.end());
    const auto r1 = one.decode(y, sigma, {iters, false});
    const auto r32 = wide.decode(ys, sigma, {iters, false});
    bool same = true;
    for (std::size_t g = 0; g < 32 && same; ++g) {
      same = std::equal(r1.hard_bits.begin(), r1.hard_bits.end(), r32.lane_bits(g).begin()) &&
             std::memcmp(r1.posterior.data(), r32.lane_posterior(g).data(), N * sizeof(double)) == 0 &&
             r1.syndrome_ok[0] == r32.syndrome_ok[g];
    }
    failures += !same;
  }
  verdict("3", failures == 0, format("%d random trials, %d with a lane differing from the gamma = 1 run", trials, failures));
}

TEST_CASE("criterion 4: block FER of Code A at 3.2 dB") {
  const auto code = fixtures::code_a();
  SimulationConfig cfg;
  cfg.code_id = "code_a";
  cfg.ebn0_db = {3.2};
  cfg.max_iter = 30;
  cfg.gamma = kDefaultGamma;
  cfg.stop_errors = 300;
  cfg.max_frames = 200000;
  cfg.seed = 2024;
  cfg.workers = hardware_cores();
  const auto r = run_block_simulation(code, cfg).front();
  const bool pass = !r.capped && r.frame_errors >= 300 && r.fer >= 0.01 && r.fer <= 0.09;
  verdict("4", pass,
          format("Code A, 30 iterations, %llu frame errors in %llu frames, FER = %.4f (band [0.01, 0.09]), %.0f s",
                 (unsigned long long)r.frame_errors, (unsigned long long)r.frames, r.fer, r.seconds));
}

TEST_CASE("criterion 5: stream FER of Code A' at 3.1 dB with I = 20") {
  const auto code = fixtures::code_a();
  SimulationConfig cfg;
  cfg.code_id = "code_a";
  cfg.mode = SimMode::stream;
  cfg.ebn0_db = {3.1};
  cfg.processors = 20;
  cfg.gamma = kDefaultGamma;
  cfg.stop_errors = 300;
  cfg.max_frames = 400000;
  cfg.seed = 2024;
  cfg.workers = hardware_cores();
  const auto r = run_stream_simulation(code, cfg).front();
  const bool pass = !r.capped && r.frame_errors >= 300 && r.fer >= 0.01 && r.fer <= 0.09;
  verdict("5", pass,
          format("Code A', I = 20, %llu frame errors in %llu frames, FER = %.4f (band [0.01, 0.09]), %.0f s",
                 (unsigned long long)r.frame_errors, (unsigned long long)r.frames, r.fer, r.seconds));
}

TEST_CASE("criterion 6: layout and structure") {
  std::vector<std::string> bad;
  const auto code = fixtures::code_a();
  if (code.h.num_edges() != 40512) bad.push_back("Code A edge count");

  const LdpcccCode cc(*code.exponent);
  if (cc.lambda() != 4) bad.push_back("Lambda");
  if (cc.frame_size() != 2532) bad.push_back("c");
  if (cc.check_layer_size() != 422) bad.push_back("c-b");
  if (cc.period() != 4) bad.push_back("T");
  if (cc.memory() != 3) bad.push_back("m_s");

  const EdgeLayout ex(fixtures::example_4x8());
  for (std::uint32_t m = 0; m < 4; ++m) {
    if (ex.lut_c(m).begin != 4 * m || ex.lut_c(m).end != 4 * m + 4) bad.push_back("LUT_c example");
  }
  const std::vector<std::vector<std::uint32_t>> lut_v{{4, 12}, {0, 5}, {6, 8}, {1, 13}, {2, 14}, {7, 9}, {10, 15}, {3, 11}};
  for (std::size_t n = 0; n < 8; ++n) {
    auto v = ex.lut_v(n);
    if (std::vector<std::uint32_t>(v.begin(), v.end()) != lut_v[n]) bad.push_back("LUT_v example");
  }
  const std::uint32_t lc[4][4] = {{1, 2, 3, 0}, {6, 7, 4, 5}, {11, 8, 9, 10}, {12, 13, 14, 15}};
  const std::uint32_t lv[4][4] = {{0, 4, 8, 12}, {5, 9, 13, 1}, {10, 14, 2, 6}, {15, 3, 7, 11}};
  for (std::size_t k = 0; k < 4; ++k) {
    if (!std::equal(cc.lut_c(k).begin(), cc.lut_c(k).end(), lc[k])) bad.push_back("LUT_c unwrapped");
    if (!std::equal(cc.lut_v(k).begin(), cc.lut_v(k).end(), lv[k])) bad.push_back("LUT_v unwrapped");
  }
  std::string detail = "E = 40512, Lambda = 4, c = 2532, c-b = 422, T = 4, m_s = 3, four LUTs";
  if (!bad.empty()) {
    detail = "mismatch in";
    for (const auto& b : bad) detail += " " + b;
  }
  verdict("6", bad.empty(), detail);
}

TEST_CASE("criterion 7: numerical invariants over randomized node updates") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto draw = [&]() {
    const double u = unit(rng);
    if (u < 0.03) return 0.0;
    if (u < 0.08) return (unit(rng) < 0.5 ? -1.0 : 1.0) * kLlrMax;
    const double mag = unit(rng) < 0.3 ? std::exp(std::uniform_real_distribution<double>(-7.0, 3.9)(rng))
                                       : std::fabs(std::normal_distribution<double>(0.0, 6.0)(rng));
    return (unit(rng) < 0.5 ? -1.0 : 1.0) * std::clamp(std::max(mag, 1e-3), 0.0, kLlrMax);
  };
  const std::size_t G = 4;
  const int updates = 100000;
  long sign_bad = 0, contraction_bad = 0, beyond_flat = 0, saturation_bad = 0, sum_bad = 0;
  double worst_excess = 0.0, worst_sum = 0.0;
  std::vector<double> scratch(kernels::scratch_size(16, G));

  for (int t = 0; t < updates; ++t) {
    // check node
    const std::size_t d = 1 + rng() % 12;
    std::vector<std::vector<double>> pkg(d, std::vector<double>(G));
    std::vector<double*> ptr;
    for (auto& p : pkg) {
      for (auto& v : p) v = draw();
      ptr.push_back(p.data());
    }
    const auto beta = pkg;
    kernels::check_update(ptr.data(), d, G, scratch.data());
    for (std::size_t k = 0; k < d; ++k) {
      for (std::size_t g = 0; g < G; ++g) {
        const double a = pkg[k][g];
        if (!(std::fabs(a) <= kLlrMax)) ++saturation_bad;
        bool negative = false, zero = false;
        double min_mag = INFINITY;
        for (std::size_t l = 0; l < d; ++l) {
          if (l == k) continue;
          const double b = beta[l][g];
          zero |= b == 0.0;
          negative ^= b < 0.0;
          min_mag = std::min(min_mag, std::fabs(b));
        }
        if (zero ? a != 0.0 : (a == 0.0 || (a < 0.0) != negative)) ++sign_bad;
        const double excess = std::fabs(a) - min_mag;
        worst_excess = std::max(worst_excess, excess);
        if (excess > 1e-6) ++beyond_flat;
        // forward error of the tanh-domain product: (d + 2) ulps of 1 scaled by d alpha / d t
        const double bound = 1e-9 + 4.0 * double(d + 2) * 0x1p-53 * std::exp(std::min(min_mag, kLlrMax));
        if (excess > bound) ++contraction_bad;
      }
    }

    // variable node
    const std::size_t dv = 1 + rng() % 10;
    std::vector<std::vector<double>> vpkg(dv, std::vector<double>(G));
    std::vector<double*> vptr;
    for (auto& p : vpkg) {
      for (auto& v : p) v = std::uniform_real_distribution<double>(-30.0, 30.0)(rng);
      vptr.push_back(p.data());
    }
    const auto alpha = vpkg;
    std::vector<double> mu(G), post(G);
    for (auto& m : mu) m = draw();
    kernels::variable_update(vptr.data(), dv, mu.data(), post.data(), G, scratch.data());
    for (std::size_t g = 0; g < G; ++g) {
      if (!(std::fabs(post[g]) <= kLlrMax)) ++saturation_bad;
      for (std::size_t k = 0; k < dv; ++k) {
        const double b = vpkg[k][g];
        if (!(std::fabs(b) <= kLlrMax)) ++saturation_bad;
        if (std::fabs(post[g]) < kLlrMax && std::fabs(b) < kLlrMax) {
          const double err = std::fabs((post[g] - b) - alpha[k][g]);
          worst_sum = std::max(worst_sum, err);
          if (err > 1e-9) ++sum_bad;
        }
      }
    }
  }
  const bool pass = sign_bad == 0 && contraction_bad == 0 && saturation_bad == 0 && sum_bad == 0;
  verdict("7", pass,
          format("%d check + %d variable updates (gamma %zu): sign %ld, contraction %ld (bound 1e-9 + 4 (d+2) u e^min; "
                 "%ld exceed a flat 1e-6, worst excess %.2g), saturation %ld, exclusive sum %ld (worst %.2g) "
                 "violations",
                 updates, updates, G, sign_bad, contraction_bad, beyond_flat, worst_excess, saturation_bad, sum_bad,
                 worst_sum));
}

TEST_CASE("criterion 8a: worker speedup in (1, cores]") {
  const auto code = fixtures::code_a();
  const std::size_t cores = hardware_cores();
  SimulationConfig cfg;
  cfg.code_id = "code_a";
  cfg.ebn0_db = {3.2};
  cfg.max_iter = 10;
  cfg.gamma = kDefaultGamma;
  const auto recs = bench_throughput(code, cfg, 64 * std::max<std::size_t>(cores, 2));
  double one = 0.0, all = 0.0;
  for (const auto& r : recs) {
    if (r.gamma != kDefaultGamma) continue;
    if (r.workers == 1) one = r.frames_per_sec;
    if (r.workers == cores) all = r.frames_per_sec;
  }
  const double speedup = one > 0.0 ? all / one : 0.0;
  const bool pass = cores > 1 && speedup > 1.0 && speedup <= double(cores);
  verdict("8a", pass,
          format("%zu hardware thread(s): %.1f frames/s with 1 worker, %.1f with %zu, speedup %.2f%s", cores, one,
                 all, cores, speedup, cores > 1 ? "" : " (the interval (1, 1] is empty on a single core)"));
}

TEST_CASE("criterion 8b: gamma packaging lowers the time per codeword") {
  const auto code = fixtures::code_a();
  SimulationConfig cfg;
  cfg.code_id = "code_a";
  cfg.ebn0_db = {3.2};
  cfg.max_iter = 30;
  cfg.gamma = kDefaultGamma;
  const auto recs = bench_throughput(code, cfg, 64);
  double t1 = 0.0, tg = 0.0;
  for (const auto& r : recs) {
    if (r.workers != 1) continue;
    if (r.gamma == 1) t1 = r.seconds_per_codeword;
    if (r.gamma == kDefaultGamma) tg = r.seconds_per_codeword;
  }
  const double ratio = t1 > 0.0 ? tg / t1 : INFINITY;
  verdict("8b", ratio < 1.0,
          format("per-codeword time %.2f ms at gamma = 1, %.2f ms at gamma = %zu, ratio %.3f (needs < 1)", 1e3 * t1,
                 1e3 * tg, kDefaultGamma, ratio));
}
