#include "harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <limits>
#include <mutex>
#include <thread>

#include "json.hpp"

#include "bp_decoder.hpp"
#include "channel.hpp"
#include "ldpccc.hpp"

namespace qcldpc {

const char* sim_mode_name(SimMode mode) { return mode == SimMode::block ? "block" : "stream"; }

void validate(const SimulationConfig& cfg) {
  if (cfg.ebn0_db.empty()) throw Error("no Eb/N0 points given");
  if (cfg.stop_errors < 1) throw Error("stop error count must be at least 1");
  if (cfg.max_frames < 1) throw Error("frame cap must be at least 1");
  if (cfg.gamma < 1) throw Error("batch width must be at least 1");
  if (cfg.workers < 1) throw Error("worker count must be at least 1");
  if (cfg.mode == SimMode::block && cfg.max_iter < 1) throw Error("iteration count must be at least 1");
  if (cfg.mode == SimMode::stream && cfg.processors < 1) throw Error("processor count must be at least 1");
}

std::uint64_t point_seed(std::uint64_t seed, std::size_t index) {
  // splitmix64 finaliser
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

namespace {

using Clock = std::chrono::steady_clock;

struct Tally {
  std::mutex mu;
  std::uint64_t frames = 0;
  std::uint64_t bit_errors = 0;
  std::uint64_t frame_errors = 0;
  std::atomic<bool> stop{false};
};

struct LaneCount {
  std::uint64_t bit_errors = 0;
  std::uint64_t frame_errors = 0;
};

void run_workers(std::size_t workers, const std::function<void(std::size_t)>& body) {
  if (workers == 1) {
    body(0);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(body, w);
  for (auto& t : pool) t.join();
}

SimulationRow finish_row(const SimulationConfig& cfg, double ebn0, const Tally& tally, double seconds,
                         double info_bits_per_frame) {
  SimulationRow row;
  row.code_id = cfg.code_id;
  row.mode = cfg.mode;
  row.ebn0_db = ebn0;
  row.iters_or_processors = cfg.mode == SimMode::block ? cfg.max_iter : cfg.processors;
  row.gamma = cfg.gamma;
  row.frames = tally.frames;
  row.bit_errors = tally.bit_errors;
  row.frame_errors = tally.frame_errors;
  row.seconds = seconds;
  row.capped = tally.frame_errors < cfg.stop_errors;
  if (tally.frames > 0) {
    row.fer = double(tally.frame_errors) / double(tally.frames);
  }
  if (seconds > 0.0) {
    row.frames_per_sec = double(tally.frames) / seconds;
    row.info_bits_per_sec = row.frames_per_sec * info_bits_per_frame;
  }
  return row;
}

}  // namespace

std::vector<SimulationRow> run_block_simulation(const LoadedCode& code, const SimulationConfig& cfg,
                                                const RowCallback& on_row) {
  validate(cfg);
  if (cfg.mode != SimMode::block) throw Error("run_block_simulation needs block mode");
  const EdgeLayout layout(code.h);
  const CodeStats stats = code_stats(code.h);
  const std::size_t N = code.h.num_vars();
  const double rate = stats.rate_bound;
  if (!(rate > 0.0)) throw Error("code has no information bits (M >= N)");
  const double info_bits = double(N - code.h.num_checks());
  const std::size_t gamma = cfg.gamma;
  const DecodeOptions opts{cfg.max_iter, cfg.early_stop};

  std::vector<SimulationRow> rows;
  for (std::size_t pi = 0; pi < cfg.ebn0_db.size(); ++pi) {
    const double ebn0 = cfg.ebn0_db[pi];
    const double sigma = ebn0_to_sigma(ebn0, rate);
    const std::uint64_t seed = point_seed(cfg.seed, pi);
    Tally tally;
    std::atomic<std::uint64_t> next_batch{0};
    const auto start = Clock::now();

    run_workers(cfg.workers, [&](std::size_t) {
      BlockDecoder decoder(layout, gamma);
      while (!tally.stop.load(std::memory_order_relaxed)) {
        const std::uint64_t b = next_batch.fetch_add(1);
        if (b * gamma >= cfg.max_frames) break;
        const auto y = simulate_block_sigma(sigma, seed, gamma, N, b * gamma, 0);
        const auto res = decoder.decode(y, sigma, opts);
        LaneCount batch;
        for (std::size_t g = 0; g < gamma; ++g) {
          std::uint64_t errs = 0;
          for (auto bit : res.lane_bits(g)) errs += bit;
          batch.bit_errors += errs;
          batch.frame_errors += errs > 0;
        }
        std::lock_guard lock(tally.mu);
        tally.frames += gamma;
        tally.bit_errors += batch.bit_errors;
        tally.frame_errors += batch.frame_errors;
        if (tally.frame_errors >= cfg.stop_errors) tally.stop = true;
      }
    });

    const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
    SimulationRow row = finish_row(cfg, ebn0, tally, seconds, info_bits);
    if (tally.frames > 0) row.ber = double(tally.bit_errors) / (double(tally.frames) * double(N));
    if (on_row) on_row(row);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<SimulationRow> run_stream_simulation(const LoadedCode& code, const SimulationConfig& cfg,
                                                 const RowCallback& on_row) {
  validate(cfg);
  if (cfg.mode != SimMode::stream) throw Error("run_stream_simulation needs stream mode");
  if (!code.exponent) throw Error("stream mode needs a qc-exponent code to unwrap");
  const LdpcccCode cc(*code.exponent);
  const std::size_t c = cc.frame_size();
  const double rate = cc.rate();
  if (!(rate > 0.0)) throw Error("code has no information bits (J >= L)");
  const std::size_t gamma = cfg.gamma;

  std::vector<SimulationRow> rows;
  for (std::size_t pi = 0; pi < cfg.ebn0_db.size(); ++pi) {
    const double ebn0 = cfg.ebn0_db[pi];
    const double sigma = ebn0_to_sigma(ebn0, rate);
    const std::uint64_t seed = point_seed(cfg.seed, pi);
    Tally tally;
    const auto start = Clock::now();

    run_workers(cfg.workers, [&](std::size_t w) {
      StreamDecoder decoder(cc, cfg.processors, gamma);
      for (std::uint64_t k = 0; !tally.stop.load(std::memory_order_relaxed); ++k) {
        const auto y = simulate_block_sigma(sigma, seed, gamma, c, w * gamma, k * c);
        const auto frame = decoder.push_frame(y, sigma);
        if (!frame) continue;
        LaneCount batch;
        for (std::size_t g = 0; g < gamma; ++g) {
          std::uint64_t errs = 0;
          for (auto bit : frame->lane_bits(g)) errs += bit;
          batch.bit_errors += errs;
          batch.frame_errors += errs > 0;
        }
        std::lock_guard lock(tally.mu);
        tally.frames += gamma;
        tally.bit_errors += batch.bit_errors;
        tally.frame_errors += batch.frame_errors;
        if (tally.frame_errors >= cfg.stop_errors || tally.frames >= cfg.max_frames) tally.stop = true;
      }
    });

    const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
    SimulationRow row = finish_row(cfg, ebn0, tally, seconds, double(cc.info_bits_per_frame()));
    if (tally.frames > 0) row.ber = double(tally.bit_errors) / (double(tally.frames) * double(c));
    row.memory = cc.memory();
    if (on_row) on_row(row);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<std::string> csv_columns() {
  return {"code_id", "mode",         "ebn0_db", "iters_or_I", "gamma",  "frames",
          "bit_errors", "frame_errors", "ber",     "fer",        "seconds", "frames_per_sec",
          "info_bits_per_sec", "m_s", "capped"};
}

void write_csv_header(std::ostream& out) {
  const auto cols = csv_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';
}

namespace {
std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}
}  // namespace

void write_csv_row(std::ostream& out, const SimulationRow& row) {
  out << row.code_id << ',' << sim_mode_name(row.mode) << ',' << fmt("%.4g", row.ebn0_db) << ','
      << row.iters_or_processors << ',' << row.gamma << ',' << row.frames << ',' << row.bit_errors
      << ',' << row.frame_errors << ',' << fmt("%.6e", row.ber) << ',' << fmt("%.6e", row.fer) << ','
      << fmt("%.6f", row.seconds) << ',' << fmt("%.3f", row.frames_per_sec) << ','
      << fmt("%.1f", row.info_bits_per_sec) << ',';
  if (row.memory) out << *row.memory;
  out << ',' << (row.capped ? 1 : 0) << '\n';
}

std::vector<BenchRecord> bench_throughput(const LoadedCode& code, const SimulationConfig& cfg,
                                          std::uint64_t frames) {
  validate(cfg);
  if (frames < 1) throw Error("bench needs at least one frame");
  const std::size_t cores = std::max<std::size_t>(1, std::thread::hardware_concurrency());
  std::vector<std::size_t> worker_counts{1};
  if (cores > 1) worker_counts.push_back(cores);
  std::vector<std::size_t> gammas{1};
  if (cfg.gamma != 1) gammas.push_back(cfg.gamma);

  std::size_t num_vars = code.h.num_vars();
  double info_bits = double(code.h.num_vars() - code.h.num_checks());
  if (cfg.mode == SimMode::stream) {
    if (!code.exponent) throw Error("stream mode needs a qc-exponent code to unwrap");
    const LdpcccCode cc(*code.exponent);
    num_vars = cc.frame_size();
    info_bits = double(cc.info_bits_per_frame());
  }

  std::vector<BenchRecord> out;
  for (std::size_t workers : worker_counts) {
    for (std::size_t gamma : gammas) {
      SimulationConfig run = cfg;
      run.ebn0_db = {cfg.ebn0_db.front()};
      run.workers = workers;
      run.gamma = gamma;
      run.stop_errors = std::numeric_limits<std::uint64_t>::max();
      run.max_frames = frames;
      const auto rows = cfg.mode == SimMode::block ? run_block_simulation(code, run)
                                                   : run_stream_simulation(code, run);
      const SimulationRow& row = rows.front();
      BenchRecord rec;
      rec.code_id = cfg.code_id;
      rec.mode = cfg.mode;
      rec.num_edges = code.h.num_edges();
      rec.num_vars = num_vars;
      rec.iters_or_processors = row.iters_or_processors;
      rec.workers = workers;
      rec.gamma = gamma;
      rec.frames = row.frames;
      rec.seconds = row.seconds;
      if (row.seconds > 0.0) {
        rec.frames_per_sec = double(row.frames) / row.seconds;
        rec.info_bits_per_sec = rec.frames_per_sec * info_bits;
      }
      if (row.frames > 0) rec.seconds_per_codeword = row.seconds / double(row.frames);
      out.push_back(rec);
    }
  }
  return out;
}

std::string bench_json(const BenchRecord& rec) {
  nlohmann::json j;
  j["code_id"] = rec.code_id;
  j["mode"] = sim_mode_name(rec.mode);
  j["E"] = rec.num_edges;
  j["N"] = rec.num_vars;
  j[rec.mode == SimMode::block ? "iters" : "I"] = rec.iters_or_processors;
  j["workers"] = rec.workers;
  j["gamma"] = rec.gamma;
  j["frames"] = rec.frames;
  j["seconds"] = rec.seconds;
  j["frames_per_sec"] = rec.frames_per_sec;
  j["info_bits_per_sec"] = rec.info_bits_per_sec;
  j["seconds_per_codeword"] = rec.seconds_per_codeword;
  return j.dump();
}

}  // namespace qcldpc
