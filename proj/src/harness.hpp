#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "code_model.hpp"

namespace qcldpc {

enum class SimMode { block, stream };

const char* sim_mode_name(SimMode mode);

struct SimulationConfig {
  std::string code_id = "code";
  SimMode mode = SimMode::block;
  std::vector<double> ebn0_db;
  /// BP iterations (block mode).
  std::size_t max_iter = 30;
  /// Pipeline processors I (stream mode).
  std::size_t processors = 20;
  std::size_t gamma = 32;
  std::uint64_t stop_errors = 100;
  std::uint64_t max_frames = 1'000'000;
  std::uint64_t seed = 1;
  std::size_t workers = 1;
  bool early_stop = false;
};

/// Throws Error on an unusable configuration.
void validate(const SimulationConfig& cfg);

struct SimulationRow {
  std::string code_id;
  SimMode mode = SimMode::block;
  double ebn0_db = 0.0;
  std::size_t iters_or_processors = 0;
  std::size_t gamma = 0;
  std::uint64_t frames = 0;
  std::uint64_t bit_errors = 0;
  std::uint64_t frame_errors = 0;
  double ber = 0.0;
  double fer = 0.0;
  double seconds = 0.0;
  double frames_per_sec = 0.0;
  double info_bits_per_sec = 0.0;
  /// Stream mode only.
  std::optional<std::size_t> memory;
  /// The frame cap ended the point before stop_errors frame errors.
  bool capped = false;
};

using RowCallback = std::function<void(const SimulationRow&)>;

/// Seed of the RNG stream for E_b/N_0 point `index`.
std::uint64_t point_seed(std::uint64_t seed, std::size_t index);

/// Block BP over the all-zero codeword. Batch b carries RNG lanes
/// b * gamma .. b * gamma + gamma - 1; workers claim batches in turn.
std::vector<SimulationRow> run_block_simulation(const LoadedCode& code, const SimulationConfig& cfg,
                                                const RowCallback& on_row = {});

/// Pipelined LDPCCC decoding of an all-zero stream. Worker w runs one decoder
/// whose lane g is RNG lane w * gamma + g; frame k of a lane uses positions
/// k c .. k c + c - 1. Only frames emitted while pushing are counted.
std::vector<SimulationRow> run_stream_simulation(const LoadedCode& code, const SimulationConfig& cfg,
                                                 const RowCallback& on_row = {});

std::vector<std::string> csv_columns();
void write_csv_header(std::ostream& out);
void write_csv_row(std::ostream& out, const SimulationRow& row);

struct BenchRecord {
  std::string code_id;
  SimMode mode = SimMode::block;
  std::size_t num_edges = 0;
  std::size_t num_vars = 0;
  std::size_t iters_or_processors = 0;
  std::size_t workers = 0;
  std::size_t gamma = 0;
  std::uint64_t frames = 0;
  double seconds = 0.0;
  double frames_per_sec = 0.0;
  double info_bits_per_sec = 0.0;
  double seconds_per_codeword = 0.0;
};

/// Decodes `frames` codewords at the first E_b/N_0 point for every pair of
/// workers in {1, hardware threads} and gamma in {1, cfg.gamma}.
std::vector<BenchRecord> bench_throughput(const LoadedCode& code, const SimulationConfig& cfg,
                                          std::uint64_t frames);

std::string bench_json(const BenchRecord& rec);

}  // namespace qcldpc
