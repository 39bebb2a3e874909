// qcldpc command-line front end. Talks to the library only through the C API.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qcldpc/qcldpc.h"

namespace {

struct Options {
  std::string code;
  std::string format;
  std::vector<double> ebn0;
  std::size_t iters = 30;
  std::size_t processors = 20;
  std::size_t gamma = 32;
  std::uint64_t stop_errors = 100;
  std::uint64_t max_frames = 1'000'000;
  std::uint64_t seed = 1;
  std::size_t workers = 1;
  bool early_stop = false;
  std::string out;
  // bench
  std::string mode = "block";
  std::uint64_t frames = 256;
  // convert
  std::string to;
};

struct CodeDeleter {
  void operator()(qcldpc_code* c) const { qcldpc_code_free(c); }
};
using CodePtr = std::unique_ptr<qcldpc_code, CodeDeleter>;

int report(qcldpc_status s) {
  std::fprintf(stderr, "qcldpc: %s: %s\n", qcldpc_status_string(s), qcldpc_last_error());
  return 1;
}

qcldpc_format format_for(const std::string& name, const std::string& path) {
  std::string use = name;
  if (use.empty()) use = std::filesystem::path(path).extension() == ".alist" ? "alist" : "qc";
  qcldpc_format f{};
  if (qcldpc_parse_format(use.c_str(), &f) != QCLDPC_OK) {
    throw CLI::ValidationError("--format", qcldpc_last_error());
  }
  return f;
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw std::runtime_error("cannot write " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

qcldpc_sim_config make_config(const Options& o, const std::string& code_id, qcldpc_mode mode) {
  qcldpc_sim_config cfg;
  qcldpc_sim_config_init(&cfg);
  cfg.code_id = code_id.c_str();
  cfg.mode = mode;
  cfg.ebn0_db = o.ebn0.data();
  cfg.num_ebn0 = o.ebn0.size();
  cfg.max_iter = o.iters;
  cfg.processors = o.processors;
  cfg.gamma = o.gamma;
  cfg.stop_errors = o.stop_errors;
  cfg.max_frames = o.max_frames;
  cfg.seed = o.seed;
  cfg.workers = o.workers;
  cfg.early_stop = o.early_stop ? 1 : 0;
  return cfg;
}

int run_simulation(const Options& o, qcldpc_mode mode) {
  qcldpc_code* raw = nullptr;
  if (auto s = qcldpc_code_load(o.code.c_str(), format_for(o.format, o.code), &raw)) return report(s);
  CodePtr code(raw);
  const std::string code_id = std::filesystem::path(o.code).stem().string();
  const auto cfg = make_config(o, code_id, mode);

  Output out(o.out);
  std::ostream& os = out.stream();
  os << qcldpc_csv_header() << '\n' << std::flush;
  auto on_row = [](const qcldpc_sim_row* row, void* user) {
    auto& stream = *static_cast<std::ostream*>(user);
    char buf[512];
    std::size_t needed = 0;
    if (qcldpc_csv_format_row(row, buf, sizeof buf, &needed) == QCLDPC_OK) stream << buf << std::flush;
    if (row->capped) {
      std::fprintf(stderr, "qcldpc: Eb/N0 %.3g dB stopped at the frame cap with %llu frame errors\n",
                   row->ebn0_db, static_cast<unsigned long long>(row->frame_errors));
    }
  };
  if (auto s = qcldpc_simulate(code.get(), &cfg, on_row, &os)) return report(s);
  return 0;
}

int run_bench(const Options& o) {
  qcldpc_code* raw = nullptr;
  if (auto s = qcldpc_code_load(o.code.c_str(), format_for(o.format, o.code), &raw)) return report(s);
  CodePtr code(raw);
  const std::string code_id = std::filesystem::path(o.code).stem().string();
  const qcldpc_mode mode = o.mode == "stream" ? QCLDPC_MODE_STREAM : QCLDPC_MODE_BLOCK;
  const auto cfg = make_config(o, code_id, mode);

  Output out(o.out);
  auto on_line = [](const char* line, void* user) {
    *static_cast<std::ostream*>(user) << line << '\n' << std::flush;
  };
  if (auto s = qcldpc_bench(code.get(), &cfg, o.frames, on_line, &out.stream())) return report(s);
  return 0;
}

int run_convert(const Options& o) {
  const qcldpc_format in = format_for(o.format, o.code);
  const qcldpc_format to = format_for(o.to, o.out);
  if (auto s = qcldpc_convert(o.code.c_str(), in, o.out.c_str(), to)) return report(s);
  return 0;
}

void add_sim_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--code", o.code, "code file")->required()->check(CLI::ExistingFile);
  cmd->add_option("--format", o.format, "alist or qc-exponent (default: from extension)");
  cmd->add_option("--ebn0", o.ebn0, "Eb/N0 points in dB, comma separated")
      ->required()
      ->delimiter(',');
  cmd->add_option("--gamma", o.gamma, "codewords per batch")->check(CLI::PositiveNumber);
  cmd->add_option("--stop-errors", o.stop_errors, "frame errors per point")->check(CLI::PositiveNumber);
  cmd->add_option("--max-frames", o.max_frames, "frame cap per point")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", o.seed, "RNG seed");
  cmd->add_option("--workers", o.workers, "worker threads")->check(CLI::PositiveNumber);
  cmd->add_option("--out", o.out, "output file (default: stdout)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"QC-LDPC / LDPC convolutional code BP decoder and simulator"};
  app.require_subcommand(1);
  Options o;

  auto* block = app.add_subcommand("block", "Monte-Carlo FER/BER of block BP decoding");
  add_sim_options(block, o);
  block->add_option("--iters", o.iters, "BP iterations")->check(CLI::PositiveNumber);
  block->add_flag("--early-stop", o.early_stop, "stop a codeword once its syndrome is satisfied");

  auto* stream = app.add_subcommand("stream", "Monte-Carlo FER/BER of pipelined LDPCCC decoding");
  add_sim_options(stream, o);
  stream->add_option("--processors", o.processors, "pipeline processors I")->check(CLI::PositiveNumber);

  auto* bench = app.add_subcommand("bench", "throughput for 1 and all workers, gamma 1 and --gamma");
  add_sim_options(bench, o);
  bench->add_option("--mode", o.mode, "block or stream")->check(CLI::IsMember({"block", "stream"}));
  bench->add_option("--iters", o.iters, "BP iterations")->check(CLI::PositiveNumber);
  bench->add_option("--processors", o.processors, "pipeline processors I")->check(CLI::PositiveNumber);
  bench->add_option("--frames", o.frames, "codewords per measurement")->check(CLI::PositiveNumber);

  auto* convert = app.add_subcommand("convert", "convert between alist and qc-exponent files");
  convert->add_option("--code", o.code, "input code file")->required()->check(CLI::ExistingFile);
  convert->add_option("--format", o.format, "input format (default: from extension)");
  convert->add_option("--to", o.to, "output format (default: from --out extension)");
  convert->add_option("--out", o.out, "output file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*block) return run_simulation(o, QCLDPC_MODE_BLOCK);
    if (*stream) return run_simulation(o, QCLDPC_MODE_STREAM);
    if (*bench) return run_bench(o);
    if (*convert) return run_convert(o);
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "qcldpc: %s\n", e.what());
    return 1;
  }
  return 0;
}
