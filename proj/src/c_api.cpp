#include "qcldpc/qcldpc.h"

#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <sstream>
#include <string>
#include <vector>

#include "bp_decoder.hpp"
#include "channel.hpp"
#include "code_model.hpp"
#include "harness.hpp"
#include "ldpccc.hpp"

struct qcldpc_code {
  qcldpc::LoadedCode code;
  std::unique_ptr<qcldpc::EdgeLayout> layout;
  std::unique_ptr<qcldpc::LdpcccCode> ldpccc;
};

struct qcldpc_block_decoder {
  const qcldpc_code* code;
  qcldpc::BlockDecoder decoder;
};

struct qcldpc_stream_decoder {
  const qcldpc_code* code;
  qcldpc::StreamDecoder decoder;
  std::vector<qcldpc::StreamFrame> flushed;
};

namespace {

thread_local std::string g_last_error;

class DimensionError : public qcldpc::Error {
 public:
  using Error::Error;
};

class UnsupportedError : public qcldpc::Error {
 public:
  using Error::Error;
};

qcldpc_status fail(qcldpc_status s, const char* what) {
  g_last_error = what;
  return s;
}

template <class F>
qcldpc_status guarded(F&& f) {
  try {
    g_last_error.clear();
    f();
    return QCLDPC_OK;
  } catch (const qcldpc::ParseError& e) {
    return fail(QCLDPC_ERR_PARSE, e.what());
  } catch (const qcldpc::IoError& e) {
    return fail(QCLDPC_ERR_IO, e.what());
  } catch (const DimensionError& e) {
    return fail(QCLDPC_ERR_DIMENSION, e.what());
  } catch (const UnsupportedError& e) {
    return fail(QCLDPC_ERR_UNSUPPORTED, e.what());
  } catch (const qcldpc::Error& e) {
    return fail(QCLDPC_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(QCLDPC_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(QCLDPC_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(QCLDPC_ERR_INTERNAL, "unknown error");
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw qcldpc::Error(what);
}

qcldpc::CodeFormat to_format(qcldpc_format f) {
  switch (f) {
    case QCLDPC_FORMAT_ALIST:
      return qcldpc::CodeFormat::alist;
    case QCLDPC_FORMAT_QC_EXPONENT:
      return qcldpc::CodeFormat::qc_exponent;
  }
  throw qcldpc::Error("unknown code format");
}

qcldpc_code* wrap(qcldpc::LoadedCode loaded) {
  auto c = std::make_unique<qcldpc_code>();
  c->code = std::move(loaded);
  c->layout = std::make_unique<qcldpc::EdgeLayout>(c->code.h);
  if (c->code.exponent) {
    try {
      c->ldpccc = std::make_unique<qcldpc::LdpcccCode>(*c->code.exponent);
    } catch (const qcldpc::Error&) {
      // gcd(J, L) = 1: block decoding only.
    }
  }
  return c.release();
}

void export_frame(const qcldpc::StreamFrame& f, qcldpc_stream_frame* frame, std::uint8_t* bits,
                  double* posterior) {
  if (frame) {
    frame->index = f.index;
    frame->tail = f.tail ? 1 : 0;
  }
  if (bits) std::memcpy(bits, f.bits.data(), f.bits.size());
  if (posterior) std::memcpy(posterior, f.posterior.data(), f.posterior.size() * sizeof(double));
}

qcldpc::SimulationConfig to_config(const qcldpc_sim_config* cfg) {
  require(cfg != nullptr, "null configuration");
  require(cfg->num_ebn0 == 0 || cfg->ebn0_db != nullptr, "null Eb/N0 list");
  require(cfg->mode == QCLDPC_MODE_BLOCK || cfg->mode == QCLDPC_MODE_STREAM, "unknown mode");
  qcldpc::SimulationConfig out;
  if (cfg->code_id) out.code_id = cfg->code_id;
  out.mode = cfg->mode == QCLDPC_MODE_BLOCK ? qcldpc::SimMode::block : qcldpc::SimMode::stream;
  out.ebn0_db.assign(cfg->ebn0_db, cfg->ebn0_db + cfg->num_ebn0);
  out.max_iter = cfg->max_iter;
  out.processors = cfg->processors;
  out.gamma = cfg->gamma;
  out.stop_errors = cfg->stop_errors;
  out.max_frames = cfg->max_frames;
  out.seed = cfg->seed;
  out.workers = cfg->workers;
  out.early_stop = cfg->early_stop != 0;
  qcldpc::validate(out);
  return out;
}

qcldpc_sim_row to_c_row(const qcldpc::SimulationRow& r) {
  qcldpc_sim_row out{};
  out.code_id = r.code_id.c_str();
  out.mode = r.mode == qcldpc::SimMode::block ? QCLDPC_MODE_BLOCK : QCLDPC_MODE_STREAM;
  out.ebn0_db = r.ebn0_db;
  out.iters_or_processors = r.iters_or_processors;
  out.gamma = r.gamma;
  out.frames = r.frames;
  out.bit_errors = r.bit_errors;
  out.frame_errors = r.frame_errors;
  out.ber = r.ber;
  out.fer = r.fer;
  out.seconds = r.seconds;
  out.frames_per_sec = r.frames_per_sec;
  out.info_bits_per_sec = r.info_bits_per_sec;
  out.has_memory = r.memory.has_value() ? 1 : 0;
  out.memory = r.memory.value_or(0);
  out.capped = r.capped ? 1 : 0;
  return out;
}

qcldpc::SimulationRow from_c_row(const qcldpc_sim_row& r) {
  qcldpc::SimulationRow out;
  out.code_id = r.code_id ? r.code_id : "";
  out.mode = r.mode == QCLDPC_MODE_BLOCK ? qcldpc::SimMode::block : qcldpc::SimMode::stream;
  out.ebn0_db = r.ebn0_db;
  out.iters_or_processors = r.iters_or_processors;
  out.gamma = r.gamma;
  out.frames = r.frames;
  out.bit_errors = r.bit_errors;
  out.frame_errors = r.frame_errors;
  out.ber = r.ber;
  out.fer = r.fer;
  out.seconds = r.seconds;
  out.frames_per_sec = r.frames_per_sec;
  out.info_bits_per_sec = r.info_bits_per_sec;
  if (r.has_memory) out.memory = r.memory;
  out.capped = r.capped != 0;
  return out;
}

void write_decode_outputs(const qcldpc::DecodeResult& res, std::uint8_t* bits, double* posterior,
                          std::uint8_t* syndrome_ok, std::uint32_t* iterations) {
  if (bits) std::memcpy(bits, res.hard_bits.data(), res.hard_bits.size());
  if (posterior) std::memcpy(posterior, res.posterior.data(), res.posterior.size() * sizeof(double));
  if (syndrome_ok) std::memcpy(syndrome_ok, res.syndrome_ok.data(), res.syndrome_ok.size());
  if (iterations) {
    std::memcpy(iterations, res.iterations_run.data(), res.iterations_run.size() * sizeof(std::uint32_t));
  }
}

}  // namespace

extern "C" {

const char* qcldpc_version(void) { return "0.1.0"; }

const char* qcldpc_status_string(qcldpc_status status) {
  switch (status) {
    case QCLDPC_OK:
      return "ok";
    case QCLDPC_ERR_INVALID_ARGUMENT:
      return "invalid argument";
    case QCLDPC_ERR_PARSE:
      return "parse error";
    case QCLDPC_ERR_IO:
      return "i/o error";
    case QCLDPC_ERR_DIMENSION:
      return "dimension mismatch";
    case QCLDPC_ERR_UNSUPPORTED:
      return "unsupported";
    case QCLDPC_ERR_INTERNAL:
      return "internal error";
  }
  return "unknown status";
}

const char* qcldpc_last_error(void) { return g_last_error.c_str(); }

qcldpc_status qcldpc_parse_format(const char* name, qcldpc_format* out) {
  return guarded([&] {
    require(name && out, "null argument");
    *out = qcldpc::parse_code_format(name) == qcldpc::CodeFormat::alist ? QCLDPC_FORMAT_ALIST
                                                                        : QCLDPC_FORMAT_QC_EXPONENT;
  });
}

qcldpc_status qcldpc_code_load(const char* path, qcldpc_format format, qcldpc_code** out) {
  return guarded([&] {
    require(path && out, "null argument");
    *out = nullptr;
    *out = wrap(qcldpc::load_code(path, to_format(format)));
  });
}

qcldpc_status qcldpc_code_from_exponent(size_t rows, size_t cols, size_t circulant,
                                        const int* shifts, qcldpc_code** out) {
  return guarded([&] {
    require(shifts && out, "null argument");
    *out = nullptr;
    qcldpc::ExponentMatrix exp(rows, cols, circulant, std::vector<int>(shifts, shifts + rows * cols));
    qcldpc::LoadedCode loaded{qcldpc::expand_qc(exp), exp};
    *out = wrap(std::move(loaded));
  });
}

qcldpc_status qcldpc_code_save(const qcldpc_code* code, const char* path, qcldpc_format format) {
  return guarded([&] {
    require(code && path, "null argument");
    if (format == QCLDPC_FORMAT_QC_EXPONENT && !code->code.exponent) {
      throw UnsupportedError("qc-exponent output needs a quasi-cyclic code with a known shift grid");
    }
    qcldpc::save_code(path, code->code, to_format(format));
  });
}

void qcldpc_code_free(qcldpc_code* code) { delete code; }

qcldpc_status qcldpc_code_get_info(const qcldpc_code* code, qcldpc_code_info* out) {
  return guarded([&] {
    require(code && out, "null argument");
    const auto s = qcldpc::code_stats(code->code.h);
    *out = {};
    out->num_vars = s.num_vars;
    out->num_checks = s.num_checks;
    out->num_edges = s.num_edges;
    out->min_row_weight = s.min_row_weight;
    out->max_row_weight = s.max_row_weight;
    out->min_col_weight = s.min_col_weight;
    out->max_col_weight = s.max_col_weight;
    out->regular = s.regular ? 1 : 0;
    out->degenerate = s.degenerate ? 1 : 0;
    out->rate_bound = s.rate_bound;
    if (code->code.exponent) {
      out->has_exponent = 1;
      out->block_rows = code->code.exponent->block_rows();
      out->block_cols = code->code.exponent->block_cols();
      out->circulant = code->code.exponent->circulant();
    }
  });
}

qcldpc_status qcldpc_code_ldpccc_info(const qcldpc_code* code, qcldpc_ldpccc_info* out) {
  return guarded([&] {
    require(code && out, "null argument");
    if (!code->ldpccc) throw UnsupportedError("code cannot be unwrapped (needs a shift grid with gcd(J, L) >= 2)");
    const auto& cc = *code->ldpccc;
    out->lambda = cc.lambda();
    out->memory = cc.memory();
    out->period = cc.period();
    out->frame_size = cc.frame_size();
    out->check_layer_size = cc.check_layer_size();
    out->info_bits_per_frame = cc.info_bits_per_frame();
    out->edges_per_period = cc.edges_per_period();
    out->rate = cc.rate();
  });
}

qcldpc_status qcldpc_convert(const char* in_path, qcldpc_format in_format, const char* out_path,
                             qcldpc_format out_format) {
  return guarded([&] {
    require(in_path && out_path, "null argument");
    const auto loaded = qcldpc::load_code(in_path, to_format(in_format));
    if (out_format == QCLDPC_FORMAT_QC_EXPONENT && !loaded.exponent) {
      throw UnsupportedError("qc-exponent output needs a quasi-cyclic code with a known shift grid");
    }
    qcldpc::save_code(out_path, loaded, to_format(out_format));
  });
}

qcldpc_status qcldpc_block_decoder_create(const qcldpc_code* code, size_t gamma,
                                          qcldpc_block_decoder** out) {
  return guarded([&] {
    require(code && out, "null argument");
    require(gamma > 0, "batch width must be positive");
    *out = new qcldpc_block_decoder{code, qcldpc::BlockDecoder(*code->layout, gamma)};
  });
}

void qcldpc_block_decoder_free(qcldpc_block_decoder* dec) { delete dec; }

qcldpc_status qcldpc_block_decode(qcldpc_block_decoder* dec, const double* received, size_t count,
                                  double sigma, size_t max_iter, int early_stop, uint8_t* bits,
                                  double* posterior, uint8_t* syndrome_ok, uint32_t* iterations) {
  return guarded([&] {
    require(dec && received, "null argument");
    if (count != dec->decoder.gamma() * dec->code->code.h.num_vars()) {
      throw DimensionError("received block has " + std::to_string(count) + " values, expected " +
                           std::to_string(dec->decoder.gamma() * dec->code->code.h.num_vars()));
    }
    const auto res = dec->decoder.decode({received, count}, sigma, {max_iter, early_stop != 0});
    write_decode_outputs(res, bits, posterior, syndrome_ok, iterations);
  });
}

qcldpc_status qcldpc_block_decode_llr(qcldpc_block_decoder* dec, const double* llr, size_t count,
                                      size_t max_iter, int early_stop, uint8_t* bits,
                                      double* posterior, uint8_t* syndrome_ok,
                                      uint32_t* iterations) {
  return guarded([&] {
    require(dec && llr, "null argument");
    if (count != dec->decoder.gamma() * dec->code->code.h.num_vars()) {
      throw DimensionError("LLR block has " + std::to_string(count) + " values, expected " +
                           std::to_string(dec->decoder.gamma() * dec->code->code.h.num_vars()));
    }
    const auto res = dec->decoder.decode_llr({llr, count}, {max_iter, early_stop != 0});
    write_decode_outputs(res, bits, posterior, syndrome_ok, iterations);
  });
}

qcldpc_status qcldpc_stream_decoder_create(const qcldpc_code* code, size_t processors, size_t gamma,
                                           qcldpc_stream_decoder** out) {
  return guarded([&] {
    require(code && out, "null argument");
    if (!code->ldpccc) throw UnsupportedError("code cannot be unwrapped (needs a shift grid with gcd(J, L) >= 2)");
    *out = new qcldpc_stream_decoder{code, qcldpc::StreamDecoder(*code->ldpccc, processors, gamma), {}};
  });
}

void qcldpc_stream_decoder_free(qcldpc_stream_decoder* dec) { delete dec; }

uint64_t qcldpc_stream_time_slot(const qcldpc_stream_decoder* dec) {
  return dec ? dec->decoder.time_slot() : 0;
}

namespace {
qcldpc_status stream_push(qcldpc_stream_decoder* dec, const double* values, size_t count,
                          const double* sigma, int* emitted, qcldpc_stream_frame* frame,
                          uint8_t* bits, double* posterior) {
  return guarded([&] {
    require(dec && values, "null argument");
    const std::size_t expect = dec->decoder.gamma() * dec->code->ldpccc->frame_size();
    if (count != expect) {
      throw DimensionError("frame has " + std::to_string(count) + " values, expected " +
                           std::to_string(expect));
    }
    auto f = sigma ? dec->decoder.push_frame({values, count}, *sigma)
                   : dec->decoder.push_llr_frame({values, count});
    if (emitted) *emitted = f ? 1 : 0;
    if (f) export_frame(*f, frame, bits, posterior);
  });
}
}  // namespace

qcldpc_status qcldpc_stream_push(qcldpc_stream_decoder* dec, const double* received, size_t count,
                                 double sigma, int* emitted, qcldpc_stream_frame* frame,
                                 uint8_t* bits, double* posterior) {
  return stream_push(dec, received, count, &sigma, emitted, frame, bits, posterior);
}

qcldpc_status qcldpc_stream_push_llr(qcldpc_stream_decoder* dec, const double* llr, size_t count,
                                     int* emitted, qcldpc_stream_frame* frame, uint8_t* bits,
                                     double* posterior) {
  return stream_push(dec, llr, count, nullptr, emitted, frame, bits, posterior);
}

qcldpc_status qcldpc_stream_flush(qcldpc_stream_decoder* dec, size_t* count) {
  return guarded([&] {
    require(dec, "null argument");
    dec->flushed = dec->decoder.flush();
    if (count) *count = dec->flushed.size();
  });
}

qcldpc_status qcldpc_stream_flushed_frame(const qcldpc_stream_decoder* dec, size_t i,
                                          qcldpc_stream_frame* frame, uint8_t* bits,
                                          double* posterior) {
  return guarded([&] {
    require(dec, "null argument");
    if (i >= dec->flushed.size()) throw DimensionError("flushed frame index out of range");
    export_frame(dec->flushed[i], frame, bits, posterior);
  });
}

qcldpc_status qcldpc_ebn0_to_sigma(double ebn0_db, double rate, double* sigma) {
  return guarded([&] {
    require(sigma, "null argument");
    *sigma = qcldpc::ebn0_to_sigma(ebn0_db, rate);
  });
}

void qcldpc_sim_config_init(qcldpc_sim_config* cfg) {
  if (!cfg) return;
  const qcldpc::SimulationConfig d;
  *cfg = {};
  cfg->code_id = "code";
  cfg->mode = QCLDPC_MODE_BLOCK;
  cfg->max_iter = d.max_iter;
  cfg->processors = d.processors;
  cfg->gamma = d.gamma;
  cfg->stop_errors = d.stop_errors;
  cfg->max_frames = d.max_frames;
  cfg->seed = d.seed;
  cfg->workers = d.workers;
  cfg->early_stop = 0;
}

qcldpc_status qcldpc_simulate(const qcldpc_code* code, const qcldpc_sim_config* cfg,
                              qcldpc_row_fn on_row, void* user) {
  return guarded([&] {
    require(code, "null argument");
    const auto sc = to_config(cfg);
    qcldpc::RowCallback cb;
    if (on_row) {
      cb = [&](const qcldpc::SimulationRow& r) {
        const auto row = to_c_row(r);
        on_row(&row, user);
      };
    }
    if (sc.mode == qcldpc::SimMode::stream) {
      if (!code->code.exponent) throw UnsupportedError("stream mode needs a qc-exponent code to unwrap");
      qcldpc::run_stream_simulation(code->code, sc, cb);
    } else {
      qcldpc::run_block_simulation(code->code, sc, cb);
    }
  });
}

const char* qcldpc_csv_header(void) {
  static const std::string header = [] {
    std::ostringstream os;
    qcldpc::write_csv_header(os);
    std::string s = os.str();
    s.pop_back();
    return s;
  }();
  return header.c_str();
}

qcldpc_status qcldpc_csv_format_row(const qcldpc_sim_row* row, char* buf, size_t cap,
                                    size_t* needed) {
  return guarded([&] {
    require(row, "null argument");
    std::ostringstream os;
    qcldpc::write_csv_row(os, from_c_row(*row));
    const std::string s = os.str();
    if (needed) *needed = s.size() + 1;
    if (!buf || cap < s.size() + 1) throw DimensionError("buffer too small for CSV row");
    std::memcpy(buf, s.c_str(), s.size() + 1);
  });
}

qcldpc_status qcldpc_bench(const qcldpc_code* code, const qcldpc_sim_config* cfg, uint64_t frames,
                           qcldpc_line_fn on_line, void* user) {
  return guarded([&] {
    require(code, "null argument");
    const auto sc = to_config(cfg);
    const auto recs = qcldpc::bench_throughput(code->code, sc, frames);
    if (on_line) {
      for (const auto& r : recs) on_line(qcldpc::bench_json(r).c_str(), user);
    }
  });
}

}  // extern "C"
