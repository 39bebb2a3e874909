#ifndef QCLDPC_QCLDPC_H
#define QCLDPC_QCLDPC_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define QCLDPC_API __declspec(dllexport)
#else
#define QCLDPC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qcldpc_status {
  QCLDPC_OK = 0,
  QCLDPC_ERR_INVALID_ARGUMENT = 1,
  QCLDPC_ERR_PARSE = 2,
  QCLDPC_ERR_IO = 3,
  QCLDPC_ERR_DIMENSION = 4,
  QCLDPC_ERR_UNSUPPORTED = 5,
  QCLDPC_ERR_INTERNAL = 6
} qcldpc_status;

typedef enum qcldpc_format { QCLDPC_FORMAT_ALIST = 0, QCLDPC_FORMAT_QC_EXPONENT = 1 } qcldpc_format;

typedef enum qcldpc_mode { QCLDPC_MODE_BLOCK = 0, QCLDPC_MODE_STREAM = 1 } qcldpc_mode;

typedef struct qcldpc_code qcldpc_code;
typedef struct qcldpc_block_decoder qcldpc_block_decoder;
typedef struct qcldpc_stream_decoder qcldpc_stream_decoder;

QCLDPC_API const char* qcldpc_version(void);
QCLDPC_API const char* qcldpc_status_string(qcldpc_status status);
/* Message of the last failed call on this thread ("" if none). */
QCLDPC_API const char* qcldpc_last_error(void);

/* "alist", "qc", "qc-exponent" */
QCLDPC_API qcldpc_status qcldpc_parse_format(const char* name, qcldpc_format* out);

/* ---- codes ---- */

typedef struct qcldpc_code_info {
  size_t num_vars;
  size_t num_checks;
  size_t num_edges;
  size_t min_row_weight;
  size_t max_row_weight;
  size_t min_col_weight;
  size_t max_col_weight;
  int regular;
  int degenerate;
  double rate_bound;
  int has_exponent;
  size_t block_rows;
  size_t block_cols;
  size_t circulant;
} qcldpc_code_info;

typedef struct qcldpc_ldpccc_info {
  size_t lambda;
  size_t memory;
  size_t period;
  size_t frame_size;
  size_t check_layer_size;
  size_t info_bits_per_frame;
  size_t edges_per_period;
  double rate;
} qcldpc_ldpccc_info;

QCLDPC_API qcldpc_status qcldpc_code_load(const char* path, qcldpc_format format, qcldpc_code** out);
/* Builds a QC code from a row-major J x L shift grid. */
QCLDPC_API qcldpc_status qcldpc_code_from_exponent(size_t rows, size_t cols, size_t circulant,
                                                   const int* shifts, qcldpc_code** out);
QCLDPC_API qcldpc_status qcldpc_code_save(const qcldpc_code* code, const char* path,
                                          qcldpc_format format);
QCLDPC_API void qcldpc_code_free(qcldpc_code* code);
QCLDPC_API qcldpc_status qcldpc_code_get_info(const qcldpc_code* code, qcldpc_code_info* out);
/* Fails with QCLDPC_ERR_UNSUPPORTED unless the code has a shift grid with gcd(J, L) >= 2. */
QCLDPC_API qcldpc_status qcldpc_code_ldpccc_info(const qcldpc_code* code, qcldpc_ldpccc_info* out);

QCLDPC_API qcldpc_status qcldpc_convert(const char* in_path, qcldpc_format in_format,
                                        const char* out_path, qcldpc_format out_format);

/* ---- block decoding ---- */

QCLDPC_API qcldpc_status qcldpc_block_decoder_create(const qcldpc_code* code, size_t gamma,
                                                     qcldpc_block_decoder** out);
QCLDPC_API void qcldpc_block_decoder_free(qcldpc_block_decoder* dec);

/*
 * Decodes gamma received words (lane-major, gamma * N values). Output arrays
 * are optional (NULL to skip): bits and posterior gamma * N, syndrome_ok and
 * iterations gamma entries each.
 */
QCLDPC_API qcldpc_status qcldpc_block_decode(qcldpc_block_decoder* dec, const double* received,
                                             size_t count, double sigma, size_t max_iter,
                                             int early_stop, uint8_t* bits, double* posterior,
                                             uint8_t* syndrome_ok, uint32_t* iterations);
/* Same with channel LLRs instead of samples. */
QCLDPC_API qcldpc_status qcldpc_block_decode_llr(qcldpc_block_decoder* dec, const double* llr,
                                                 size_t count, size_t max_iter, int early_stop,
                                                 uint8_t* bits, double* posterior,
                                                 uint8_t* syndrome_ok, uint32_t* iterations);

/* ---- stream decoding ---- */

typedef struct qcldpc_stream_frame {
  uint64_t index;
  int tail;
} qcldpc_stream_frame;

QCLDPC_API qcldpc_status qcldpc_stream_decoder_create(const qcldpc_code* code, size_t processors,
                                                      size_t gamma, qcldpc_stream_decoder** out);
QCLDPC_API void qcldpc_stream_decoder_free(qcldpc_stream_decoder* dec);
QCLDPC_API uint64_t qcldpc_stream_time_slot(const qcldpc_stream_decoder* dec);

/*
 * Pushes one frame (lane-major, gamma * c values). *emitted is set to 1 when
 * a decoded frame left the pipeline; its bits / posterior (gamma * c each,
 * optional) and header are written then.
 */
QCLDPC_API qcldpc_status qcldpc_stream_push(qcldpc_stream_decoder* dec, const double* received,
                                            size_t count, double sigma, int* emitted,
                                            qcldpc_stream_frame* frame, uint8_t* bits,
                                            double* posterior);
QCLDPC_API qcldpc_status qcldpc_stream_push_llr(qcldpc_stream_decoder* dec, const double* llr,
                                                size_t count, int* emitted,
                                                qcldpc_stream_frame* frame, uint8_t* bits,
                                                double* posterior);
/* Terminates the stream; the remaining frames are then read with
 * qcldpc_stream_flushed_frame(0 .. *count - 1). */
QCLDPC_API qcldpc_status qcldpc_stream_flush(qcldpc_stream_decoder* dec, size_t* count);
QCLDPC_API qcldpc_status qcldpc_stream_flushed_frame(const qcldpc_stream_decoder* dec, size_t i,
                                                     qcldpc_stream_frame* frame, uint8_t* bits,
                                                     double* posterior);

/* ---- channel ---- */

QCLDPC_API qcldpc_status qcldpc_ebn0_to_sigma(double ebn0_db, double rate, double* sigma);

/* ---- simulation ---- */

typedef struct qcldpc_sim_config {
  const char* code_id;
  qcldpc_mode mode;
  const double* ebn0_db;
  size_t num_ebn0;
  size_t max_iter;
  size_t processors;
  size_t gamma;
  uint64_t stop_errors;
  uint64_t max_frames;
  uint64_t seed;
  size_t workers;
  int early_stop;
} qcldpc_sim_config;

typedef struct qcldpc_sim_row {
  const char* code_id;
  qcldpc_mode mode;
  double ebn0_db;
  size_t iters_or_processors;
  size_t gamma;
  uint64_t frames;
  uint64_t bit_errors;
  uint64_t frame_errors;
  double ber;
  double fer;
  double seconds;
  double frames_per_sec;
  double info_bits_per_sec;
  int has_memory;
  size_t memory;
  int capped;
} qcldpc_sim_row;

typedef void (*qcldpc_row_fn)(const qcldpc_sim_row* row, void* user);
typedef void (*qcldpc_line_fn)(const char* line, void* user);

/* Defaults: block mode, 30 iterations, I = 20, gamma 32, 100 errors,
 * 10^6 frames, seed 1, one worker. */
QCLDPC_API void qcldpc_sim_config_init(qcldpc_sim_config* cfg);
QCLDPC_API qcldpc_status qcldpc_simulate(const qcldpc_code* code, const qcldpc_sim_config* cfg,
                                         qcldpc_row_fn on_row, void* user);

/* CSV header line (without newline). */
QCLDPC_API const char* qcldpc_csv_header(void);
/* Formats a row into buf (with trailing newline). *needed receives the
 * length including the terminator; QCLDPC_ERR_DIMENSION when cap is short. */
QCLDPC_API qcldpc_status qcldpc_csv_format_row(const qcldpc_sim_row* row, char* buf, size_t cap,
                                               size_t* needed);

/* One JSON object per line through on_line. */
QCLDPC_API qcldpc_status qcldpc_bench(const qcldpc_code* code, const qcldpc_sim_config* cfg,
                                      uint64_t frames, qcldpc_line_fn on_line, void* user);

#ifdef __cplusplus
}
#endif

#endif
