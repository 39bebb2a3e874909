#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include <fstream>
#include <sstream>

#include "doctest.h"
#include "qcldpc/qcldpc.h"

namespace {

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("qcldpc_capi_" + name);
}

std::string source_path(const std::string& rel) { return std::string(QCLDPC_SOURCE_DIR) + "/" + rel; }

// Code A's shift grid reduced mod 8.
const std::vector<int>& scaled_shifts() {
  static const std::vector<int> s = [] {
    std::ifstream in(source_path("codes/code_a.qc"));
    std::string line;
    std::ostringstream body;
    while (std::getline(in, line)) {
      if (!line.empty() && line[0] != '#') body << line << '\n';
    }
    std::istringstream is(body.str());
    int J, L, p;
    is >> J >> L >> p;
    std::vector<int> out(J * L);
    for (auto& v : out) {
      is >> v;
      v = v < 0 ? -1 : v % 8;
    }
    return out;
  }();
  return s;
}

}  // namespace

TEST_CASE("C API: status strings and format parsing") {
  CHECK(std::string(qcldpc_status_string(QCLDPC_OK)) == "ok");
  CHECK(std::string(qcldpc_version()).size() > 0);
  qcldpc_format f;
  CHECK(qcldpc_parse_format("alist", &f) == QCLDPC_OK);
  CHECK(f == QCLDPC_FORMAT_ALIST);
  CHECK(qcldpc_parse_format("qc-exponent", &f) == QCLDPC_OK);
  CHECK(f == QCLDPC_FORMAT_QC_EXPONENT);
  CHECK(qcldpc_parse_format("png", &f) == QCLDPC_ERR_INVALID_ARGUMENT);
  CHECK(std::string(qcldpc_last_error()).find("png") != std::string::npos);
  CHECK(qcldpc_parse_format(nullptr, &f) == QCLDPC_ERR_INVALID_ARGUMENT);
}

TEST_CASE("C API: loading codes and error codes") {
  qcldpc_code* code = nullptr;
  REQUIRE(qcldpc_code_load(source_path("codes/code_a.qc").c_str(), QCLDPC_FORMAT_QC_EXPONENT, &code) ==
          QCLDPC_OK);
  qcldpc_code_info info;
  REQUIRE(qcldpc_code_get_info(code, &info) == QCLDPC_OK);
  CHECK(info.num_edges == 40512);
  CHECK(info.num_vars == 24 * 422);
  CHECK(info.has_exponent == 1);
  CHECK(info.circulant == 422);
  qcldpc_ldpccc_info cc;
  REQUIRE(qcldpc_code_ldpccc_info(code, &cc) == QCLDPC_OK);
  CHECK(cc.lambda == 4);
  CHECK(cc.memory == 3);
  CHECK(cc.frame_size == 2532);
  CHECK(cc.check_layer_size == 422);
  qcldpc_code_free(code);

  qcldpc_code* missing = nullptr;
  CHECK(qcldpc_code_load("/nonexistent/file.qc", QCLDPC_FORMAT_QC_EXPONENT, &missing) == QCLDPC_ERR_IO);
  CHECK(missing == nullptr);

  const auto bad = temp_file("bad.qc");
  {
    FILE* f = std::fopen(bad.c_str(), "w");
    std::fputs("1 2 3\n0 9\n", f);
    std::fclose(f);
  }
  CHECK(qcldpc_code_load(bad.c_str(), QCLDPC_FORMAT_QC_EXPONENT, &missing) == QCLDPC_ERR_PARSE);
  CHECK(std::string(qcldpc_last_error()).find("line 2") != std::string::npos);
  std::filesystem::remove(bad);

  const int coprime[] = {0, 0, 0, 0, 0, 0};
  qcldpc_code* flat = nullptr;
  REQUIRE(qcldpc_code_from_exponent(2, 3, 4, coprime, &flat) == QCLDPC_OK);
  CHECK(qcldpc_code_ldpccc_info(flat, &cc) == QCLDPC_ERR_UNSUPPORTED);
  qcldpc_stream_decoder* sd = nullptr;
  CHECK(qcldpc_stream_decoder_create(flat, 2, 1, &sd) == QCLDPC_ERR_UNSUPPORTED);
  qcldpc_code_free(flat);

  const int out_of_range[] = {5};
  CHECK(qcldpc_code_from_exponent(1, 1, 3, out_of_range, &flat) == QCLDPC_ERR_INVALID_ARGUMENT);
}

TEST_CASE("C API: block decoding") {
  qcldpc_code* code = nullptr;
  REQUIRE(qcldpc_code_from_exponent(4, 24, 8, scaled_shifts().data(), &code) == QCLDPC_OK);
  qcldpc_block_decoder* dec = nullptr;
  REQUIRE(qcldpc_block_decoder_create(code, 2, &dec) == QCLDPC_OK);
  const std::size_t N = 24 * 8;
  std::vector<double> y(2 * N, 1.0);
  y[3] = -0.2;
  std::vector<uint8_t> bits(2 * N, 7), ok(2);
  std::vector<double> post(2 * N);
  std::vector<uint32_t> iters(2);
  REQUIRE(qcldpc_block_decode(dec, y.data(), y.size(), 0.8, 10, 0, bits.data(), post.data(), ok.data(),
                              iters.data()) == QCLDPC_OK);
  for (auto b : bits) CHECK(b == 0);
  CHECK(ok[0] == 1);
  CHECK(iters[1] == 10);
  CHECK(post[3] > 0);

  CHECK(qcldpc_block_decode(dec, y.data(), N, 0.8, 10, 0, nullptr, nullptr, nullptr, nullptr) ==
        QCLDPC_ERR_DIMENSION);
  CHECK(qcldpc_block_decode(dec, y.data(), y.size(), -1.0, 10, 0, nullptr, nullptr, nullptr, nullptr) ==
        QCLDPC_ERR_INVALID_ARGUMENT);
  std::vector<double> llr(2 * N, 3.0);
  CHECK(qcldpc_block_decode_llr(dec, llr.data(), llr.size(), 1, 1, bits.data(), nullptr, ok.data(),
                                iters.data()) == QCLDPC_OK);
  CHECK(iters[0] == 1);
  qcldpc_block_decoder_free(dec);
  qcldpc_code_free(code);
}

TEST_CASE("C API: stream decoding") {
  qcldpc_code* code = nullptr;
  REQUIRE(qcldpc_code_from_exponent(4, 24, 8, scaled_shifts().data(), &code) == QCLDPC_OK);
  qcldpc_stream_decoder* dec = nullptr;
  REQUIRE(qcldpc_stream_decoder_create(code, 2, 3, &dec) == QCLDPC_OK);
  const std::size_t c = 6 * 8;
  std::vector<double> y(3 * c, 1.0);
  std::vector<uint8_t> bits(3 * c);
  int emitted = 0, total = 0;
  qcldpc_stream_frame hdr{};
  for (int t = 0; t < 10; ++t) {
    REQUIRE(qcldpc_stream_push(dec, y.data(), y.size(), 0.7, &emitted, &hdr, bits.data(), nullptr) ==
            QCLDPC_OK);
    if (t < 7) CHECK(emitted == 0);
    if (emitted) {
      CHECK(hdr.index == uint64_t(total));
      CHECK(hdr.tail == 0);
      ++total;
    }
  }
  CHECK(total == 3);
  CHECK(qcldpc_stream_time_slot(dec) == 10);
  CHECK(qcldpc_stream_push(dec, y.data(), c, 0.7, &emitted, nullptr, nullptr, nullptr) == QCLDPC_ERR_DIMENSION);
  size_t n = 0;
  REQUIRE(qcldpc_stream_flush(dec, &n) == QCLDPC_OK);
  CHECK(n == 7);
  REQUIRE(qcldpc_stream_flushed_frame(dec, 6, &hdr, bits.data(), nullptr) == QCLDPC_OK);
  CHECK(hdr.index == 9);
  CHECK(hdr.tail == 1);
  for (auto b : bits) CHECK(b == 0);
  CHECK(qcldpc_stream_flushed_frame(dec, 7, &hdr, nullptr, nullptr) == QCLDPC_ERR_DIMENSION);
  qcldpc_stream_decoder_free(dec);
  qcldpc_code_free(code);
}

TEST_CASE("C API: simulation rows, CSV and bench lines") {
  qcldpc_code* code = nullptr;
  REQUIRE(qcldpc_code_from_exponent(4, 24, 8, scaled_shifts().data(), &code) == QCLDPC_OK);
  const double points[] = {1.0, 60.0};
  qcldpc_sim_config cfg;
  qcldpc_sim_config_init(&cfg);
  CHECK(cfg.gamma == 32);
  CHECK(cfg.max_iter == 30);
  CHECK(cfg.stop_errors == 100);
  cfg.code_id = "a8";
  cfg.ebn0_db = points;
  cfg.num_ebn0 = 2;
  cfg.max_iter = 4;
  cfg.gamma = 4;
  cfg.stop_errors = 5;
  cfg.max_frames = 64;

  struct Sink {
    std::vector<qcldpc_sim_row> rows;
    std::string csv;
  } sink;
  auto on_row = [](const qcldpc_sim_row* row, void* user) {
    auto& s = *static_cast<Sink*>(user);
    s.rows.push_back(*row);
    s.rows.back().code_id = nullptr;
    char buf[512];
    size_t need = 0;
    CHECK(qcldpc_csv_format_row(row, buf, sizeof buf, &need) == QCLDPC_OK);
    s.csv += buf;
    CHECK(qcldpc_csv_format_row(row, buf, 4, &need) == QCLDPC_ERR_DIMENSION);
    CHECK(need > 4);
  };
  REQUIRE(qcldpc_simulate(code, &cfg, on_row, &sink) == QCLDPC_OK);
  REQUIRE(sink.rows.size() == 2);
  CHECK(sink.rows[0].frame_errors >= 5);
  CHECK(sink.rows[1].frame_errors == 0);
  CHECK(sink.rows[1].capped == 1);
  CHECK(sink.csv.rfind("a8,block,1,4,4,", 0) == 0);
  CHECK(std::string(qcldpc_csv_header()).rfind("code_id,mode,ebn0_db", 0) == 0);

  cfg.mode = QCLDPC_MODE_STREAM;
  cfg.processors = 2;
  sink.rows.clear();
  REQUIRE(qcldpc_simulate(code, &cfg, on_row, &sink) == QCLDPC_OK);
  CHECK(sink.rows[0].has_memory == 1);
  CHECK(sink.rows[0].memory == 3);

  cfg.num_ebn0 = 0;
  CHECK(qcldpc_simulate(code, &cfg, nullptr, nullptr) == QCLDPC_ERR_INVALID_ARGUMENT);

  cfg.num_ebn0 = 1;
  cfg.mode = QCLDPC_MODE_BLOCK;
  std::vector<std::string> lines;
  auto on_line = [](const char* line, void* user) { static_cast<std::vector<std::string>*>(user)->push_back(line); };
  REQUIRE(qcldpc_bench(code, &cfg, 16, on_line, &lines) == QCLDPC_OK);
  CHECK(lines.size() >= 2);
  CHECK(lines[0].find("\"workers\":1") != std::string::npos);
  qcldpc_code_free(code);
}

TEST_CASE("C API: convert round trip") {
  const auto alist = temp_file("a.alist");
  const auto qc = temp_file("a.qc");
  REQUIRE(qcldpc_convert(source_path("codes/code_a.qc").c_str(), QCLDPC_FORMAT_QC_EXPONENT,
                         alist.c_str(), QCLDPC_FORMAT_ALIST) == QCLDPC_OK);
  qcldpc_code* code = nullptr;
  REQUIRE(qcldpc_code_load(alist.c_str(), QCLDPC_FORMAT_ALIST, &code) == QCLDPC_OK);
  qcldpc_code_info info;
  qcldpc_code_get_info(code, &info);
  CHECK(info.num_edges == 40512);
  CHECK(info.has_exponent == 0);
  CHECK(qcldpc_code_save(code, qc.c_str(), QCLDPC_FORMAT_QC_EXPONENT) == QCLDPC_ERR_UNSUPPORTED);
  CHECK(qcldpc_convert(alist.c_str(), QCLDPC_FORMAT_ALIST, qc.c_str(), QCLDPC_FORMAT_QC_EXPONENT) ==
        QCLDPC_ERR_UNSUPPORTED);
  qcldpc_code_free(code);
  std::filesystem::remove(alist);
  std::filesystem::remove(qc);
}
