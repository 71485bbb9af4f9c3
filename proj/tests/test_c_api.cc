/* Copyright 2026 The PimGNN Authors.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "pimgnn/c_api.h"

#include <unistd.h>

#include <filesystem>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "pimgnn/cli.h"
#include "pimgnn/graph_io.h"
#include "pimgnn/serialize.h"
#include "test_util.h"

namespace pimgnn {
namespace {

namespace fs = std::filesystem;

std::string fixture(const char* name) { return std::string(PIMGNN_TEST_DATA) + "/" + name; }

pimgnn_handle session_of(uint32_t devices, uint32_t groups = 1) {
  pimgnn_handle s = 0;
  REQUIRE(pim_init_devices(devices, groups, &s) == PIMGNN_OK);
  return s;
}

pimgnn_handle graph_of(const std::string& path) {
  pimgnn_handle g = 0;
  REQUIRE(pimgnn_graph_from_mtx(path.c_str(), PIMGNN_INT32, &g) == PIMGNN_OK);
  return g;
}

// Splits a row-major int32 matrix into the column tiles a loaded graph wants
// and runs the aggregation.
std::vector<int32_t> run_tiles(pimgnn_handle pim, std::size_t n, std::size_t k,
                               const std::vector<int32_t>& f) {
  size_t count = 0;
  REQUIRE(pim_col_split(pim, nullptr, nullptr, &count) == PIMGNN_OK);
  std::vector<size_t> b(count), e(count);
  REQUIRE(pim_col_split(pim, b.data(), e.data(), &count) == PIMGNN_OK);
  std::vector<std::vector<int32_t>> bufs(count);
  std::vector<pimgnn_tensor> tiles(count);
  for (size_t t = 0; t < count; ++t) {
    const size_t w = e[t] - b[t];
    for (size_t r = 0; r < n; ++r) {
      for (size_t c = b[t]; c < e[t]; ++c) bufs[t].push_back(f[r * k + c]);
    }
    tiles[t] = {bufs[t].data(), n, w, PIMGNN_INT32};
  }
  std::vector<int32_t> out(n * k);
  pimgnn_tensor o{out.data(), n, k, PIMGNN_INT32};
  double seconds = 0;
  REQUIRE(pim_run_aggr(pim, tiles.data(), count, &o, &seconds) == PIMGNN_OK);
  CHECK(seconds > 0);
  return out;
}

TEST_CASE("session sizes") {
  size_t clusters = 0;
  pimgnn_handle s = session_of(32, 2);
  REQUIRE(pimgnn_session_clusters(s, &clusters) == PIMGNN_OK);
  CHECK(clusters == 64);
  pimgnn_handle t = session_of(4, 4);
  REQUIRE(pimgnn_session_clusters(t, &clusters) == PIMGNN_OK);
  CHECK(clusters == 16);
  pimgnn_handle bad = 0;
  CHECK(pim_init_devices(0, 1, &bad) == PIMGNN_E_INVALID);
  CHECK(std::string(pimgnn_last_error()).find("num_devices") != std::string::npos);
  CHECK(pim_init_devices(1, 0, &bad) == PIMGNN_E_INVALID);
  CHECK(pim_init_devices(1, 1, nullptr) == PIMGNN_E_INVALID);
  CHECK(pimgnn_release(s) == PIMGNN_OK);
  CHECK(pimgnn_release(t) == PIMGNN_OK);
}

TEST_CASE("identity adjacency returns the input") {
  const std::size_t n = 12, k = 6;
  std::vector<uint64_t> rowptr(n + 1);
  std::vector<uint32_t> col(n);
  std::vector<double> val(n, 1.0);
  for (std::size_t i = 0; i <= n; ++i) rowptr[i] = i;
  for (std::size_t i = 0; i < n; ++i) col[i] = static_cast<uint32_t>(i);
  pimgnn_handle g = 0;
  REQUIRE(pimgnn_graph_from_csr(n, rowptr.data(), col.data(), val.data(), PIMGNN_INT32, &g) ==
          PIMGNN_OK);
  const pimgnn_handle s = session_of(2);
  pimgnn_config cfg{1, 2, 1, 0, 1, 1, 1};
  pimgnn_handle pim = 0;
  REQUIRE(pim_load_graph_pim(s, g, &cfg, k, &pim) == PIMGNN_OK);
  std::vector<int32_t> f(n * k);
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = static_cast<int32_t>(i) - 30;
  CHECK(run_tiles(pim, n, k, f) == f);
  for (pimgnn_handle h : {pim, g, s}) CHECK(pimgnn_release(h) == PIMGNN_OK);
}

TEST_CASE("tile count and shapes are checked") {
  const pimgnn_handle s = session_of(2);
  const pimgnn_handle g = graph_of(fixture("ring16.mtx"));
  pimgnn_config cfg{1, 2, 1, 1, 1, 1, 1};
  pimgnn_handle pim = 0;
  REQUIRE(pim_load_graph_pim(s, g, &cfg, 4, &pim) == PIMGNN_OK);
  std::vector<int32_t> a(16 * 2), out(16 * 4);
  pimgnn_tensor tiles[2] = {{a.data(), 16, 2, PIMGNN_INT32}, {a.data(), 16, 2, PIMGNN_INT32}};
  pimgnn_tensor o{out.data(), 16, 4, PIMGNN_INT32};
  CHECK(pim_run_aggr(pim, tiles, 1, &o, nullptr) == PIMGNN_E_DIMENSION);
  CHECK(std::string(pimgnn_last_error()).find("expected 2 dense tiles") != std::string::npos);
  tiles[1].cols = 3;
  CHECK(pim_run_aggr(pim, tiles, 2, &o, nullptr) == PIMGNN_E_DIMENSION);
  tiles[1].cols = 2;
  tiles[1].kind = PIMGNN_INT16;
  CHECK(pim_run_aggr(pim, tiles, 2, &o, nullptr) == PIMGNN_E_INVALID);
  tiles[1].kind = PIMGNN_INT32;
  CHECK(pim_run_aggr(pim, tiles, 2, &o, nullptr) == PIMGNN_OK);
  for (pimgnn_handle h : {pim, g, s}) CHECK(pimgnn_release(h) == PIMGNN_OK);
}

TEST_CASE("released and mistyped handles fail cleanly") {
  const pimgnn_handle s = session_of(1);
  const pimgnn_handle g = graph_of(fixture("ring16.mtx"));
  pimgnn_config cfg{};
  CHECK(pim_tune(g, g, 4, "csr", &cfg) == PIMGNN_E_HANDLE);
  CHECK(pimgnn_release(g) == PIMGNN_OK);
  CHECK(pimgnn_release(g) == PIMGNN_E_HANDLE);
  CHECK(pim_tune(s, g, 4, "csr", &cfg) == PIMGNN_E_HANDLE);
  size_t n = 0;
  CHECK(pimgnn_graph_shape(g, &n, nullptr) == PIMGNN_E_HANDLE);
  CHECK(pimgnn_release(987654321) == PIMGNN_E_HANDLE);
  CHECK(pimgnn_release(s) == PIMGNN_OK);
}

TEST_CASE("a loaded graph outlives its session handle") {
  const pimgnn_handle s = session_of(1);
  const pimgnn_handle g = graph_of(fixture("ring16.mtx"));
  pimgnn_config cfg{1, 1, 1, 0, 1, 1, 1};
  pimgnn_handle pim = 0;
  REQUIRE(pim_load_graph_pim(s, g, &cfg, 2, &pim) == PIMGNN_OK);
  CHECK(pimgnn_release(s) == PIMGNN_OK);
  std::vector<int32_t> f(32, 1);
  const std::vector<int32_t> out = run_tiles(pim, 16, 2, f);
  for (int32_t v : out) CHECK(v == 2);
  CHECK(pimgnn_release(pim) == PIMGNN_OK);
  CHECK(pimgnn_release(g) == PIMGNN_OK);
}

TEST_CASE("tune argument checks") {
  const pimgnn_handle s = session_of(4);
  const pimgnn_handle g = graph_of(fixture("powerlaw64.mtx"));
  pimgnn_config cfg{};
  CHECK(pim_tune(s, g, 8, "ell", &cfg) != PIMGNN_OK);
  REQUIRE(pim_tune(s, g, 1, "coo", &cfg) == PIMGNN_OK);
  CHECK(cfg.dp == 1);
  CHECK(cfg.sp == 4);
  CHECK(cfg.format == 1);
  pimgnn_config bad{3, 1, 1, 0, 1, 1, 1};
  pimgnn_handle pim = 0;
  CHECK(pim_load_graph_pim(s, g, &bad, 8, &pim) == PIMGNN_E_INVALID);
  bad = {1, 4, 1, 7, 1, 1, 1};
  CHECK(pim_load_graph_pim(s, g, &bad, 8, &pim) == PIMGNN_E_INVALID);
  for (pimgnn_handle h : {g, s}) CHECK(pimgnn_release(h) == PIMGNN_OK);
}

TEST_CASE("parity with the command line on fixture graphs") {
  const fs::path dir = fs::temp_directory_path() / ("pimgnn_capi_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const std::size_t k = 16;
  for (const char* name : {"ring16.mtx", "powerlaw64.mtx", "powerlaw150.mtx"}) {
    CAPTURE(name);
    const std::string path = fixture(name);
    const SparseMatrix a = load_matrix_market(path);
    const std::size_t n = a.n_rows();

    std::ostringstream out, err;
    REQUIRE(cli::dispatch({"tune", "--graph", path, "--hidden", std::to_string(k), "--devices", "4"},
                          out, err) == 0);
    const PafConfig cli_cfg = io::config_from_json(out.str());

    const pimgnn_handle s = session_of(4);
    const pimgnn_handle g = graph_of(path);
    pimgnn_config cfg{};
    REQUIRE(pim_tune(s, g, k, "csr", &cfg) == PIMGNN_OK);
    CHECK(cfg.sp == cli_cfg.sp);
    CHECK(cfg.dp == cli_cfg.dp);
    CHECK(cfg.grp == cli_cfg.grp);
    CHECK(cfg.cluster_balance == static_cast<uint32_t>(cli_cfg.cluster_balance));
    CHECK(cfg.core_balance == static_cast<uint32_t>(cli_cfg.core_balance));

    const DenseMatrix f = testing::random_dense(n, k, 12);
    const fs::path feats = dir / "f.json", result = dir / "out.json";
    io::write_text_file(feats, io::tensor_to_json(f));
    std::ostringstream out2, err2;
    REQUIRE(cli::dispatch({"run-aggr", "--graph", path, "--hidden", std::to_string(k),
                           "--devices", "4", "--features", feats.string(), "--output-matrix",
                           result.string()},
                          out2, err2) == 0);
    const DenseMatrix cli_out = io::tensor_from_json(io::read_text_file(result));

    pimgnn_handle pim = 0;
    REQUIRE(pim_load_graph_pim(s, g, &cfg, k, &pim) == PIMGNN_OK);
    std::vector<int32_t> buf(n * k);
    for (std::size_t i = 0; i < buf.size(); ++i) buf[i] = static_cast<int32_t>(f.values()[i]);
    const std::vector<int32_t> got = run_tiles(pim, n, k, buf);
    bool equal = true;
    for (std::size_t i = 0; i < got.size(); ++i) equal &= got[i] == cli_out.values()[i];
    CHECK(equal);
    for (pimgnn_handle h : {pim, g, s}) CHECK(pimgnn_release(h) == PIMGNN_OK);
  }
  fs::remove_all(dir);
}

}  // namespace
}  // namespace pimgnn
