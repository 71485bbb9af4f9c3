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

#include "pimgnn/gnn.h"

#include "doctest.h"
#include "pimgnn/error.h"
#include "pimgnn/graph_io.h"
#include "pimgnn/tile_plan.h"
#include "pimgnn/tuner.h"
#include "host_reference.h"
#include "test_util.h"

namespace pimgnn {
namespace {

PimTopology topo_of(std::size_t devices, std::size_t cores, std::size_t threads = 4) {
  PimTopology t;
  t.n_devices = devices;
  t.cores_per_device = cores;
  t.threads_per_core = threads;
  t.pipeline_saturation_threads = std::min<std::size_t>(threads, 16);
  return t;
}

using testing::host_inference;
using testing::same;

TEST_CASE("host gemm cases") {
  const DenseMatrix f(2, 2, ValueKind::kInt32, {1, 2, 3, 4});
  CHECK(gnn::host_gemm(f, DenseMatrix::identity(2, ValueKind::kInt32)) == f);
  const DenseMatrix w(2, 2, ValueKind::kInt32, {0, 1, 1, 0});
  CHECK(gnn::host_gemm(f, w) == DenseMatrix(2, 2, ValueKind::kInt32, {2, 1, 4, 3}));

  const DenseMatrix a = testing::random_dense(8, 8, 3);
  const DenseMatrix b = testing::random_dense(8, 8, 4);
  const DenseMatrix c = gnn::host_gemm(a, b);
  for (std::size_t i = 0; i < 8; ++i) {
    for (std::size_t j = 0; j < 8; ++j) {
      double s = 0;
      for (std::size_t p = 0; p < 8; ++p) s += a.at(i, p) * b.at(p, j);
      CHECK(c.at(i, j) == s);
    }
  }
  CHECK_THROWS_AS(gnn::host_gemm(a, testing::random_dense(7, 2, 1)), DimensionError);
  const DenseMatrix big(1, 2, ValueKind::kInt32, {2147483647, 2147483647});
  const DenseMatrix ones(2, 1, ValueKind::kInt32, {1, 1});
  CHECK_THROWS_AS(gnn::host_gemm(big, ones), OverflowError);
}

TEST_CASE("requantize and activation") {
  DenseMatrix m(1, 4, ValueKind::kInt32, {-17, -16, 15, 33});
  gnn::requantize_activate(m, 4, gnn::Activation::kIdentity);
  CHECK(m == DenseMatrix(1, 4, ValueKind::kInt32, {-2, -1, 0, 2}));
  gnn::requantize_activate(m, 0, gnn::Activation::kReLU);
  CHECK(m == DenseMatrix(1, 4, ValueKind::kInt32, {0, 0, 0, 2}));

  DenseMatrix d(1, 3, ValueKind::kInt32, {-257, 256, 511});
  gnn::descale(d, 256);
  CHECK(d == DenseMatrix(1, 3, ValueKind::kInt32, {-2, 1, 1}));
}

TEST_CASE("identity weights return the aggregation") {
  const PimTopology topo = topo_of(2, 4);
  const SparseMatrix a = testing::random_sparse(32, 0.1, 9);
  const DenseMatrix f = testing::random_dense(32, 6, 2);
  const paf::TilePlan plan = paf::build_plan(a, 6, PafConfig{1, 2, 1}, topo);
  gnn::Layer l;
  l.weights = {DenseMatrix::identity(6, ValueKind::kInt32)};
  l.activation = gnn::Activation::kIdentity;
  const gnn::LayerResult r = gnn::run_layer(plan, f, l, 1, default_upmem_profile());
  CHECK(testing::equals_naive(r.output, testing::naive_product(a, f)));
  CHECK(r.report.t_combine == doctest::Approx(
                                  gnn::gemm_seconds(32, 6, 6, default_upmem_profile())));
  CHECK(r.report.t_total == doctest::Approx(r.report.t_host_pim + r.report.t_kernel +
                                            r.report.t_pim_host + r.report.t_merge +
                                            r.report.t_other + r.report.t_combine));
}

TEST_CASE("ReLU on negative combination output gives zeros") {
  const PimTopology topo = topo_of(1, 2);
  const SparseMatrix a = SparseMatrix::identity(8, ValueKind::kInt32);
  DenseMatrix f(8, 3, ValueKind::kInt32);
  for (double& v : f.values()) v = 5;
  gnn::Layer l;
  DenseMatrix w(3, 3, ValueKind::kInt32);
  for (double& v : w.values()) v = -1;
  l.weights = {w};
  l.activation = gnn::Activation::kReLU;
  const gnn::LayerResult r =
      gnn::run_layer(paf::build_plan(a, 3, PafConfig{}, topo), f, l, 1, default_upmem_profile());
  for (double v : r.output.values()) CHECK(v == 0);
}

TEST_CASE("two-layer toy matches the host pipeline") {
  const PimTopology topo = topo_of(2, 4);
  const SparseMatrix g = generate_power_law({96, 5.0, 2.1, 4});
  const DenseMatrix f = testing::random_dense(96, 8, 5);
  for (GnnModelKind kind : {GnnModelKind::kGCN, GnnModelKind::kGIN, GnnModelKind::kSAGE}) {
    const gnn::GnnModel model = gnn::random_model(kind, 8, 8, 2, ValueKind::kInt32, 17);
    gnn::InferenceOptions opts;
    opts.topo = topo;
    opts.cfg = PafConfig{2, 1, 1, SparseFormat::kCOO, Balance::kEdge, Balance::kEdge,
                         SyncMode::kCoarseLock};
    const gnn::InferenceResult r = gnn::run_inference(model, g, f, opts);
    CHECK(same(r.output, host_inference(model, g, f)));
    CHECK(r.layers.size() == 2);
  }
}

TEST_CASE("GIN MLP layers chain two GEMMs") {
  const gnn::GnnModel m = gnn::random_model(GnnModelKind::kGIN, 4, 6, 3, ValueKind::kInt32, 1, 4, true);
  REQUIRE(m.layers.size() == 3);
  for (const gnn::Layer& l : m.layers) CHECK(l.weights.size() == 2);
  CHECK(m.layers.back().activation == gnn::Activation::kIdentity);
  const SparseMatrix g = generate_power_law({64, 4.0, 2.1, 2});
  const DenseMatrix f = testing::random_dense(64, 4, 1);
  gnn::InferenceOptions opts;
  opts.topo = topo_of(2, 4);
  opts.cfg = PafConfig{1, 2, 1};
  CHECK(same(gnn::run_inference(m, g, f, opts).output, host_inference(m, g, f)));
}

TEST_CASE("zero layers return the features") {
  gnn::GnnModel m;
  const SparseMatrix g = generate_power_law({32, 4.0, 2.1, 2});
  const DenseMatrix f = testing::random_dense(32, 4, 1);
  gnn::InferenceOptions opts;
  opts.topo = topo_of(1, 2);
  const gnn::InferenceResult r = gnn::run_inference(m, g, f, opts);
  CHECK(r.output == f);
  CHECK(r.layers.empty());
}

TEST_CASE("auto config equals tune then run") {
  const PimTopology topo = topo_of(4, 8);
  const SparseMatrix g = generate_power_law({200, 6.0, 2.1, 8});
  const DenseMatrix f = testing::random_dense(200, 16, 3);
  const gnn::GnnModel m = gnn::random_model(GnnModelKind::kGCN, 16, 16, 2, ValueKind::kInt32, 5);
  gnn::InferenceOptions opts;
  opts.topo = topo;
  opts.tuner_profile = tuner::calibrate(topo, opts.profile);
  const gnn::InferenceResult autod = gnn::run_inference(m, g, f, opts);

  const SparseMatrix a = normalize_adjacency(g, m.kind, m.gin_eps, m.scale);
  const PafConfig cfg = tuner::tune(a, 16, topo, *opts.tuner_profile, SparseFormat::kCSR).best;
  CHECK(autod.cfg == cfg);
  opts.cfg = cfg;
  const gnn::InferenceResult manual = gnn::run_inference(m, g, f, opts);
  CHECK(manual.output == autod.output);
  CHECK(manual.total.t_total == autod.total.t_total);
}

TEST_CASE("bytes to PIM grow linearly with layer count") {
  const PimTopology topo = topo_of(2, 4);
  const SparseMatrix g = generate_power_law({128, 6.0, 2.1, 3});
  const DenseMatrix f = testing::random_dense(128, 8, 2);
  gnn::InferenceOptions opts;
  opts.topo = topo;
  opts.cfg = PafConfig{2, 1, 1};
  std::uint64_t one = 0;
  for (std::size_t layers : {1, 2, 3}) {
    const auto m = gnn::random_model(GnnModelKind::kSAGE, 8, 8, layers, ValueKind::kInt32, 3);
    const auto r = gnn::run_inference(m, g, f, opts);
    if (layers == 1) one = r.total.bytes_to_pim;
    CHECK(r.total.bytes_to_pim == layers * one);
  }
}

TEST_CASE("inference validates its inputs") {
  const SparseMatrix g = generate_power_law({32, 4.0, 2.1, 2});
  gnn::InferenceOptions opts;
  opts.topo = topo_of(1, 2);
  const auto m = gnn::random_model(GnnModelKind::kGCN, 4, 4, 1, ValueKind::kInt32, 1);
  CHECK_THROWS_AS(gnn::run_inference(m, g, testing::random_dense(31, 4, 1), opts), DimensionError);
  CHECK_THROWS_AS(gnn::run_inference(m, g, testing::random_dense(32, 5, 1), opts), DimensionError);
  gnn::GnnModel broken = m;
  broken.layers[0].weights.push_back(testing::random_dense(3, 3, 1));
  CHECK_THROWS_AS(broken.validate(), DimensionError);
}

}  // namespace
}  // namespace pimgnn
