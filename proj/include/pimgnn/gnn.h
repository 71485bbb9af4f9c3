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

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string_view>
#include <vector>

#include "pimgnn/cost_profile.h"
#include "pimgnn/graph_io.h"
#include "pimgnn/matrix.h"
#include "pimgnn/report.h"
#include "pimgnn/tile_plan.h"
#include "pimgnn/topology.h"

namespace pimgnn::gnn {

enum class Activation : std::uint8_t { kIdentity, kReLU };

std::string_view to_string(Activation a);
Activation parse_activation(std::string_view name);

// One GNN layer: aggregation followed by a chain of GEMMs, each followed by
// the activation. For integer kinds every GEMM result is requantized by an
// arithmetic right shift of `shift` bits (floor division by 2^shift) before
// narrowing; Float32 results are scaled by 2^-shift.
struct Layer {
  std::vector<DenseMatrix> weights;
  Activation activation = Activation::kReLU;
  int shift = 0;

  std::size_t in_dim() const;
  std::size_t out_dim() const;
};

struct GnnModel {
  GnnModelKind kind = GnnModelKind::kGCN;
  double gin_eps = 0.0;
  std::int64_t scale = kDefaultFixedPointScale;   // integer adjacency fixed point
  std::vector<Layer> layers;

  // Throws DimensionError when weight shapes do not chain.
  void validate() const;
};

// Random model with weights in {-1, 0, 1}, `n_layers` layers of width
// `hidden` after an input of width `in_dim`. Integer kinds requantize with
// `shift` bits per GEMM.
GnnModel random_model(GnnModelKind kind, std::size_t in_dim, std::size_t hidden,
                      std::size_t n_layers, ValueKind value_kind, std::uint64_t seed,
                      int shift = 4, bool gin_mlp = false);

// Exact f * w. Integer kinds accumulate in int64 with overflow checks and
// narrow into f's kind; Float32 accumulates in double.
DenseMatrix host_gemm(const DenseMatrix& f, const DenseMatrix& w);

// Applies shift and activation in place.
void requantize_activate(DenseMatrix& m, int shift, Activation act);

// Divides integer aggregation output by the fixed-point scale (floor); no-op
// for Float32.
void descale(DenseMatrix& m, std::int64_t scale);

// Host GEMM time: 2 * rows * inner * cols / host peak.
double gemm_seconds(std::size_t rows, std::size_t inner, std::size_t cols,
                    const CostProfile& profile);

struct LayerResult {
  DenseMatrix output;
  ExecutionReport report;
};

// activation(host_gemm(descale(aggregate(plan, f)), W...)). The report holds
// the aggregation breakdown plus combination time.
LayerResult run_layer(const paf::TilePlan& plan, const DenseMatrix& f, const Layer& layer,
                      std::int64_t scale, const CostProfile& profile);

struct InferenceOptions {
  std::optional<PafConfig> cfg;              // unset: tune
  SparseFormat format = SparseFormat::kCSR;  // used when tuning
  PimTopology topo;
  CostProfile profile = default_upmem_profile();
  // Profile the tuner predicts with; defaults to `profile`.
  std::optional<CostProfile> tuner_profile;
};

struct InferenceResult {
  DenseMatrix output;
  PafConfig cfg;
  ExecutionReport total;
  std::vector<ExecutionReport> layers;
};

// Normalizes `graph` for the model kind, tunes when no config is given
// (hidden = feature width), plans once per distinct layer input width and
// runs the layers in order. Throws DimensionError when features do not match
// the graph or the model.
InferenceResult run_inference(const GnnModel& model, const SparseMatrix& graph,
                              const DenseMatrix& features, const InferenceOptions& options);

}  // namespace pimgnn::gnn
