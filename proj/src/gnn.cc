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

#include <cmath>
#include <random>
#include <string>

#include "pimgnn/arith.h"
#include "pimgnn/error.h"
#include "pimgnn/simulator.h"
#include "pimgnn/tuner.h"

namespace pimgnn::gnn {

std::string_view to_string(Activation a) {
  return a == Activation::kReLU ? "relu" : "identity";
}

Activation parse_activation(std::string_view name) {
  if (name == "relu") return Activation::kReLU;
  if (name == "identity") return Activation::kIdentity;
  throw ParseError(0, "unknown activation '" + std::string(name) + "'");
}

std::size_t Layer::in_dim() const { return weights.empty() ? 0 : weights.front().n_rows(); }
std::size_t Layer::out_dim() const { return weights.empty() ? 0 : weights.back().n_cols(); }

void GnnModel::validate() const {
  std::size_t prev = 0;
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const Layer& layer = layers[l];
    if (layer.weights.empty()) {
      throw DimensionError("layer " + std::to_string(l) + " has no weights");
    }
    if (layer.shift < 0 || layer.shift > 62) {
      throw PreconditionError("layer " + std::to_string(l) + " shift must be in [0, 62]");
    }
    for (std::size_t w = 0; w < layer.weights.size(); ++w) {
      const DenseMatrix& m = layer.weights[w];
      const std::size_t expect = w == 0 ? prev : layer.weights[w - 1].n_cols();
      if ((l > 0 || w > 0) && m.n_rows() != expect) {
        throw DimensionError("layer " + std::to_string(l) + " weight " + std::to_string(w) +
                             " has " + std::to_string(m.n_rows()) + " rows, expected " +
                             std::to_string(expect));
      }
    }
    prev = layer.out_dim();
  }
}

GnnModel random_model(GnnModelKind kind, std::size_t in_dim, std::size_t hidden,
                      std::size_t n_layers, ValueKind value_kind, std::uint64_t seed, int shift,
                      bool gin_mlp) {
  GnnModel m;
  m.kind = kind;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> dist(-1, 1);
  const auto draw = [&](std::size_t r, std::size_t c) {
    std::vector<double> v(r * c);
    for (double& x : v) x = dist(rng);
    return DenseMatrix(r, c, value_kind, std::move(v));
  };
  std::size_t width = in_dim;
  for (std::size_t l = 0; l < n_layers; ++l) {
    Layer layer;
    layer.shift = is_integer(value_kind) ? shift : 0;
    layer.activation = l + 1 == n_layers ? Activation::kIdentity : Activation::kReLU;
    layer.weights.push_back(draw(width, hidden));
    if (gin_mlp && kind == GnnModelKind::kGIN) layer.weights.push_back(draw(hidden, hidden));
    m.layers.push_back(std::move(layer));
    width = hidden;
  }
  return m;
}

DenseMatrix host_gemm(const DenseMatrix& f, const DenseMatrix& w) {
  if (f.n_cols() != w.n_rows()) {
    throw DimensionError("gemm inner dimensions differ: " + std::to_string(f.n_cols()) + " vs " +
                         std::to_string(w.n_rows()));
  }
  const std::size_t n = f.n_rows(), k = f.n_cols(), m = w.n_cols();
  DenseMatrix out(n, m, f.kind());
  arith::with_accumulator(f.kind(), [&](auto acc_policy) {
    using Acc = decltype(acc_policy);
    std::vector<typename Acc::type> acc(m);
    for (std::size_t i = 0; i < n; ++i) {
      std::fill(acc.begin(), acc.end(), typename Acc::type{});
      const auto fr = f.row(i);
      for (std::size_t p = 0; p < k; ++p) {
        const double a = fr[p];
        if (a == 0) continue;
        const auto wr = w.row(p);
        for (std::size_t j = 0; j < m; ++j) Acc::fma(acc[j], a, wr[j]);
      }
      auto orow = out.row(i);
      for (std::size_t j = 0; j < m; ++j) orow[j] = Acc::store(f.kind(), acc[j]);
    }
  });
  return out;
}

namespace {

// Integer GEMM with requantization before narrowing, so intermediate values
// may exceed the kind's range as long as the shifted result fits.
DenseMatrix gemm_requant(const DenseMatrix& f, const DenseMatrix& w, int shift, Activation act) {
  if (f.n_cols() != w.n_rows()) {
    throw DimensionError("gemm inner dimensions differ: " + std::to_string(f.n_cols()) + " vs " +
                         std::to_string(w.n_rows()));
  }
  const std::size_t n = f.n_rows(), k = f.n_cols(), m = w.n_cols();
  DenseMatrix out(n, m, f.kind());
  arith::with_accumulator(f.kind(), [&](auto acc_policy) {
    using Acc = decltype(acc_policy);
    using T = typename Acc::type;
    std::vector<T> acc(m);
    for (std::size_t i = 0; i < n; ++i) {
      std::fill(acc.begin(), acc.end(), T{});
      const auto fr = f.row(i);
      for (std::size_t p = 0; p < k; ++p) {
        const double a = fr[p];
        if (a == 0) continue;
        const auto wr = w.row(p);
        for (std::size_t j = 0; j < m; ++j) Acc::fma(acc[j], a, wr[j]);
      }
      auto orow = out.row(i);
      for (std::size_t j = 0; j < m; ++j) {
        T v = acc[j];
        if constexpr (std::is_integral_v<T>) {
          v >>= shift;
        } else {
          v = std::ldexp(v, -shift);
        }
        if (act == Activation::kReLU && v < 0) v = 0;
        orow[j] = Acc::store(f.kind(), v);
      }
    }
  });
  return out;
}

}  // namespace

void requantize_activate(DenseMatrix& m, int shift, Activation act) {
  for (double& v : m.values()) {
    if (is_integer(m.kind())) {
      v = static_cast<double>(static_cast<std::int64_t>(v) >> shift);
    } else {
      v = narrow(m.kind(), std::ldexp(v, -shift));
    }
    if (act == Activation::kReLU && v < 0) v = 0;
  }
}

void descale(DenseMatrix& m, std::int64_t scale) {
  if (!is_integer(m.kind()) || scale == 1) return;
  if (scale < 1) throw PreconditionError("fixed-point scale must be >= 1");
  for (double& v : m.values()) {
    const auto x = static_cast<std::int64_t>(v);
    std::int64_t q = x / scale;
    if (x % scale != 0 && x < 0) --q;
    v = static_cast<double>(q);
  }
}

double gemm_seconds(std::size_t rows, std::size_t inner, std::size_t cols,
                    const CostProfile& profile) {
  return 2.0 * static_cast<double>(rows) * static_cast<double>(inner) * static_cast<double>(cols) /
         profile.host_gemm_ops_per_s;
}

LayerResult run_layer(const paf::TilePlan& plan, const DenseMatrix& f, const Layer& layer,
                      std::int64_t scale, const CostProfile& profile) {
  if (!layer.weights.empty() && layer.in_dim() != f.n_cols()) {
    throw DimensionError("layer expects width " + std::to_string(layer.in_dim()) +
                         ", features have " + std::to_string(f.n_cols()));
  }
  sim::SimResult agg = sim::simulate_aggregation(plan, f, profile);
  descale(agg.output, scale);
  LayerResult r{std::move(agg.output), std::move(agg.report)};
  r.report.strategy = "layer";
  for (const DenseMatrix& w : layer.weights) {
    r.report.t_combine += gemm_seconds(r.output.n_rows(), w.n_rows(), w.n_cols(), profile);
    r.output = gemm_requant(r.output, w, layer.shift, layer.activation);
  }
  r.report.finalize();
  return r;
}

InferenceResult run_inference(const GnnModel& model, const SparseMatrix& graph,
                              const DenseMatrix& features, const InferenceOptions& options) {
  model.validate();
  if (features.n_rows() != graph.n_rows()) {
    throw DimensionError("features have " + std::to_string(features.n_rows()) +
                         " rows, graph has " + std::to_string(graph.n_rows()) + " vertices");
  }
  if (!model.layers.empty() && model.layers.front().in_dim() != features.n_cols()) {
    throw DimensionError("model expects input width " +
                         std::to_string(model.layers.front().in_dim()) + ", features have " +
                         std::to_string(features.n_cols()));
  }
  if (features.kind() != graph.kind()) {
    throw PreconditionError("feature kind differs from graph kind");
  }
  const std::int64_t scale = is_integer(graph.kind()) ? model.scale : 1;
  const SparseMatrix a = normalize_adjacency(graph, model.kind, model.gin_eps, scale);

  InferenceResult result;
  result.output = features;
  if (options.cfg) {
    result.cfg = *options.cfg;
  } else {
    const CostProfile& tp = options.tuner_profile ? *options.tuner_profile : options.profile;
    result.cfg = tuner::tune(a, features.n_cols(), options.topo, tp, options.format).best;
  }
  result.total.strategy = "inference";
  result.total.config = result.cfg.label();
  result.total.edges = a.nnz();
  result.total.hidden = features.n_cols();

  std::map<std::size_t, paf::TilePlan> plans;   // one plan per input width
  for (const Layer& layer : model.layers) {
    const std::size_t width = result.output.n_cols();
    auto it = plans.find(width);
    if (it == plans.end()) {
      paf::TilePlan plan = paf::build_plan(a, width, result.cfg, options.topo);
      paf::validate_capacity(plan, options.topo);
      it = plans.emplace(width, std::move(plan)).first;
    }
    LayerResult lr = run_layer(it->second, result.output, layer, scale, options.profile);
    result.output = std::move(lr.output);
    result.total.accumulate(lr.report);
    lr.report.clusters.clear();
    lr.report.cores.clear();
    result.layers.push_back(std::move(lr.report));
  }
  if (result.total.t_total > 0) {
    std::size_t ops_k = 0;
    for (const ExecutionReport& r : result.layers) ops_k += r.hidden;
    result.total.utilization_pct = resource_utilization(result.total, result.total.edges, ops_k,
                                                        options.profile.pim_peak_ops_per_s);
  }
  return result;
}

}  // namespace pimgnn::gnn
