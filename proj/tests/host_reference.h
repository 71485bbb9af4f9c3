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

// Single-threaded host GNN pipeline on plain int64 vectors. Shares only the
// model definition (normalization, weights) with the library.

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "pimgnn/gnn.h"
#include "pimgnn/graph_io.h"

namespace pimgnn::testing {

inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

struct HostTensor {
  std::size_t rows = 0, cols = 0;
  std::vector<std::int64_t> v;
};

inline HostTensor from_dense(const DenseMatrix& m) {
  HostTensor t{m.n_rows(), m.n_cols(), {}};
  for (double x : m.values()) t.v.push_back(static_cast<std::int64_t>(x));
  return t;
}

inline void check_int32(std::int64_t x) {
  if (x < INT32_MIN || x > INT32_MAX) throw std::range_error("host reference leaves int32");
}

// descale(A' F) then, per weight, (X W) >> shift and the activation.
inline HostTensor host_layer(const SparseMatrix& a_csr, const HostTensor& f,
                             const gnn::Layer& layer, std::int64_t scale) {
  HostTensor agg{a_csr.n_rows(), f.cols, std::vector<std::int64_t>(a_csr.n_rows() * f.cols, 0)};
  for (std::size_t r = 0; r < a_csr.n_rows(); ++r) {
    for (std::uint64_t e = a_csr.rowptr()[r]; e < a_csr.rowptr()[r + 1]; ++e) {
      const auto w = static_cast<std::int64_t>(a_csr.values()[e]);
      const std::size_t c = a_csr.colind()[e];
      for (std::size_t j = 0; j < f.cols; ++j) agg.v[r * f.cols + j] += w * f.v[c * f.cols + j];
    }
  }
  for (auto& x : agg.v) {
    check_int32(x);
    x = floor_div(x, scale);
  }
  HostTensor cur = agg;
  for (const DenseMatrix& w : layer.weights) {
    HostTensor out{cur.rows, w.n_cols(), std::vector<std::int64_t>(cur.rows * w.n_cols(), 0)};
    for (std::size_t i = 0; i < cur.rows; ++i) {
      for (std::size_t j = 0; j < w.n_cols(); ++j) {
        std::int64_t s = 0;
        for (std::size_t p = 0; p < cur.cols; ++p) {
          s += cur.v[i * cur.cols + p] * static_cast<std::int64_t>(w.at(p, j));
        }
        s = floor_div(s, std::int64_t{1} << layer.shift);
        if (layer.activation == gnn::Activation::kReLU && s < 0) s = 0;
        check_int32(s);
        out.v[i * out.cols + j] = s;
      }
    }
    cur = std::move(out);
  }
  return cur;
}

inline HostTensor host_inference(const gnn::GnnModel& model, const SparseMatrix& graph,
                                 const DenseMatrix& f) {
  const SparseMatrix a = normalize_adjacency(graph, model.kind, model.gin_eps, model.scale)
                             .with_format(SparseFormat::kCSR);
  HostTensor cur = from_dense(f);
  for (const gnn::Layer& l : model.layers) cur = host_layer(a, cur, l, model.scale);
  return cur;
}

inline bool same(const DenseMatrix& got, const HostTensor& want) {
  if (got.n_rows() != want.rows || got.n_cols() != want.cols) return false;
  for (std::size_t i = 0; i < want.v.size(); ++i) {
    if (static_cast<std::int64_t>(got.values()[i]) != want.v[i]) return false;
  }
  return true;
}

}  // namespace pimgnn::testing
