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

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>

#include "pimgnn/matrix.h"

namespace pimgnn {

// Matrix Market coordinate files (`general` / `symmetric`, field `integer`,
// `real` or `pattern`). Indices are 1-based on disk. Symmetric files are
// expanded to both triangles; duplicate entries are summed. The result is COO
// sorted by (row, col).
//
// When `kind` is unset, integer and pattern files load as Int32 and real
// files as Float32. Loading real data into an integer kind requires every
// value to be integral.
SparseMatrix load_matrix_market(const std::filesystem::path& path,
                                std::optional<ValueKind> kind = std::nullopt);
SparseMatrix read_matrix_market(std::istream& in, std::optional<ValueKind> kind = std::nullopt);

void write_matrix_market(std::ostream& out, const SparseMatrix& m);
void save_matrix_market(const std::filesystem::path& path, const SparseMatrix& m);

enum class GnnModelKind : std::uint8_t { kGCN, kGIN, kSAGE };

std::string_view to_string(GnnModelKind kind);
GnnModelKind parse_model_kind(std::string_view name);

// Default fixed-point scale for integer adjacency weights.
inline constexpr std::int64_t kDefaultFixedPointScale = 256;

// Builds A' for a GNN model:
//   GCN  - A + I, weight(i,j) = 1/sqrt((d_i+1)(d_j+1)), d = off-diagonal row
//          degree (existing self loops are replaced by the normalized one);
//   SAGE - row mean, weight(i,j) = 1/d_i over all structural entries of row i;
//   GIN  - A with (1 + eps) added to the diagonal.
// Integer kinds store round(weight * scale); Float32 stores the weight.
// Result keeps the format of `m`. Throws DimensionError if `m` is not square.
SparseMatrix normalize_adjacency(const SparseMatrix& m, GnnModelKind model, double eps = 0.0,
                                 std::int64_t scale = kDefaultFixedPointScale);

struct SyntheticGraphSpec {
  std::size_t n_vertices = 4096;
  double avg_degree = 16.0;
  double exponent = 2.1;  // power-law exponent of the expected degree sequence
  std::uint64_t seed = 1;
};

// Undirected power-law graph (Chung-Lu sampling, vertex ids shuffled), pattern
// values 1, no self loops, CSR, Int32.
SparseMatrix generate_power_law(const SyntheticGraphSpec& spec);

// Uniform random sparse matrix, each entry present with probability `density`,
// integer values drawn from [lo, hi]. CSR.
SparseMatrix generate_uniform(std::size_t n_rows, std::size_t n_cols, double density,
                              std::int64_t lo, std::int64_t hi, std::uint64_t seed,
                              ValueKind kind = ValueKind::kInt32);

// Dense matrix with integer entries uniformly drawn from [lo, hi].
DenseMatrix generate_dense(std::size_t n_rows, std::size_t n_cols, std::int64_t lo,
                           std::int64_t hi, std::uint64_t seed,
                           ValueKind kind = ValueKind::kInt32);

}  // namespace pimgnn
