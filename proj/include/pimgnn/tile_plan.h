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
#include <vector>

#include "pimgnn/error.h"
#include "pimgnn/matrix.h"
#include "pimgnn/partition.h"
#include "pimgnn/topology.h"

namespace pimgnn::paf {

struct IndexRange {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t size() const { return end - begin; }
  friend bool operator==(const IndexRange&, const IndexRange&) = default;
};

// Cluster c processes feature tile (c / dp, c % dp) with sparse slice c / dp.
// Clusters of a device are consecutive: device = c / grp.
struct ClusterGeometry {
  std::size_t index = 0;
  std::size_t slice = 0;
  std::size_t tile_col = 0;
  std::size_t device = 0;
  std::size_t slot = 0;          // cluster position inside its device
  IndexRange rows;               // feature tile rows == slice column range
  IndexRange cols;               // feature tile columns == output columns
  IndexRange cores;              // core indices local to the device
};

struct TileGeometry {
  std::size_t n = 0;
  std::size_t k = 0;
  std::vector<IndexRange> slice_ranges;  // sp column ranges over A'
  std::vector<IndexRange> tile_cols;     // dp column ranges over F
  std::vector<ClusterGeometry> clusters;
};

// Validates cfg against the topology and splits A' columns into sp
// near-equal ranges and F columns into dp near-equal ranges.
// Throws ConfigError on divisibility violations, sp > n or dp > k.
TileGeometry plan_tiles(std::size_t n, std::size_t k, const PafConfig& cfg,
                        const PimTopology& topo);

// Slice i keeps the nonzeros whose column lies in ranges[i], columns re-based
// to the range start. All rows are retained. Throws PreconditionError if the
// ranges do not tile [0, a.n_cols()).
std::vector<SparseMatrix> slice_sparse(const SparseMatrix& a, const std::vector<IndexRange>& ranges);

struct CorePlan {
  std::size_t global_core = 0;   // device * cores_per_device + local index
  WorkRange work;
  ThreadPlan threads;
  BankUsage bank;
};

struct ClusterPlan {
  ClusterGeometry geometry;
  std::vector<CorePlan> cores;
  SplitStats core_splits;        // rows shared between cores (host merges)
};

struct TilePlan {
  PafConfig cfg;
  PimTopology topo;
  ValueKind kind = ValueKind::kInt32;
  std::size_t n = 0;
  std::size_t k = 0;
  std::uint64_t nnz = 0;
  std::vector<IndexRange> slice_ranges;
  std::vector<IndexRange> tile_cols;
  std::vector<SparseMatrix> slices;   // in cfg.format
  std::vector<ClusterPlan> clusters;

  std::size_t elem_bytes() const { return pimgnn::elem_bytes(kind); }
};

// Bytes a core's share of a slice occupies in its bank: CSR keeps rowptr
// (rows + 1 entries) plus colind/values, COO keeps rowind/colind/values.
// Indices are 4 bytes.
std::uint64_t sparse_bytes(SparseFormat format, std::size_t rows, std::uint64_t nnz,
                           std::size_t elem_bytes);

// Materializes the three-level plan for A' (any format; converted to
// cfg.format) and hidden size k. Threads per core come from the topology.
TilePlan build_plan(const SparseMatrix& a, std::size_t k, const PafConfig& cfg,
                    const PimTopology& topo);

// Throws CapacityError naming the first core whose bank footprint exceeds
// topo.bank_capacity. `elem_bytes` overrides the plan's element width when
// non-zero.
void validate_capacity(const TilePlan& plan, const PimTopology& topo, std::size_t elem_bytes = 0);

}  // namespace pimgnn::paf
