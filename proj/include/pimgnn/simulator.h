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
#include <span>
#include <vector>

#include "pimgnn/cost_profile.h"
#include "pimgnn/matrix.h"
#include "pimgnn/report.h"
#include "pimgnn/tile_plan.h"

namespace pimgnn::sim {

// One core's share of a parallel transfer.
struct CorePayload {
  std::size_t device = 0;
  std::uint64_t bytes = 0;
};

struct TransferStats {
  std::vector<std::uint64_t> payload;   // unpadded, in input order
  std::uint64_t total_bytes = 0;        // sum of padded payloads
  std::uint64_t padding = 0;            // sum of (device max - payload)
  std::uint64_t max_payload = 0;
  std::size_t cores = 0;
  double seconds = 0;
};

// Parallel transfer: every payload is padded to its device's maximum, and
// the transfer takes cores * max_payload / bw(max_payload) with bw in GB/s.
TransferStats account_transfer(std::span<const CorePayload> payloads, const SizeTable& bw_gbps);

// Feature tiles to every core of every cluster.
TransferStats host_pim_transfer(const paf::TilePlan& plan, const CostProfile& profile);
// Output partials back: rows a core produces times tile columns; a row split
// between cores is counted by each of them.
TransferStats pim_host_transfer(const paf::TilePlan& plan, const CostProfile& profile);

// Seconds per nonzero for one thread at the given chunk width.
double per_op_cost(const CostProfile& profile, std::size_t chunk, ValueKind kind);

// Linear up to the pipeline saturation point, flat beyond it.
double thread_scaling(std::size_t threads, const PimTopology& topo);

// Core time: nnz * per_op / thread_scaling plus serialized synchronization
// operations at per_op each.
double core_kernel_seconds(std::uint64_t nnz, std::uint64_t sync_ops, std::size_t threads,
                           std::size_t chunk, ValueKind kind, const CostProfile& profile,
                           const PimTopology& topo);

// Serialized synchronization operations of a core: CoarseLock commits every
// partial write to a split row under the lock, LockFree merges one scratchpad
// slot per cut boundary on a single thread. Counted on the threads that
// actually run concurrently (min(threads, saturation)); threads beyond the
// pipeline saturation point are time-multiplexed onto the same issue slots.
std::uint64_t core_sync_ops(const SparseMatrix& slice, const paf::WorkRange& work,
                            std::size_t threads, Scheme scheme, SyncMode sync,
                            const PimTopology& topo);

// Output rows produced by one core, at accumulator width. Only one of the
// accumulator vectors is filled: `ints` for integer kinds, `reals` otherwise.
struct CorePartial {
  std::uint32_t row_begin = 0;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t col_offset = 0;           // first output column of the tile
  std::vector<std::int64_t> ints;
  std::vector<double> reals;
  double seconds = 0;
  std::uint64_t sync_ops = 0;
};

// Runs one core's SpMM share against feature tile f[tile_rows, tile_cols].
// `slice` holds the cluster's slice with columns re-based to tile_rows.begin.
CorePartial kernel_execute(const SparseMatrix& slice, const paf::CorePlan& core,
                           const DenseMatrix& f, paf::IndexRange tile_rows,
                           paf::IndexRange tile_cols, SyncMode sync, Scheme thread_scheme,
                           const CostProfile& profile, const PimTopology& topo);

// Output accumulator at accumulator width; partials are added in call order
// and narrowed into `kind` once at the end.
class OutputAccumulator {
 public:
  OutputAccumulator(ValueKind kind, std::size_t n, std::size_t k);
  // Throws DimensionError when the partial does not fit.
  void add(const CorePartial& p);
  DenseMatrix finish() const;

 private:
  ValueKind kind_;
  std::size_t n_, k_;
  std::vector<std::int64_t> ints_;
  std::vector<double> reals_;
};

struct MergeResult {
  DenseMatrix output;
  double seconds = 0;
};

// Host merge time for the plan: dp tile copies plus (sp - 1) * dp tile
// reductions, plus one row reduction per core boundary that cuts a row.
double merge_seconds(const paf::TilePlan& plan, const CostProfile& profile);

// Sums `partials` into an n x k matrix of `kind` in the order given.
MergeResult merge(std::span<const CorePartial> partials, const paf::TilePlan& plan,
                  const CostProfile& profile);

// Dense feature partitioning on the host before the transfer.
double other_seconds(const paf::TilePlan& plan, const CostProfile& profile);

// Cost-only evaluation of a plan; identical report to simulate_aggregation.
ExecutionReport account_aggregation(const paf::TilePlan& plan, const CostProfile& profile);

struct SimResult {
  DenseMatrix output;
  ExecutionReport report;
};

// Executes the planned SpMM. Throws DimensionError when f is not n x k,
// PreconditionError when its kind differs from the plan's, CapacityError when
// a bank overflows.
SimResult simulate_aggregation(const paf::TilePlan& plan, const DenseMatrix& f,
                               const CostProfile& profile);

}  // namespace pimgnn::sim
