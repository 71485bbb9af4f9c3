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

#include "pimgnn/matrix.h"
#include "pimgnn/topology.h"

namespace pimgnn::paf {

// A contiguous piece of work: nonzeros [nnz_begin, nnz_end) in (row, col)
// order and the output rows [row_begin, row_end) the piece produces. The first
// and last rows may be partial; the share flags record that a neighbouring
// piece produces a partial result for the same row.
struct WorkRange {
  std::uint32_t row_begin = 0;
  std::uint32_t row_end = 0;
  std::uint64_t nnz_begin = 0;
  std::uint64_t nnz_end = 0;
  bool shares_first_row = false;
  bool shares_last_row = false;

  std::size_t rows() const { return row_end - row_begin; }
  std::uint64_t nnz() const { return nnz_end - nnz_begin; }

  friend bool operator==(const WorkRange&, const WorkRange&) = default;
};

// All rows and nonzeros of a matrix with the given row offsets.
WorkRange whole(std::span<const std::uint64_t> rowptr);

// Splits `chunk` into `parts` contiguous ranges.
//   RV:     row counts differ by at most one (first pieces larger).
//   RE/CE:  whole rows, greedy: a piece keeps taking rows while doing so does
//           not move its nnz farther from remaining_nnz / remaining_pieces;
//           the last piece takes the rest.
//   CP:     nnz counts differ by at most one; rows crossing a boundary are
//           split and flagged on both sides.
// Empty pieces are placed at the position where they fall and carry no flags.
std::vector<WorkRange> partition_chunk(std::span<const std::uint64_t> rowptr,
                                       const WorkRange& chunk, std::size_t parts, Scheme scheme);

// Per-core ranges of one cluster. Throws PreconditionError when cores == 0
// or when the scheme does not belong to the slice's format.
std::vector<WorkRange> assign_within_cluster(const SparseMatrix& slice, std::size_t cores,
                                             Scheme scheme);

// Rows split between pieces of one partition.
struct SplitStats {
  std::size_t boundaries = 0;          // piece boundaries that cut a row
  std::vector<std::uint32_t> rows;     // distinct split rows, ascending
  std::size_t writes = 0;              // partial-row writes into split rows
};

SplitStats split_stats(std::span<const WorkRange> pieces);

struct ThreadPlan {
  std::vector<WorkRange> threads;
  // CoarseLock: output rows that take the global mutex.
  std::vector<std::uint32_t> locked_rows;
  // LockFree: scratchpad partial-row slots, merged by thread 0.
  std::size_t scratch_slots = 0;
  SplitStats splits;
  std::uint64_t scratchpad_bytes = 0;
};

// Scratchpad footprint of a core: per thread one nonzero fetch buffer of
// `transfer_chunk` bytes plus a feature-row buffer and an output-row
// accumulator of `tile_cols` elements, plus LockFree partial slots.
std::uint64_t scratchpad_bytes(const PimTopology& topo, std::size_t threads,
                               std::size_t tile_cols, std::size_t elem_bytes,
                               std::size_t scratch_slots);

// Thread assignment of one core's range. Throws PreconditionError when
// threads is outside [1, topo.threads_per_core] and ScratchpadError when the
// footprint exceeds topo.scratchpad_capacity.
ThreadPlan assign_within_core(const SparseMatrix& slice, const WorkRange& core,
                              std::size_t threads, Scheme scheme, SyncMode sync,
                              std::size_t tile_cols, std::size_t elem_bytes,
                              const PimTopology& topo, std::size_t core_id = 0);

}  // namespace pimgnn::paf
