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
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "pimgnn/cost_profile.h"
#include "pimgnn/matrix.h"
#include "pimgnn/topology.h"

namespace pimgnn::tuner {

// Microbenchmark sizes.
struct CalibrationGrid {
  std::vector<double> host_pim_bytes;   // 16 sizes, 64 KiB .. 8 MiB
  std::vector<double> pim_host_bytes;   // same
  std::vector<double> host_bytes;       // 9 sizes, 8 B .. 2 KiB
  std::vector<double> fma_chunks;       // 9 element counts, 2 .. 512
  std::vector<double> add_blocks;       // 9 element counts, 2 .. 512

  // Geometric grids; transfer sizes are rounded to whole bytes.
  static CalibrationGrid standard();
  // Throws PreconditionError unless every grid is non-empty and strictly
  // increasing with positive entries.
  void validate() const;
};

// Samples `ground` at every grid point. Scalars are copied. A calibrated
// table reproduces the ground value exactly at each grid point.
CostProfile calibrate(const PimTopology& topo, const CostProfile& ground,
                      const CalibrationGrid& grid = CalibrationGrid::standard());

// Per-graph statistics the predictor works from: row offsets of A' and,
// per sparse-partition count, the row offsets of every column slice.
// Slices are computed on first use and cached.
class GraphStats {
 public:
  explicit GraphStats(const SparseMatrix& a);

  std::size_t n() const { return n_; }
  std::uint64_t nnz() const { return nnz_; }
  ValueKind kind() const { return kind_; }
  // Row offsets of slice `i` out of `sp`.
  const std::vector<std::uint64_t>& slice_rowptr(std::size_t sp, std::size_t i) const;

 private:
  std::size_t n_ = 0;
  std::uint64_t nnz_ = 0;
  ValueKind kind_ = ValueKind::kInt32;
  std::vector<std::uint64_t> rowptr_;
  std::vector<std::uint32_t> colind_;
  mutable std::map<std::size_t, std::vector<std::vector<std::uint64_t>>> slices_;
};

struct TunerEstimate {
  PafConfig cfg;
  double t_host_pim = 0;
  double t_kernel = 0;
  double t_pim_host = 0;
  double t_merge = 0;
  double t_other = 0;
  std::uint64_t max_nnz_per_core = 0;
  std::uint64_t max_bytes_to_core = 0;
  std::uint64_t max_bytes_from_core = 0;
  bool feasible = true;
  std::string reason;   // why the candidate cannot run, when infeasible

  // Sum of the components; +inf for infeasible candidates.
  double total() const {
    if (!feasible) return std::numeric_limits<double>::infinity();
    return t_host_pim + t_kernel + t_pim_host + t_merge + t_other;
  }
};

// Five-step model:
//   Host-PIM = PCores * max-bytes-to-PCore / Host-PIM-BW(closest)
//   Kernel   = max-NNZs-PCore * per_op(chunk = tile columns) / thread scaling
//   PIM-Host = PCores * max-bytes-from-PCore / PIM-Host-BW(closest)
//   Merge    = dp * tile bytes / Host-BW + (sp - 1) * dp * tile elems / ADD-Host
//   Other    = dp * tile bytes / Host-BW (partitioning the feature matrix)
// Per-core maxima come from the within-cluster assignment of each slice.
// Throws ConfigError for geometrically invalid configurations; capacity and
// scratchpad violations produce an infeasible estimate instead.
TunerEstimate predict_time(const GraphStats& stats, std::size_t hidden, const PafConfig& cfg,
                           const CostProfile& profile, const PimTopology& topo);

// Configurations visited by the search, in visiting order:
//   for sp in divisors(n_devices), for grp in {1, 2, 4}:
//     dp = n_devices / sp * grp; skip when dp > hidden or grp > cores/device;
//     for cluster balance in {ver, edg}, for core balance in {ver, edg}.
std::vector<PafConfig> enumerate_candidates(const PimTopology& topo, std::size_t hidden,
                                            SparseFormat format,
                                            SyncMode sync = SyncMode::kLockFree);

struct TuneResult {
  PafConfig best;
  TunerEstimate best_estimate;
  std::vector<TunerEstimate> candidates;   // visiting order
};

// Smallest predicted total; the first candidate wins ties. Throws ConfigError
// when no candidate exists (every dp exceeds hidden) or none is feasible.
TuneResult tune(const SparseMatrix& graph, std::size_t hidden, const PimTopology& topo,
                const CostProfile& profile, SparseFormat format);
TuneResult tune(const GraphStats& stats, std::size_t hidden, const PimTopology& topo,
                const CostProfile& profile, SparseFormat format);

}  // namespace pimgnn::tuner
