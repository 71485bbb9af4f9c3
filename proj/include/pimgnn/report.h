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
#include <iosfwd>
#include <string>
#include <vector>

namespace pimgnn {

inline constexpr int kReportSchemaVersion = 1;

struct CoreReport {
  std::size_t core = 0;       // global core index
  std::size_t cluster = 0;
  std::size_t device = 0;
  std::uint64_t nnz = 0;
  std::uint64_t rows = 0;
  std::uint64_t bytes_to = 0;     // unpadded payload
  std::uint64_t bytes_from = 0;
  std::uint64_t sync_ops = 0;
  double t_kernel = 0;
  bool idle = false;
};

struct ClusterReport {
  std::size_t index = 0;
  std::size_t device = 0;
  std::size_t slice = 0;
  std::size_t tile_col = 0;
  std::size_t cores = 0;
  std::uint64_t nnz = 0;
  std::uint64_t split_rows = 0;   // rows cut between cores of the cluster
  std::uint64_t bytes_to = 0;
  std::uint64_t bytes_from = 0;
  double t_kernel = 0;            // max over the cluster's cores
};

// Cost breakdown of one aggregation (or a sum of several). Times are seconds,
// byte counts include zero padding unless named otherwise.
struct ExecutionReport {
  std::string strategy;           // "pygim", "grande", "sp1", "sp2", "layer", ...
  std::string config;

  double t_host_pim = 0;
  double t_kernel = 0;
  double t_pim_host = 0;
  double t_merge = 0;
  double t_other = 0;
  double t_combine = 0;           // host GEMM, inference only
  double t_total = 0;

  std::uint64_t bytes_to_pim = 0;
  std::uint64_t bytes_from_pim = 0;
  std::uint64_t padding_to_pim = 0;
  std::uint64_t padding_from_pim = 0;
  std::uint64_t padding_bytes = 0;

  std::uint64_t max_nnz_per_core = 0;
  std::uint64_t max_bytes_to_core = 0;
  std::uint64_t max_bytes_from_core = 0;
  std::size_t active_cores = 0;
  std::size_t idle_cores = 0;

  std::uint64_t edges = 0;
  std::size_t hidden = 0;
  double utilization_pct = 0;

  std::vector<ClusterReport> clusters;
  std::vector<CoreReport> cores;

  // Recomputes t_total and padding_bytes from their components.
  void finalize();

  // Adds another report's times and byte counts. Maxima take the larger
  // value; sub-reports are not merged.
  void accumulate(const ExecutionReport& other);
};

// 100 * (edges * k / t_total) / peak. Throws PreconditionError when t_total or
// peak is not positive.
double resource_utilization(const ExecutionReport& report, std::uint64_t edges, std::size_t k,
                            double peak_ops_per_s);

// `detail` includes per-cluster and per-core sub-reports.
std::string report_to_json(const ExecutionReport& report, bool detail = true);

// Fixed columns: strategy,scope,index,step,seconds,bytes,padding_bytes.
// One row per breakdown step, then rows per cluster.
inline constexpr const char* kReportCsvHeader =
    "strategy,scope,index,step,seconds,bytes,padding_bytes";
void write_report_csv(std::ostream& os, const ExecutionReport& report, bool header = true,
                      bool clusters = true);

}  // namespace pimgnn
