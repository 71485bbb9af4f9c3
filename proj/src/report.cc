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

#include "pimgnn/report.h"

#include <algorithm>
#include <cstdio>
#include <ostream>

#include "json.hpp"
#include "pimgnn/error.h"

namespace pimgnn {

void ExecutionReport::finalize() {
  t_total = t_host_pim + t_kernel + t_pim_host + t_merge + t_other + t_combine;
  padding_bytes = padding_to_pim + padding_from_pim;
}

void ExecutionReport::accumulate(const ExecutionReport& o) {
  t_host_pim += o.t_host_pim;
  t_kernel += o.t_kernel;
  t_pim_host += o.t_pim_host;
  t_merge += o.t_merge;
  t_other += o.t_other;
  t_combine += o.t_combine;
  bytes_to_pim += o.bytes_to_pim;
  bytes_from_pim += o.bytes_from_pim;
  padding_to_pim += o.padding_to_pim;
  padding_from_pim += o.padding_from_pim;
  max_nnz_per_core = std::max(max_nnz_per_core, o.max_nnz_per_core);
  max_bytes_to_core = std::max(max_bytes_to_core, o.max_bytes_to_core);
  max_bytes_from_core = std::max(max_bytes_from_core, o.max_bytes_from_core);
  active_cores = std::max(active_cores, o.active_cores);
  idle_cores = std::max(idle_cores, o.idle_cores);
  finalize();
}

double resource_utilization(const ExecutionReport& report, std::uint64_t edges, std::size_t k,
                            double peak_ops_per_s) {
  if (!(report.t_total > 0)) throw PreconditionError("utilization needs a positive total time");
  if (!(peak_ops_per_s > 0)) throw PreconditionError("utilization needs a positive peak");
  const double ops = static_cast<double>(edges) * static_cast<double>(k);
  return 100.0 * (ops / report.t_total) / peak_ops_per_s;
}

std::string report_to_json(const ExecutionReport& r, bool detail) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["schema_version"] = kReportSchemaVersion;
  j["strategy"] = r.strategy;
  j["config"] = r.config;
  j["breakdown"] = {{"host_pim", r.t_host_pim}, {"kernel", r.t_kernel},
                    {"pim_host", r.t_pim_host}, {"merge", r.t_merge},
                    {"other", r.t_other},       {"combine", r.t_combine},
                    {"total", r.t_total}};
  j["bytes"] = {{"to_pim", r.bytes_to_pim},
                {"from_pim", r.bytes_from_pim},
                {"padding_to_pim", r.padding_to_pim},
                {"padding_from_pim", r.padding_from_pim},
                {"padding", r.padding_bytes}};
  j["max_nnz_per_core"] = r.max_nnz_per_core;
  j["max_bytes_to_core"] = r.max_bytes_to_core;
  j["max_bytes_from_core"] = r.max_bytes_from_core;
  j["active_cores"] = r.active_cores;
  j["idle_cores"] = r.idle_cores;
  j["edges"] = r.edges;
  j["hidden"] = r.hidden;
  j["utilization_pct"] = r.utilization_pct;
  if (detail) {
    ordered_json clusters = ordered_json::array();
    for (const ClusterReport& c : r.clusters) {
      clusters.push_back({{"index", c.index},
                          {"device", c.device},
                          {"slice", c.slice},
                          {"tile_col", c.tile_col},
                          {"cores", c.cores},
                          {"nnz", c.nnz},
                          {"split_rows", c.split_rows},
                          {"bytes_to", c.bytes_to},
                          {"bytes_from", c.bytes_from},
                          {"t_kernel", c.t_kernel}});
    }
    j["clusters"] = std::move(clusters);
    ordered_json cores = ordered_json::array();
    for (const CoreReport& c : r.cores) {
      cores.push_back({{"core", c.core},
                       {"cluster", c.cluster},
                       {"device", c.device},
                       {"nnz", c.nnz},
                       {"rows", c.rows},
                       {"bytes_to", c.bytes_to},
                       {"bytes_from", c.bytes_from},
                       {"sync_ops", c.sync_ops},
                       {"t_kernel", c.t_kernel},
                       {"idle", c.idle}});
    }
    j["cores"] = std::move(cores);
  }
  return j.dump(2);
}

namespace {

// Shortest representation that round-trips a double.
std::string fmt_seconds(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void row(std::ostream& os, const std::string& strategy, const char* scope, const std::string& index,
         const char* step, double seconds, std::uint64_t bytes, std::uint64_t padding) {
  os << strategy << ',' << scope << ',' << index << ',' << step << ',' << fmt_seconds(seconds)
     << ',' << bytes << ',' << padding << '\n';
}

}  // namespace

void write_report_csv(std::ostream& os, const ExecutionReport& r, bool header, bool clusters) {
  if (header) os << kReportCsvHeader << '\n';
  const std::string& s = r.strategy;
  row(os, s, "step", "", "host_pim", r.t_host_pim, r.bytes_to_pim, r.padding_to_pim);
  row(os, s, "step", "", "kernel", r.t_kernel, 0, 0);
  row(os, s, "step", "", "pim_host", r.t_pim_host, r.bytes_from_pim, r.padding_from_pim);
  row(os, s, "step", "", "merge", r.t_merge, 0, 0);
  row(os, s, "step", "", "other", r.t_other, 0, 0);
  row(os, s, "step", "", "combine", r.t_combine, 0, 0);
  row(os, s, "step", "", "total", r.t_total, r.bytes_to_pim + r.bytes_from_pim, r.padding_bytes);
  if (!clusters) return;
  for (const ClusterReport& c : r.clusters) {
    const std::string idx = std::to_string(c.index);
    row(os, s, "cluster", idx, "host_pim", 0, c.bytes_to, 0);
    row(os, s, "cluster", idx, "kernel", c.t_kernel, 0, 0);
    row(os, s, "cluster", idx, "pim_host", 0, c.bytes_from, 0);
  }
}

}  // namespace pimgnn
