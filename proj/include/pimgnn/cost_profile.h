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

#include <string>
#include <utility>
#include <vector>

namespace pimgnn {

// Measurements keyed by a size (bytes or elements), strictly increasing keys.
class SizeTable {
 public:
  using Point = std::pair<double, double>;

  SizeTable() = default;
  // Throws PreconditionError unless non-empty, keys > 0 strictly increasing
  // and values > 0.
  explicit SizeTable(std::vector<Point> points);

  // Value at the key closest to `size` in log2 space. Ties go to the smaller
  // key; sizes outside the key range clamp to the nearest end.
  double lookup(double size) const;

  const std::vector<Point>& points() const { return points_; }
  bool empty() const { return points_.empty(); }

  friend bool operator==(const SizeTable&, const SizeTable&) = default;

 private:
  std::vector<Point> points_;
};

inline double closest_lookup(const SizeTable& table, double size) { return table.lookup(size); }

// Throughput and bandwidth characteristics of the machine.
//
// Kernel throughput is expressed per nonzero: `fma_core` maps the feature
// chunk width (elements per nonzero) to nonzeros one PIM thread processes per
// second. The kernel model therefore charges 1 / fma_core(chunk) seconds per
// nonzero and divides by the thread speedup.
struct CostProfile {
  SizeTable host_pim_bw;   // bytes per core -> GB/s over all cores
  SizeTable pim_host_bw;   // bytes per core -> GB/s over all cores
  SizeTable host_bw;       // bytes per copied block -> GB/s
  SizeTable fma_core;      // chunk elements -> nonzeros/s, one thread
  SizeTable add_host;      // block elements -> element additions/s
  double host_gemm_ops_per_s = 0.64e12;
  double pim_peak_ops_per_s = 115.93e9;
  // Multiplier on per-nonzero kernel cost for Float32 data.
  double fp32_kernel_penalty = 10.0;

  void validate() const;

  friend bool operator==(const CostProfile&, const CostProfile&) = default;
};

// Smooth UPMEM-like curves sampled densely over wide size ranges. Serves as
// the simulator's ground truth and as the calibration target.
CostProfile default_upmem_profile();

// Profile in which every table holds a single constant entry.
CostProfile constant_profile(double host_pim_gbps, double pim_host_gbps, double host_gbps,
                             double fma_nnz_per_s, double add_per_s);

std::string profile_to_json(const CostProfile& p);
CostProfile profile_from_json(const std::string& text);

}  // namespace pimgnn
