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
#include <string>
#include <string_view>
#include <vector>

#include "pimgnn/matrix.h"

namespace pimgnn {

inline constexpr std::size_t kMaxThreadsPerCore = 24;

// Static shape of a near-bank PIM machine: devices of cores, one DRAM bank and
// one scratchpad per core, multithreaded cores. How cores of a device are
// grouped into clusters is a property of the PaF configuration (`grp`), not
// of the machine, so the topology stores cores per device.
struct PimTopology {
  std::size_t n_devices = 32;
  std::size_t cores_per_device = 64;
  std::size_t threads_per_core = 16;
  std::uint64_t bank_capacity = 64ull << 20;
  std::uint64_t scratchpad_capacity = 64ull << 10;
  std::uint64_t transfer_chunk = 256;
  std::size_t pipeline_saturation_threads = 16;

  // Throws ConfigError on violated invariants.
  void validate() const;

  std::size_t total_cores() const { return n_devices * cores_per_device; }

  friend bool operator==(const PimTopology&, const PimTopology&) = default;
};

// Boundaries of `parts` near-equal pieces of [0, total): the first
// `total % parts` pieces are one larger. Result has parts + 1 entries.
std::vector<std::size_t> even_split(std::size_t total, std::size_t parts);

// Load balance choice at one level of the hierarchy ('ver' / 'edg').
enum class Balance : std::uint8_t { kVertex, kEdge };

enum class SyncMode : std::uint8_t { kCoarseLock, kLockFree };

// Concrete partitioning scheme, determined by format and balance choice:
//   CSR ver -> RV (equal rows)          CSR edg -> RE (equal nnz, whole rows)
//   COO ver -> CE (equal nnz, whole rows)  COO edg -> CP (equal nnz, rows split)
enum class Scheme : std::uint8_t { kRV, kRE, kCE, kCP };

Scheme scheme_for(SparseFormat format, Balance balance);
bool scheme_matches_format(Scheme scheme, SparseFormat format);

std::string_view to_string(Balance b);
std::string_view to_string(SyncMode s);
std::string_view to_string(Scheme s);
Balance parse_balance(std::string_view name);
SyncMode parse_sync(std::string_view name);

struct PafConfig {
  std::size_t sp = 1;   // sparse partitions
  std::size_t dp = 1;   // dense partitions
  std::size_t grp = 1;  // clusters per device
  SparseFormat format = SparseFormat::kCSR;
  Balance cluster_balance = Balance::kEdge;
  Balance core_balance = Balance::kEdge;
  SyncMode sync = SyncMode::kLockFree;

  std::size_t clusters() const { return sp * dp; }
  Scheme cluster_scheme() const { return scheme_for(format, cluster_balance); }
  Scheme core_scheme() const { return scheme_for(format, core_balance); }

  // sp * dp == n_devices * grp, grp in {1, 2, 4}, grp <= cores_per_device.
  void validate(const PimTopology& topo) const;

  // Compact label such as "1-32-1/csr/edg-edg/lf".
  std::string label() const;

  friend bool operator==(const PafConfig&, const PafConfig&) = default;
};

}  // namespace pimgnn
