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

#include "pimgnn/topology.h"

#include <string>

#include "pimgnn/error.h"

namespace pimgnn {

void PimTopology::validate() const {
  if (n_devices < 1 || cores_per_device < 1 || threads_per_core < 1 ||
      pipeline_saturation_threads < 1) {
    throw ConfigError("topology counts must be >= 1");
  }
  if (threads_per_core > kMaxThreadsPerCore) {
    throw ConfigError("threads_per_core " + std::to_string(threads_per_core) + " exceeds " +
                      std::to_string(kMaxThreadsPerCore));
  }
  if (transfer_chunk != 128 && transfer_chunk != 256) {
    throw ConfigError("transfer_chunk must be 128 or 256 bytes");
  }
}

std::vector<std::size_t> even_split(std::size_t total, std::size_t parts) {
  std::vector<std::size_t> bounds(parts + 1, 0);
  if (parts == 0) return bounds;
  const std::size_t base = total / parts;
  const std::size_t extra = total % parts;
  for (std::size_t p = 0; p < parts; ++p) bounds[p + 1] = bounds[p] + base + (p < extra ? 1 : 0);
  return bounds;
}

Scheme scheme_for(SparseFormat format, Balance balance) {
  if (format == SparseFormat::kCSR) return balance == Balance::kVertex ? Scheme::kRV : Scheme::kRE;
  return balance == Balance::kVertex ? Scheme::kCE : Scheme::kCP;
}

bool scheme_matches_format(Scheme scheme, SparseFormat format) {
  switch (scheme) {
    case Scheme::kRV:
    case Scheme::kRE: return format == SparseFormat::kCSR;
    case Scheme::kCE:
    case Scheme::kCP: return format == SparseFormat::kCOO;
  }
  return false;
}

std::string_view to_string(Balance b) { return b == Balance::kVertex ? "ver" : "edg"; }
std::string_view to_string(SyncMode s) { return s == SyncMode::kCoarseLock ? "cg" : "lf"; }

std::string_view to_string(Scheme s) {
  switch (s) {
    case Scheme::kRV: return "RV";
    case Scheme::kRE: return "RE";
    case Scheme::kCE: return "CE";
    case Scheme::kCP: return "CP";
  }
  return "RV";
}

Balance parse_balance(std::string_view name) {
  if (name == "ver" || name == "vertex") return Balance::kVertex;
  if (name == "edg" || name == "edge") return Balance::kEdge;
  throw PreconditionError("unknown balance '" + std::string(name) + "' (want ver|edg)");
}

SyncMode parse_sync(std::string_view name) {
  if (name == "cg" || name == "lock" || name == "coarse") return SyncMode::kCoarseLock;
  if (name == "lf" || name == "lockfree" || name == "lock-free") return SyncMode::kLockFree;
  throw PreconditionError("unknown sync mode '" + std::string(name) + "' (want cg|lf)");
}

void PafConfig::validate(const PimTopology& topo) const {
  if (sp < 1 || dp < 1) throw ConfigError("sp and dp must be >= 1");
  if (grp != 1 && grp != 2 && grp != 4) throw ConfigError("grp must be 1, 2 or 4");
  if (sp * dp != topo.n_devices * grp) {
    throw ConfigError("sp x dp = " + std::to_string(sp) + " x " + std::to_string(dp) + " = " +
                      std::to_string(sp * dp) + " but the machine has " +
                      std::to_string(topo.n_devices) + " devices x " + std::to_string(grp) +
                      " clusters = " + std::to_string(topo.n_devices * grp) + " clusters");
  }
  if (grp > topo.cores_per_device) {
    throw ConfigError("grp exceeds cores per device");
  }
}

std::string PafConfig::label() const {
  return std::to_string(sp) + "-" + std::to_string(dp) + "-" + std::to_string(grp) + "/" +
         std::string(to_string(format)) + "/" + std::string(to_string(cluster_balance)) + "-" +
         std::string(to_string(core_balance)) + "/" + std::string(to_string(sync));
}

}  // namespace pimgnn
