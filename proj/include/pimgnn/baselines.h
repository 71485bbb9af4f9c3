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
#include <string_view>

#include "pimgnn/cost_profile.h"
#include "pimgnn/matrix.h"
#include "pimgnn/report.h"
#include "pimgnn/simulator.h"
#include "pimgnn/topology.h"

namespace pimgnn::sim {

// Comparison strategies.
//   GraNDe: feature rows split evenly across devices, hidden columns split
//           across the cores of each device; every active core runs the whole
//           device slice against its columns and returns N output rows.
//   SP1/SP2: one SpMV per feature column on groups of one or two devices;
//           nonzeros split evenly across the group's devices and cores (COO,
//           rows cut at boundaries), lock-free threads.
enum class BaselineKind { kGraNDe, kSP1, kSP2 };

std::string_view to_string(BaselineKind kind);
BaselineKind parse_baseline(std::string_view name);

// Layout that keeps a full N x K feature replica in every bank. Throws
// CapacityError when n * k * elem_bytes exceeds the bank capacity.
void check_replica_capacity(std::size_t n, std::size_t k, ValueKind kind, const PimTopology& topo);

// Cost-only evaluation. Throws CapacityError / ScratchpadError when the
// layout does not fit.
ExecutionReport account_baseline(BaselineKind kind, const SparseMatrix& a, std::size_t k,
                                 const PimTopology& topo, const CostProfile& profile);

SimResult simulate_baseline(BaselineKind kind, const SparseMatrix& a, const DenseMatrix& f,
                            const PimTopology& topo, const CostProfile& profile);

}  // namespace pimgnn::sim
