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

#include <filesystem>
#include <string>

#include "pimgnn/gnn.h"
#include "pimgnn/matrix.h"
#include "pimgnn/tile_plan.h"
#include "pimgnn/topology.h"
#include "pimgnn/tuner.h"

// JSON documents exchanged by the command line tool and the C API. Every
// parser throws ParseError on malformed input.
namespace pimgnn::io {

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

std::string topology_to_json(const PimTopology& topo);
PimTopology topology_from_json(const std::string& text);

// {"sp":..,"dp":..,"grp":..,"format":"csr","cluster_balance":"edg",
//  "core_balance":"edg","sync":"lf"}
std::string config_to_json(const PafConfig& cfg);
// Accepts a bare config or a tune result (reads its "best" member).
PafConfig config_from_json(const std::string& text);

// Chosen config plus the candidate table in visiting order.
std::string tune_result_to_json(const tuner::TuneResult& result, std::size_t hidden);

// Geometry and per-core assignment summary.
std::string plan_to_json(const paf::TilePlan& plan, bool cores = true);

// {"shape":[rows, cols], "kind":"int32", "data":[row-major values]}
std::string tensor_to_json(const DenseMatrix& m);
DenseMatrix tensor_from_json(const std::string& text);

// {"model":"gcn","gin_eps":0,"scale":256,
//  "layers":[{"activation":"relu","shift":4,"weights":[tensor, ...]}]}
std::string model_to_json(const gnn::GnnModel& model);
gnn::GnnModel model_from_json(const std::string& text);

}  // namespace pimgnn::io
