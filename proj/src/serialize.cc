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

#include "pimgnn/serialize.h"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "pimgnn/error.h"

namespace pimgnn::io {

using nlohmann::ordered_json;

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(0, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("failed writing " + path.string());
}

namespace {

ordered_json parse(const std::string& text, const char* what) {
  try {
    return ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(0, std::string(what) + ": " + e.what());
  }
}

// Runs `f`, mapping JSON type/lookup errors to ParseError.
template <class F>
auto guarded(const char* what, F&& f) {
  try {
    return f();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(0, std::string(what) + ": " + e.what());
  }
}

ordered_json config_json(const PafConfig& c) {
  return {{"sp", c.sp},
          {"dp", c.dp},
          {"grp", c.grp},
          {"format", std::string(to_string(c.format))},
          {"cluster_balance", std::string(to_string(c.cluster_balance))},
          {"core_balance", std::string(to_string(c.core_balance))},
          {"sync", std::string(to_string(c.sync))},
          {"label", c.label()}};
}

PafConfig config_of(const ordered_json& j) {
  PafConfig c;
  c.sp = j.at("sp").get<std::size_t>();
  c.dp = j.at("dp").get<std::size_t>();
  c.grp = j.at("grp").get<std::size_t>();
  c.format = parse_format(j.at("format").get<std::string>());
  c.cluster_balance = parse_balance(j.value("cluster_balance", std::string("edg")));
  c.core_balance = parse_balance(j.value("core_balance", std::string("edg")));
  c.sync = parse_sync(j.value("sync", std::string("lf")));
  return c;
}

ordered_json tensor_json(const DenseMatrix& m) {
  ordered_json data = ordered_json::array();
  for (double v : m.values()) {
    if (is_integer(m.kind())) {
      data.push_back(static_cast<std::int64_t>(v));
    } else {
      data.push_back(v);
    }
  }
  return {{"shape", {m.n_rows(), m.n_cols()}},
          {"kind", std::string(to_string(m.kind()))},
          {"data", std::move(data)}};
}

DenseMatrix tensor_of(const ordered_json& j) {
  const auto& shape = j.at("shape");
  if (!shape.is_array() || shape.size() != 2) throw ParseError(0, "tensor shape must be [rows, cols]");
  const auto rows = shape[0].get<std::size_t>();
  const auto cols = shape[1].get<std::size_t>();
  const ValueKind kind = parse_value_kind(j.value("kind", std::string("int32")));
  const auto& data = j.at("data");
  if (data.size() != rows * cols) {
    throw ParseError(0, "tensor data has " + std::to_string(data.size()) + " values, shape needs " +
                            std::to_string(rows * cols));
  }
  std::vector<double> v;
  v.reserve(data.size());
  for (const auto& x : data) {
    const double d = x.get<double>();
    if (is_integer(kind)) {
      if (d != std::floor(d) || d < static_cast<double>(kind_min(kind)) ||
          d > static_cast<double>(kind_max(kind))) {
        throw ParseError(0, "tensor value " + x.dump() + " is not a valid " +
                                std::string(to_string(kind)));
      }
      v.push_back(d);
    } else {
      v.push_back(narrow(kind, d));
    }
  }
  return DenseMatrix(rows, cols, kind, std::move(v));
}

}  // namespace

std::string topology_to_json(const PimTopology& t) {
  ordered_json j = {{"n_devices", t.n_devices},
                    {"cores_per_device", t.cores_per_device},
                    {"threads_per_core", t.threads_per_core},
                    {"bank_capacity", t.bank_capacity},
                    {"scratchpad_capacity", t.scratchpad_capacity},
                    {"transfer_chunk", t.transfer_chunk},
                    {"pipeline_saturation_threads", t.pipeline_saturation_threads}};
  return j.dump(2);
}

PimTopology topology_from_json(const std::string& text) {
  const ordered_json j = parse(text, "topology");
  PimTopology t = guarded("topology", [&] {
    PimTopology t;
    t.n_devices = j.value("n_devices", t.n_devices);
    t.cores_per_device = j.value("cores_per_device", t.cores_per_device);
    t.threads_per_core = j.value("threads_per_core", t.threads_per_core);
    t.bank_capacity = j.value("bank_capacity", t.bank_capacity);
    t.scratchpad_capacity = j.value("scratchpad_capacity", t.scratchpad_capacity);
    t.transfer_chunk = j.value("transfer_chunk", t.transfer_chunk);
    t.pipeline_saturation_threads =
        j.value("pipeline_saturation_threads", t.pipeline_saturation_threads);
    return t;
  });
  t.validate();
  return t;
}

std::string config_to_json(const PafConfig& cfg) { return config_json(cfg).dump(2); }

PafConfig config_from_json(const std::string& text) {
  const ordered_json j = parse(text, "config");
  return guarded("config", [&] {
    if (j.contains("best")) return config_of(j.at("best"));
    return config_of(j);
  });
}

std::string tune_result_to_json(const tuner::TuneResult& r, std::size_t hidden) {
  ordered_json j;
  j["schema_version"] = 1;
  j["hidden"] = hidden;
  j["best"] = config_json(r.best);
  j["predicted_total"] = r.best_estimate.total();
  ordered_json table = ordered_json::array();
  for (const tuner::TunerEstimate& e : r.candidates) {
    ordered_json row = config_json(e.cfg);
    row["feasible"] = e.feasible;
    if (e.feasible) {
      row["t_host_pim"] = e.t_host_pim;
      row["t_kernel"] = e.t_kernel;
      row["t_pim_host"] = e.t_pim_host;
      row["t_merge"] = e.t_merge;
      row["t_other"] = e.t_other;
      row["t_total"] = e.total();
      row["max_nnz_per_core"] = e.max_nnz_per_core;
      row["max_bytes_to_core"] = e.max_bytes_to_core;
      row["max_bytes_from_core"] = e.max_bytes_from_core;
    } else {
      row["reason"] = e.reason;
    }
    table.push_back(std::move(row));
  }
  j["candidates"] = std::move(table);
  return j.dump(2);
}

std::string plan_to_json(const paf::TilePlan& plan, bool cores) {
  ordered_json j;
  j["schema_version"] = 1;
  j["config"] = config_json(plan.cfg);
  j["n"] = plan.n;
  j["k"] = plan.k;
  j["nnz"] = plan.nnz;
  j["kind"] = std::string(to_string(plan.kind));
  ordered_json slices = ordered_json::array();
  for (const auto& r : plan.slice_ranges) slices.push_back({r.begin, r.end});
  j["slice_ranges"] = std::move(slices);
  ordered_json tiles = ordered_json::array();
  for (const auto& r : plan.tile_cols) tiles.push_back({r.begin, r.end});
  j["tile_cols"] = std::move(tiles);
  ordered_json clusters = ordered_json::array();
  for (const paf::ClusterPlan& c : plan.clusters) {
    const paf::ClusterGeometry& g = c.geometry;
    ordered_json cj = {{"index", g.index},
                       {"device", g.device},
                       {"slot", g.slot},
                       {"slice", g.slice},
                       {"tile_col", g.tile_col},
                       {"cores", {g.cores.begin, g.cores.end}},
                       {"split_rows", c.core_splits.boundaries}};
    if (cores) {
      ordered_json cs = ordered_json::array();
      for (const paf::CorePlan& core : c.cores) {
        cs.push_back({{"core", core.global_core},
                      {"rows", {core.work.row_begin, core.work.row_end}},
                      {"nnz", {core.work.nnz_begin, core.work.nnz_end}},
                      {"bank_bytes", core.bank.total()},
                      {"scratchpad_bytes", core.threads.scratchpad_bytes}});
      }
      cj["core_plans"] = std::move(cs);
    }
    clusters.push_back(std::move(cj));
  }
  j["clusters"] = std::move(clusters);
  return j.dump(2);
}

std::string tensor_to_json(const DenseMatrix& m) { return tensor_json(m).dump(); }

DenseMatrix tensor_from_json(const std::string& text) {
  const ordered_json j = parse(text, "tensor");
  return guarded("tensor", [&] { return tensor_of(j); });
}

std::string model_to_json(const gnn::GnnModel& model) {
  ordered_json j;
  j["model"] = std::string(to_string(model.kind));
  j["gin_eps"] = model.gin_eps;
  j["scale"] = model.scale;
  ordered_json layers = ordered_json::array();
  for (const gnn::Layer& l : model.layers) {
    ordered_json w = ordered_json::array();
    for (const DenseMatrix& m : l.weights) w.push_back(tensor_json(m));
    layers.push_back({{"activation", std::string(gnn::to_string(l.activation))},
                      {"shift", l.shift},
                      {"weights", std::move(w)}});
  }
  j["layers"] = std::move(layers);
  return j.dump();
}

gnn::GnnModel model_from_json(const std::string& text) {
  const ordered_json j = parse(text, "model");
  gnn::GnnModel m = guarded("model", [&] {
    gnn::GnnModel m;
    m.kind = parse_model_kind(j.at("model").get<std::string>());
    m.gin_eps = j.value("gin_eps", 0.0);
    m.scale = j.value("scale", kDefaultFixedPointScale);
    for (const auto& lj : j.at("layers")) {
      gnn::Layer l;
      l.activation = gnn::parse_activation(lj.value("activation", std::string("relu")));
      l.shift = lj.value("shift", 0);
      for (const auto& w : lj.at("weights")) l.weights.push_back(tensor_of(w));
      m.layers.push_back(std::move(l));
    }
    return m;
  });
  m.validate();
  return m;
}

}  // namespace pimgnn::io
