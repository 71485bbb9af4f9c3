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

#include "pimgnn/c_api.h"

#include <cstring>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <variant>

#include "pimgnn/cost_profile.h"
#include "pimgnn/error.h"
#include "pimgnn/graph_io.h"
#include "pimgnn/simulator.h"
#include "pimgnn/tile_plan.h"
#include "pimgnn/tuner.h"

namespace {

using namespace pimgnn;

class HandleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Session {
  std::mutex mu;
  PimTopology topo;
  std::size_t groups_per_device = 1;
  CostProfile ground;
  CostProfile tuner_profile;
};

struct Graph {
  SparseMatrix a;
};

struct PimGraph {
  std::shared_ptr<Session> session;
  paf::TilePlan plan;
};

using Object =
    std::variant<std::shared_ptr<Session>, std::shared_ptr<Graph>, std::shared_ptr<PimGraph>>;

std::mutex g_registry_mu;
std::unordered_map<pimgnn_handle, Object> g_registry;
pimgnn_handle g_next = 1;

thread_local std::string g_last_error;

int fail(int status, std::string msg) {
  g_last_error = std::move(msg);
  return status;
}

pimgnn_handle put(Object o) {
  std::lock_guard lock(g_registry_mu);
  const pimgnn_handle h = g_next++;
  g_registry.emplace(h, std::move(o));
  return h;
}

template <class T>
std::shared_ptr<T> get(pimgnn_handle h, const char* what) {
  std::lock_guard lock(g_registry_mu);
  auto it = g_registry.find(h);
  if (it == g_registry.end()) {
    throw HandleError(std::string(what) + " handle " + std::to_string(h) +
                            " is not live");
  }
  auto* p = std::get_if<std::shared_ptr<T>>(&it->second);
  if (!p) {
    throw HandleError("handle " + std::to_string(h) + " is not a " + what);
  }
  return *p;
}

ValueKind kind_of(int32_t k) {
  if (k < PIMGNN_INT32 || k > PIMGNN_FP32) {
    throw ConfigError("unknown value kind " + std::to_string(k));
  }
  return static_cast<ValueKind>(k);
}

// Maps library exceptions to status codes.
template <class F>
int guarded(F&& f) {
  try {
    f();
    g_last_error.clear();
    return PIMGNN_OK;
  } catch (const HandleError& e) {
    return fail(PIMGNN_E_HANDLE, e.what());
  } catch (const CapacityError& e) {
    return fail(PIMGNN_E_CAPACITY, e.what());
  } catch (const ScratchpadError& e) {
    return fail(PIMGNN_E_CAPACITY, e.what());
  } catch (const DimensionError& e) {
    return fail(PIMGNN_E_DIMENSION, e.what());
  } catch (const OverflowError& e) {
    return fail(PIMGNN_E_OVERFLOW, e.what());
  } catch (const ParseError& e) {
    return fail(PIMGNN_E_PARSE, e.what());
  } catch (const ConfigError& e) {
    return fail(PIMGNN_E_INVALID, e.what());
  } catch (const PreconditionError& e) {
    return fail(PIMGNN_E_INVALID, e.what());
  } catch (const std::exception& e) {
    return fail(PIMGNN_E_INTERNAL, e.what());
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw ConfigError(what);
}

pimgnn_config to_c(const PafConfig& c) {
  pimgnn_config r;
  r.sp = static_cast<uint32_t>(c.sp);
  r.dp = static_cast<uint32_t>(c.dp);
  r.grp = static_cast<uint32_t>(c.grp);
  r.format = static_cast<uint32_t>(c.format);
  r.cluster_balance = static_cast<uint32_t>(c.cluster_balance);
  r.core_balance = static_cast<uint32_t>(c.core_balance);
  r.sync = static_cast<uint32_t>(c.sync);
  return r;
}

PafConfig from_c(const pimgnn_config& c) {
  require(c.format <= 1 && c.cluster_balance <= 1 && c.core_balance <= 1 && c.sync <= 1,
          "config enum field out of range");
  PafConfig r;
  r.sp = c.sp;
  r.dp = c.dp;
  r.grp = c.grp;
  r.format = static_cast<SparseFormat>(c.format);
  r.cluster_balance = static_cast<Balance>(c.cluster_balance);
  r.core_balance = static_cast<Balance>(c.core_balance);
  r.sync = static_cast<SyncMode>(c.sync);
  return r;
}

template <class T>
void copy_in(const pimgnn_tensor& t, std::size_t col0, DenseMatrix& f) {
  const T* src = static_cast<const T*>(t.data);
  for (std::size_t r = 0; r < t.rows; ++r) {
    for (std::size_t c = 0; c < t.cols; ++c) {
      f.at(r, col0 + c) = static_cast<double>(src[r * t.cols + c]);
    }
  }
}

template <class T>
void copy_out(const DenseMatrix& m, const pimgnn_tensor& t) {
  T* dst = static_cast<T*>(t.data);
  const auto v = m.values();
  for (std::size_t i = 0; i < v.size(); ++i) dst[i] = static_cast<T>(v[i]);
}

}  // namespace

extern "C" {

const char* pimgnn_last_error(void) { return g_last_error.c_str(); }

int pim_init_devices(uint32_t num_devices, uint32_t groups_per_device, pimgnn_handle* session) {
  return guarded([&] {
    require(session != nullptr, "session output pointer is null");
    require(num_devices >= 1, "num_devices must be at least 1");
    require(groups_per_device >= 1, "groups_per_device must be at least 1");
    auto s = std::make_shared<Session>();
    s->topo.n_devices = num_devices;
    require(groups_per_device <= s->topo.cores_per_device,
            "groups_per_device exceeds the cores of a device");
    s->topo.validate();
    s->groups_per_device = groups_per_device;
    s->ground = default_upmem_profile();
    s->tuner_profile = tuner::calibrate(s->topo, s->ground);
    *session = put(std::move(s));
  });
}

int pimgnn_session_clusters(pimgnn_handle session, size_t* clusters) {
  return guarded([&] {
    require(clusters != nullptr, "output pointer is null");
    auto s = get<Session>(session, "session");
    *clusters = s->topo.n_devices * s->groups_per_device;
  });
}

int pimgnn_graph_from_csr(size_t n, const uint64_t* rowptr, const uint32_t* colind,
                          const double* values, int32_t kind, pimgnn_handle* graph) {
  return guarded([&] {
    require(graph != nullptr && rowptr != nullptr, "null pointer argument");
    const std::uint64_t nnz = rowptr[n];
    require(nnz == 0 || (colind != nullptr && values != nullptr), "null pointer argument");
    auto g = std::make_shared<Graph>();
    g->a = SparseMatrix::from_csr(n, n, kind_of(kind), std::vector<std::uint64_t>(rowptr, rowptr + n + 1),
                                  std::vector<std::uint32_t>(colind, colind + nnz),
                                  std::vector<double>(values, values + nnz));
    *graph = put(std::move(g));
  });
}

int pimgnn_graph_from_mtx(const char* path, int32_t kind, pimgnn_handle* graph) {
  return guarded([&] {
    require(graph != nullptr && path != nullptr, "null pointer argument");
    auto g = std::make_shared<Graph>();
    g->a = load_matrix_market(path, kind_of(kind));
    *graph = put(std::move(g));
  });
}

int pimgnn_graph_shape(pimgnn_handle graph, size_t* n, uint64_t* nnz) {
  return guarded([&] {
    auto g = get<Graph>(graph, "graph");
    if (n) *n = g->a.n_rows();
    if (nnz) *nnz = g->a.nnz();
  });
}

int pim_tune(pimgnn_handle session, pimgnn_handle graph, size_t hidden, const char* format,
             pimgnn_config* config) {
  return guarded([&] {
    require(config != nullptr && format != nullptr, "null pointer argument");
    const SparseFormat fmt = parse_format(format);
    auto s = get<Session>(session, "session");
    auto g = get<Graph>(graph, "graph");
    std::lock_guard lock(s->mu);
    *config = to_c(tuner::tune(g->a, hidden, s->topo, s->tuner_profile, fmt).best);
  });
}

int pim_load_graph_pim(pimgnn_handle session, pimgnn_handle graph, const pimgnn_config* config,
                       size_t hidden, pimgnn_handle* graph_pim) {
  return guarded([&] {
    require(config != nullptr && graph_pim != nullptr, "null pointer argument");
    auto s = get<Session>(session, "session");
    auto g = get<Graph>(graph, "graph");
    std::lock_guard lock(s->mu);
    auto p = std::make_shared<PimGraph>();
    p->session = s;
    p->plan = paf::build_plan(g->a, hidden, from_c(*config), s->topo);
    paf::validate_capacity(p->plan, s->topo);
    *graph_pim = put(std::move(p));
  });
}

int pim_col_split(pimgnn_handle graph_pim, size_t* begins, size_t* ends, size_t* count) {
  return guarded([&] {
    require(count != nullptr, "null pointer argument");
    auto p = get<PimGraph>(graph_pim, "loaded graph");
    const auto& tiles = p->plan.tile_cols;
    if (begins || ends) {
      require(*count >= tiles.size(), "output arrays are shorter than the tile count");
      for (std::size_t i = 0; i < tiles.size(); ++i) {
        if (begins) begins[i] = tiles[i].begin;
        if (ends) ends[i] = tiles[i].end;
      }
    }
    *count = tiles.size();
  });
}

int pim_run_aggr(pimgnn_handle graph_pim, const pimgnn_tensor* tiles, size_t n_tiles,
                 pimgnn_tensor* out, double* seconds) {
  return guarded([&] {
    require(tiles != nullptr && out != nullptr, "null pointer argument");
    auto p = get<PimGraph>(graph_pim, "loaded graph");
    std::lock_guard lock(p->session->mu);
    const paf::TilePlan& plan = p->plan;
    if (n_tiles != plan.tile_cols.size()) {
      throw DimensionError("expected " + std::to_string(plan.tile_cols.size()) +
                           " dense tiles, got " + std::to_string(n_tiles));
    }
    DenseMatrix f(plan.n, plan.k, plan.kind);
    for (std::size_t i = 0; i < n_tiles; ++i) {
      const pimgnn_tensor& t = tiles[i];
      const std::size_t width = plan.tile_cols[i].end - plan.tile_cols[i].begin;
      if (t.rows != plan.n || t.cols != width) {
        throw DimensionError("tile " + std::to_string(i) + " must be " + std::to_string(plan.n) +
                             "x" + std::to_string(width) + ", got " + std::to_string(t.rows) +
                             "x" + std::to_string(t.cols));
      }
      if (kind_of(t.kind) != plan.kind) {
        throw PreconditionError("tile " + std::to_string(i) + " kind differs from the graph's");
      }
      require(t.data != nullptr || t.rows * t.cols == 0, "tile data is null");
      const std::size_t col0 = plan.tile_cols[i].begin;
      switch (plan.kind) {
        case ValueKind::kInt32: copy_in<int32_t>(t, col0, f); break;
        case ValueKind::kInt16: copy_in<int16_t>(t, col0, f); break;
        case ValueKind::kInt8: copy_in<int8_t>(t, col0, f); break;
        case ValueKind::kFloat32: copy_in<float>(t, col0, f); break;
      }
    }
    if (out->rows != plan.n || out->cols != plan.k || kind_of(out->kind) != plan.kind) {
      throw DimensionError("output buffer must be " + std::to_string(plan.n) + "x" +
                           std::to_string(plan.k) + " of the graph's kind");
    }
    require(out->data != nullptr || plan.n * plan.k == 0, "output data is null");
    const sim::SimResult r = sim::simulate_aggregation(plan, f, p->session->ground);
    switch (plan.kind) {
      case ValueKind::kInt32: copy_out<int32_t>(r.output, *out); break;
      case ValueKind::kInt16: copy_out<int16_t>(r.output, *out); break;
      case ValueKind::kInt8: copy_out<int8_t>(r.output, *out); break;
      case ValueKind::kFloat32: copy_out<float>(r.output, *out); break;
    }
    if (seconds) *seconds = r.report.t_total;
  });
}

int pimgnn_release(pimgnn_handle handle) {
  return guarded([&] {
    std::lock_guard lock(g_registry_mu);
    if (g_registry.erase(handle) == 0) {
      throw HandleError("handle " + std::to_string(handle) + " is not live");
    }
  });
}

}  // extern "C"
