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

#include "pimgnn/tuner.h"

#include <algorithm>
#include <cmath>

#include "pimgnn/error.h"
#include "pimgnn/partition.h"
#include "pimgnn/simulator.h"
#include "pimgnn/tile_plan.h"

namespace pimgnn::tuner {

namespace {

std::vector<double> geometric_grid(double lo, double hi, int points, bool round) {
  std::vector<double> out;
  for (int i = 0; i < points; ++i) {
    const double v = lo * std::pow(hi / lo, static_cast<double>(i) / (points - 1));
    out.push_back(round ? std::round(v) : v);
  }
  out.front() = lo;
  out.back() = hi;
  return out;
}

void check_grid(const std::vector<double>& g, const char* name) {
  if (g.empty()) throw PreconditionError(std::string("calibration grid '") + name + "' is empty");
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!(g[i] > 0) || (i > 0 && !(g[i] > g[i - 1]))) {
      throw PreconditionError(std::string("calibration grid '") + name +
                              "' must be positive and strictly increasing");
    }
  }
}

SizeTable sample(const SizeTable& ground, const std::vector<double>& keys) {
  std::vector<SizeTable::Point> pts;
  for (double k : keys) pts.emplace_back(k, ground.lookup(k));
  return SizeTable(std::move(pts));
}

}  // namespace

CalibrationGrid CalibrationGrid::standard() {
  CalibrationGrid g;
  g.host_pim_bytes = geometric_grid(64.0 * 1024, 8.0 * 1024 * 1024, 16, true);
  g.pim_host_bytes = g.host_pim_bytes;
  g.host_bytes = geometric_grid(8, 2048, 9, true);
  g.fma_chunks = geometric_grid(2, 512, 9, true);
  g.add_blocks = geometric_grid(2, 512, 9, true);
  return g;
}

void CalibrationGrid::validate() const {
  check_grid(host_pim_bytes, "host_pim");
  check_grid(pim_host_bytes, "pim_host");
  check_grid(host_bytes, "host");
  check_grid(fma_chunks, "fma");
  check_grid(add_blocks, "add");
}

CostProfile calibrate(const PimTopology& topo, const CostProfile& ground,
                      const CalibrationGrid& grid) {
  topo.validate();
  ground.validate();
  grid.validate();
  CostProfile p = ground;
  p.host_pim_bw = sample(ground.host_pim_bw, grid.host_pim_bytes);
  p.pim_host_bw = sample(ground.pim_host_bw, grid.pim_host_bytes);
  p.host_bw = sample(ground.host_bw, grid.host_bytes);
  p.fma_core = sample(ground.fma_core, grid.fma_chunks);
  p.add_host = sample(ground.add_host, grid.add_blocks);
  return p;
}

GraphStats::GraphStats(const SparseMatrix& a)
    : n_(a.n_rows()),
      nnz_(a.nnz()),
      kind_(a.kind()),
      rowptr_(a.rowptr().begin(), a.rowptr().end()),
      colind_(a.colind().begin(), a.colind().end()) {
  if (a.n_rows() != a.n_cols()) throw DimensionError("adjacency must be square");
}

const std::vector<std::uint64_t>& GraphStats::slice_rowptr(std::size_t sp, std::size_t i) const {
  if (sp == 0 || i >= sp) throw PreconditionError("slice index out of range");
  auto it = slices_.find(sp);
  if (it == slices_.end()) {
    const auto bounds = even_split(n_, sp);
    std::vector<std::size_t> owner(n_);
    for (std::size_t s = 0; s < sp; ++s) {
      for (std::size_t c = bounds[s]; c < bounds[s + 1]; ++c) owner[c] = s;
    }
    std::vector<std::vector<std::uint64_t>> rp(sp, std::vector<std::uint64_t>(n_ + 1, 0));
    for (std::size_t r = 0; r < n_; ++r) {
      for (std::uint64_t e = rowptr_[r]; e < rowptr_[r + 1]; ++e) ++rp[owner[colind_[e]]][r + 1];
    }
    for (auto& v : rp) {
      for (std::size_t r = 0; r < n_; ++r) v[r + 1] += v[r];
    }
    it = slices_.emplace(sp, std::move(rp)).first;
  }
  return it->second[i];
}

namespace {

struct CoreMaxima {
  std::uint64_t nnz = 0;
  std::uint64_t rows = 0;
  bool bank_ok = true;
  std::string reason;
};

CoreMaxima slice_maxima(const std::vector<std::uint64_t>& rowptr, std::size_t cores,
                        const PafConfig& cfg, std::size_t tile_rows, std::size_t tile_cols,
                        std::size_t eb, const PimTopology& topo) {
  CoreMaxima m;
  const auto ranges = paf::partition_chunk(rowptr, paf::whole(rowptr), cores, cfg.cluster_scheme());
  for (const paf::WorkRange& w : ranges) {
    m.nnz = std::max(m.nnz, w.nnz());
    m.rows = std::max<std::uint64_t>(m.rows, w.rows());
    BankUsage u;
    u.sparse_bytes = paf::sparse_bytes(cfg.format, w.rows(), w.nnz(), eb);
    u.feature_bytes = static_cast<std::uint64_t>(tile_rows) * tile_cols * eb;
    u.output_bytes = static_cast<std::uint64_t>(w.rows()) * tile_cols * eb;
    if (m.bank_ok && u.total() > topo.bank_capacity) {
      m.bank_ok = false;
      m.reason = "bank capacity: a core needs " + std::to_string(u.total()) + " bytes";
    }
  }
  return m;
}

}  // namespace

TunerEstimate predict_time(const GraphStats& stats, std::size_t hidden, const PafConfig& cfg,
                           const CostProfile& profile, const PimTopology& topo) {
  topo.validate();
  cfg.validate(topo);
  if (cfg.dp > hidden) {
    throw ConfigError("dp = " + std::to_string(cfg.dp) + " exceeds hidden size " +
                      std::to_string(hidden));
  }
  TunerEstimate est;
  est.cfg = cfg;
  const std::size_t n = stats.n();
  if (cfg.sp > n) {
    est.feasible = false;
    est.reason = "sp exceeds vertex count";
    return est;
  }
  const std::size_t eb = elem_bytes(stats.kind());
  const auto row_split = even_split(n, cfg.sp);
  const auto col_split = even_split(hidden, cfg.dp);
  const auto core_split = even_split(topo.cores_per_device, cfg.grp);
  const std::size_t max_cols = col_split[1] - col_split[0];
  const std::size_t threads = topo.threads_per_core;

  // Scratchpad: only CP cuts rows between threads; LockFree then needs up
  // to threads - 1 partial slots.
  const std::size_t slots =
      cfg.core_scheme() == Scheme::kCP && cfg.sync == SyncMode::kLockFree ? threads - 1 : 0;
  const std::uint64_t pad = paf::scratchpad_bytes(topo, threads, max_cols, eb, slots);
  if (pad > topo.scratchpad_capacity) {
    est.feasible = false;
    est.reason = "scratchpad: " + std::to_string(pad) + " bytes per core";
    return est;
  }

  std::uint64_t max_from = 0;
  double kernel = 0;
  for (std::size_t i = 0; i < cfg.sp; ++i) {
    const auto& rp = stats.slice_rowptr(cfg.sp, i);
    const std::size_t tile_rows = row_split[i + 1] - row_split[i];
    // Clusters of this slice differ only in their core count (device slot)
    // and tile width.
    std::map<std::size_t, CoreMaxima> by_cores;
    for (std::size_t slot = 0; slot < cfg.grp; ++slot) {
      const std::size_t cores = core_split[slot + 1] - core_split[slot];
      if (by_cores.count(cores)) continue;
      CoreMaxima m = slice_maxima(rp, cores, cfg, tile_rows, max_cols, eb, topo);
      if (!m.bank_ok) {
        est.feasible = false;
        est.reason = m.reason;
        return est;
      }
      by_cores.emplace(cores, m);
    }
    for (const auto& [cores, m] : by_cores) {
      est.max_nnz_per_core = std::max(est.max_nnz_per_core, m.nnz);
      max_from = std::max(max_from, m.rows * max_cols * eb);
      kernel = std::max(kernel, sim::core_kernel_seconds(m.nnz, 0, threads, max_cols,
                                                         stats.kind(), profile, topo));
    }
  }
  est.max_bytes_to_core = static_cast<std::uint64_t>(row_split[1] - row_split[0]) * max_cols * eb;
  est.max_bytes_from_core = max_from;
  const double pcores = static_cast<double>(topo.total_cores());
  if (est.max_bytes_to_core > 0) {
    const double b = static_cast<double>(est.max_bytes_to_core);
    est.t_host_pim = pcores * b / (profile.host_pim_bw.lookup(b) * 1e9);
  }
  if (est.max_bytes_from_core > 0) {
    const double b = static_cast<double>(est.max_bytes_from_core);
    est.t_pim_host = pcores * b / (profile.pim_host_bw.lookup(b) * 1e9);
  }
  est.t_kernel = kernel;
  const double nd = static_cast<double>(n);
  for (std::size_t j = 0; j < cfg.dp; ++j) {
    const double w = static_cast<double>(col_split[j + 1] - col_split[j]);
    const double tile_bytes = nd * w * static_cast<double>(eb);
    const double copy = tile_bytes / (profile.host_bw.lookup(w * static_cast<double>(eb)) * 1e9);
    est.t_merge += copy + static_cast<double>(cfg.sp - 1) * nd * w / profile.add_host.lookup(w);
    est.t_other += copy;
  }
  return est;
}

std::vector<PafConfig> enumerate_candidates(const PimTopology& topo, std::size_t hidden,
                                            SparseFormat format, SyncMode sync) {
  topo.validate();
  std::vector<PafConfig> out;
  const std::size_t d = topo.n_devices;
  for (std::size_t sp = 1; sp <= d; ++sp) {
    if (d % sp != 0) continue;
    for (std::size_t grp : {1, 2, 4}) {
      if (grp > topo.cores_per_device) continue;
      const std::size_t dp = d / sp * grp;
      if (dp > hidden) continue;
      for (Balance cl : {Balance::kVertex, Balance::kEdge}) {
        for (Balance cr : {Balance::kVertex, Balance::kEdge}) {
          PafConfig cfg;
          cfg.sp = sp;
          cfg.dp = dp;
          cfg.grp = grp;
          cfg.format = format;
          cfg.cluster_balance = cl;
          cfg.core_balance = cr;
          cfg.sync = sync;
          out.push_back(cfg);
        }
      }
    }
  }
  return out;
}

TuneResult tune(const GraphStats& stats, std::size_t hidden, const PimTopology& topo,
                const CostProfile& profile, SparseFormat format) {
  profile.validate();
  const auto candidates = enumerate_candidates(topo, hidden, format);
  if (candidates.empty()) {
    throw ConfigError("no valid configuration: every dp exceeds hidden size " +
                      std::to_string(hidden));
  }
  TuneResult result;
  std::size_t best = candidates.size();
  for (const PafConfig& cfg : candidates) {
    result.candidates.push_back(predict_time(stats, hidden, cfg, profile, topo));
    const TunerEstimate& e = result.candidates.back();
    if (!e.feasible) continue;
    if (best == candidates.size() || e.total() < result.candidates[best].total()) {
      best = result.candidates.size() - 1;
    }
  }
  if (best == candidates.size()) {
    throw ConfigError("no feasible configuration: " + result.candidates.front().reason);
  }
  result.best = candidates[best];
  result.best_estimate = result.candidates[best];
  return result;
}

TuneResult tune(const SparseMatrix& graph, std::size_t hidden, const PimTopology& topo,
                const CostProfile& profile, SparseFormat format) {
  return tune(GraphStats(graph), hidden, topo, profile, format);
}

}  // namespace pimgnn::tuner
