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

#include "pimgnn/tile_plan.h"

#include <algorithm>
#include <string>

namespace pimgnn::paf {

TileGeometry plan_tiles(std::size_t n, std::size_t k, const PafConfig& cfg,
                        const PimTopology& topo) {
  topo.validate();
  cfg.validate(topo);
  if (cfg.sp > n) {
    throw ConfigError("sp = " + std::to_string(cfg.sp) + " exceeds " + std::to_string(n) +
                      " vertices");
  }
  if (cfg.dp > k) {
    throw ConfigError("dp = " + std::to_string(cfg.dp) + " exceeds hidden size " +
                      std::to_string(k));
  }
  TileGeometry g;
  g.n = n;
  g.k = k;
  const auto row_split = even_split(n, cfg.sp);
  const auto col_split = even_split(k, cfg.dp);
  const auto core_split = even_split(topo.cores_per_device, cfg.grp);
  for (std::size_t i = 0; i < cfg.sp; ++i) g.slice_ranges.push_back({row_split[i], row_split[i + 1]});
  for (std::size_t j = 0; j < cfg.dp; ++j) g.tile_cols.push_back({col_split[j], col_split[j + 1]});
  for (std::size_t c = 0; c < cfg.clusters(); ++c) {
    ClusterGeometry cl;
    cl.index = c;
    cl.slice = c / cfg.dp;
    cl.tile_col = c % cfg.dp;
    cl.device = c / cfg.grp;
    cl.slot = c % cfg.grp;
    cl.rows = g.slice_ranges[cl.slice];
    cl.cols = g.tile_cols[cl.tile_col];
    cl.cores = {core_split[cl.slot], core_split[cl.slot + 1]};
    g.clusters.push_back(cl);
  }
  return g;
}

std::vector<SparseMatrix> slice_sparse(const SparseMatrix& a, const std::vector<IndexRange>& ranges) {
  std::size_t expect = 0;
  for (const IndexRange& r : ranges) {
    if (r.begin != expect || r.end < r.begin) {
      throw PreconditionError("column ranges must tile [0, n_cols) in order");
    }
    expect = r.end;
  }
  if (expect != a.n_cols()) throw PreconditionError("column ranges must tile [0, n_cols)");

  const std::size_t parts = ranges.size();
  std::vector<std::vector<std::uint64_t>> rowptr(parts, std::vector<std::uint64_t>(a.n_rows() + 1, 0));
  std::vector<std::vector<std::uint32_t>> colind(parts);
  std::vector<std::vector<double>> values(parts);
  std::vector<std::size_t> owner(a.n_cols());
  for (std::size_t p = 0; p < parts; ++p) {
    for (std::size_t c = ranges[p].begin; c < ranges[p].end; ++c) owner[c] = p;
  }
  for (std::size_t r = 0; r < a.n_rows(); ++r) {
    for (std::uint64_t e = a.rowptr()[r]; e < a.rowptr()[r + 1]; ++e) {
      const std::size_t c = a.colind()[e];
      const std::size_t p = owner[c];
      colind[p].push_back(static_cast<std::uint32_t>(c - ranges[p].begin));
      values[p].push_back(a.values()[e]);
    }
    for (std::size_t p = 0; p < parts; ++p) rowptr[p][r + 1] = colind[p].size();
  }
  std::vector<SparseMatrix> out;
  out.reserve(parts);
  for (std::size_t p = 0; p < parts; ++p) {
    out.push_back(SparseMatrix::from_csr(a.n_rows(), ranges[p].size(), a.kind(),
                                         std::move(rowptr[p]), std::move(colind[p]),
                                         std::move(values[p]))
                      .with_format(a.format()));
  }
  return out;
}

std::uint64_t sparse_bytes(SparseFormat format, std::size_t rows, std::uint64_t nnz,
                           std::size_t elem_bytes) {
  if (format == SparseFormat::kCSR) return (rows + 1) * 4ull + nnz * (4ull + elem_bytes);
  return nnz * (8ull + elem_bytes);
}

namespace {

BankUsage bank_usage(SparseFormat format, const WorkRange& work, const ClusterGeometry& g,
                     std::size_t elem_bytes) {
  BankUsage u;
  u.sparse_bytes = sparse_bytes(format, work.rows(), work.nnz(), elem_bytes);
  u.feature_bytes = static_cast<std::uint64_t>(g.rows.size()) * g.cols.size() * elem_bytes;
  u.output_bytes = static_cast<std::uint64_t>(work.rows()) * g.cols.size() * elem_bytes;
  return u;
}

}  // namespace

TilePlan build_plan(const SparseMatrix& a, std::size_t k, const PafConfig& cfg,
                    const PimTopology& topo) {
  if (a.n_rows() != a.n_cols()) throw DimensionError("adjacency must be square");
  const TileGeometry geom = plan_tiles(a.n_rows(), k, cfg, topo);

  TilePlan plan;
  plan.cfg = cfg;
  plan.topo = topo;
  plan.kind = a.kind();
  plan.n = a.n_rows();
  plan.k = k;
  plan.nnz = a.nnz();
  plan.slice_ranges = geom.slice_ranges;
  plan.tile_cols = geom.tile_cols;
  plan.slices = slice_sparse(a.with_format(cfg.format), geom.slice_ranges);

  const std::size_t eb = plan.elem_bytes();
  for (const ClusterGeometry& g : geom.clusters) {
    const SparseMatrix& slice = plan.slices[g.slice];
    ClusterPlan cp;
    cp.geometry = g;
    const auto ranges = assign_within_cluster(slice, g.cores.size(), cfg.cluster_scheme());
    cp.core_splits = split_stats(ranges);
    cp.cores.reserve(ranges.size());
    for (std::size_t i = 0; i < ranges.size(); ++i) {
      CorePlan core;
      core.global_core = g.device * topo.cores_per_device + g.cores.begin + i;
      core.work = ranges[i];
      core.threads = assign_within_core(slice, ranges[i], topo.threads_per_core, cfg.core_scheme(),
                                        cfg.sync, g.cols.size(), eb, topo, core.global_core);
      core.bank = bank_usage(cfg.format, ranges[i], g, eb);
      cp.cores.push_back(std::move(core));
    }
    plan.clusters.push_back(std::move(cp));
  }
  return plan;
}

void validate_capacity(const TilePlan& plan, const PimTopology& topo, std::size_t elem_bytes) {
  const std::size_t eb = elem_bytes == 0 ? plan.elem_bytes() : elem_bytes;
  for (const ClusterPlan& cluster : plan.clusters) {
    for (const CorePlan& core : cluster.cores) {
      const BankUsage u = bank_usage(plan.cfg.format, core.work, cluster.geometry, eb);
      if (u.total() > topo.bank_capacity) {
        throw CapacityError(core.global_core, u, topo.bank_capacity,
                            "core " + std::to_string(core.global_core) + " needs " +
                                std::to_string(u.total()) + " bank bytes (sparse " +
                                std::to_string(u.sparse_bytes) + ", features " +
                                std::to_string(u.feature_bytes) + ", output " +
                                std::to_string(u.output_bytes) + "), capacity " +
                                std::to_string(topo.bank_capacity));
      }
    }
  }
}

}  // namespace pimgnn::paf
