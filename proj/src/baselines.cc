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

#include "pimgnn/baselines.h"

#include <algorithm>
#include <string>

#include "pimgnn/error.h"
#include "pimgnn/partition.h"
#include "pimgnn/tile_plan.h"

namespace pimgnn::sim {

std::string_view to_string(BaselineKind kind) {
  switch (kind) {
    case BaselineKind::kGraNDe: return "grande";
    case BaselineKind::kSP1: return "sp1";
    case BaselineKind::kSP2: return "sp2";
  }
  return "?";
}

BaselineKind parse_baseline(std::string_view name) {
  if (name == "grande") return BaselineKind::kGraNDe;
  if (name == "sp1") return BaselineKind::kSP1;
  if (name == "sp2") return BaselineKind::kSP2;
  throw ConfigError("unknown baseline '" + std::string(name) + "' (expected grande, sp1, sp2)");
}

void check_replica_capacity(std::size_t n, std::size_t k, ValueKind kind, const PimTopology& topo) {
  BankUsage u;
  u.feature_bytes = static_cast<std::uint64_t>(n) * k * elem_bytes(kind);
  if (u.total() > topo.bank_capacity) {
    throw CapacityError(0, u, topo.bank_capacity,
                        "full feature replica of " + std::to_string(n) + "x" + std::to_string(k) +
                            " " + std::string(to_string(kind)) + " needs " +
                            std::to_string(u.total()) + " bytes per bank, capacity " +
                            std::to_string(topo.bank_capacity));
  }
}

namespace {

struct BaselineCore {
  std::size_t device = 0;
  std::size_t cluster = 0;        // device (GraNDe) or device group (SP)
  std::size_t slice = 0;
  paf::IndexRange tile_rows;
  paf::IndexRange cols;
  paf::CorePlan plan;
  std::uint64_t sync_ops = 0;
  bool idle = false;
};

struct Layout {
  BaselineKind kind;
  std::string label;
  ValueKind value_kind;
  std::size_t n = 0, k = 0;
  std::uint64_t nnz = 0;
  Scheme thread_scheme = Scheme::kRE;
  std::vector<SparseMatrix> slices;
  std::vector<BaselineCore> cores;
  std::size_t clusters = 0;
  std::size_t devices_per_group = 1;
  std::uint64_t group_split_rows = 0;   // SP: rows cut inside one group
};

void check_bank(const BankUsage& u, std::size_t core, const PimTopology& topo,
                std::string_view strategy) {
  if (u.total() <= topo.bank_capacity) return;
  throw CapacityError(core, u, topo.bank_capacity,
                      std::string(strategy) + ": core " + std::to_string(core) + " needs " +
                          std::to_string(u.total()) + " bank bytes (sparse " +
                          std::to_string(u.sparse_bytes) + ", features " +
                          std::to_string(u.feature_bytes) + ", output " +
                          std::to_string(u.output_bytes) + "), capacity " +
                          std::to_string(topo.bank_capacity));
}

Layout grande_layout(const SparseMatrix& a, std::size_t k, const PimTopology& topo) {
  Layout l;
  l.kind = BaselineKind::kGraNDe;
  l.label = "grande";
  l.value_kind = a.kind();
  l.n = a.n_rows();
  l.k = k;
  l.nnz = a.nnz();
  l.thread_scheme = Scheme::kRE;
  l.clusters = topo.n_devices;
  const std::size_t eb = elem_bytes(a.kind());

  const auto row_split = even_split(a.n_cols(), topo.n_devices);
  std::vector<paf::IndexRange> ranges;
  for (std::size_t d = 0; d < topo.n_devices; ++d) ranges.push_back({row_split[d], row_split[d + 1]});
  l.slices = paf::slice_sparse(a.with_format(SparseFormat::kCSR), ranges);

  const std::size_t active = std::min(k, topo.cores_per_device);
  const auto col_split = even_split(k, active);
  for (std::size_t d = 0; d < topo.n_devices; ++d) {
    const SparseMatrix& slice = l.slices[d];
    for (std::size_t i = 0; i < topo.cores_per_device; ++i) {
      BaselineCore c;
      c.device = d;
      c.cluster = d;
      c.slice = d;
      c.tile_rows = ranges[d];
      c.plan.global_core = d * topo.cores_per_device + i;
      if (i >= active || ranges[d].size() == 0) {
        c.idle = true;
        l.cores.push_back(std::move(c));
        continue;
      }
      c.cols = {col_split[i], col_split[i + 1]};
      c.plan.work = paf::whole(slice.rowptr());
      c.plan.threads =
          paf::assign_within_core(slice, c.plan.work, topo.threads_per_core, Scheme::kRE,
                                  SyncMode::kLockFree, c.cols.size(), eb, topo, c.plan.global_core);
      c.plan.bank.sparse_bytes = paf::sparse_bytes(SparseFormat::kCSR, l.n, slice.nnz(), eb);
      c.plan.bank.feature_bytes = static_cast<std::uint64_t>(ranges[d].size()) * c.cols.size() * eb;
      c.plan.bank.output_bytes = static_cast<std::uint64_t>(l.n) * c.cols.size() * eb;
      check_bank(c.plan.bank, c.plan.global_core, topo, "grande");
      c.sync_ops = core_sync_ops(slice, c.plan.work, topo.threads_per_core, Scheme::kRE,
                                 SyncMode::kLockFree, topo);
      l.cores.push_back(std::move(c));
    }
  }
  return l;
}

Layout sp_layout(const SparseMatrix& a, std::size_t k, const PimTopology& topo, std::size_t g,
                 BaselineKind kind) {
  if (topo.n_devices % g != 0) {
    throw ConfigError(std::string(to_string(kind)) + " needs a device count divisible by " +
                      std::to_string(g) + ", got " + std::to_string(topo.n_devices));
  }
  Layout l;
  l.kind = kind;
  l.label = std::string(to_string(kind));
  l.value_kind = a.kind();
  l.n = a.n_rows();
  l.k = k;
  l.nnz = a.nnz();
  l.thread_scheme = Scheme::kCP;
  l.devices_per_group = g;
  const std::size_t groups = topo.n_devices / g;
  l.clusters = groups;
  const std::size_t eb = elem_bytes(a.kind());
  l.slices.push_back(a.with_format(SparseFormat::kCOO));
  const SparseMatrix& m = l.slices.front();

  // Same nonzero split in every group.
  std::vector<paf::WorkRange> ranges;
  for (const paf::WorkRange& dev : paf::partition_chunk(m.rowptr(), paf::whole(m.rowptr()), g,
                                                        Scheme::kCP)) {
    const auto cores = paf::partition_chunk(m.rowptr(), dev, topo.cores_per_device, Scheme::kCP);
    ranges.insert(ranges.end(), cores.begin(), cores.end());
  }
  l.group_split_rows = paf::split_stats(ranges).boundaries;

  const std::size_t active = std::min(groups, k);
  const auto col_split = even_split(k, active);
  for (std::size_t q = 0; q < groups; ++q) {
    for (std::size_t j = 0; j < g; ++j) {
      const std::size_t device = q * g + j;
      for (std::size_t i = 0; i < topo.cores_per_device; ++i) {
        BaselineCore c;
        c.device = device;
        c.cluster = q;
        c.tile_rows = {0, a.n_cols()};
        c.plan.global_core = device * topo.cores_per_device + i;
        c.plan.work = ranges[j * topo.cores_per_device + i];
        if (q >= active) {
          c.idle = true;
          l.cores.push_back(std::move(c));
          continue;
        }
        c.cols = {col_split[q], col_split[q + 1]};
        c.plan.threads =
            paf::assign_within_core(m, c.plan.work, topo.threads_per_core, Scheme::kCP,
                                    SyncMode::kLockFree, 1, eb, topo, c.plan.global_core);
        c.plan.bank.sparse_bytes =
            paf::sparse_bytes(SparseFormat::kCOO, c.plan.work.rows(), c.plan.work.nnz(), eb);
        c.plan.bank.feature_bytes = static_cast<std::uint64_t>(a.n_cols()) * eb;
        c.plan.bank.output_bytes = static_cast<std::uint64_t>(c.plan.work.rows()) * eb;
        check_bank(c.plan.bank, c.plan.global_core, topo, l.label);
        c.sync_ops = core_sync_ops(m, c.plan.work, topo.threads_per_core, Scheme::kCP,
                                   SyncMode::kLockFree, topo);
        c.idle = c.plan.work.nnz() == 0;
        l.cores.push_back(std::move(c));
      }
    }
  }
  return l;
}

Layout make_layout(BaselineKind kind, const SparseMatrix& a, std::size_t k,
                   const PimTopology& topo) {
  topo.validate();
  if (a.n_rows() != a.n_cols()) throw DimensionError("adjacency must be square");
  if (k == 0) throw DimensionError("hidden size must be positive");
  switch (kind) {
    case BaselineKind::kGraNDe: return grande_layout(a, k, topo);
    case BaselineKind::kSP1: return sp_layout(a, k, topo, 1, kind);
    case BaselineKind::kSP2: return sp_layout(a, k, topo, 2, kind);
  }
  throw ConfigError("unknown baseline");
}

void fill_core_reports(const Layout& l, ExecutionReport& r, const PimTopology& topo,
                       const CostProfile& profile, bool per_column) {
  const std::size_t eb = elem_bytes(l.value_kind);
  r.clusters.resize(l.clusters);
  for (std::size_t c = 0; c < l.clusters; ++c) r.clusters[c].index = c;
  for (const BaselineCore& c : l.cores) {
    CoreReport rc;
    rc.core = c.plan.global_core;
    rc.cluster = c.cluster;
    rc.device = c.device;
    rc.idle = c.idle;
    ClusterReport& cr = r.clusters[c.cluster];
    cr.device = c.device;
    cr.slice = c.slice;
    ++cr.cores;
    if (!c.cols.size()) {
      ++r.idle_cores;
      r.cores.push_back(rc);
      continue;
    }
    const std::size_t cols = c.cols.size();
    rc.nnz = c.plan.work.nnz() * (per_column ? cols : 1);
    rc.rows = c.plan.work.rows();
    rc.sync_ops = c.sync_ops * (per_column ? cols : 1);
    if (per_column) {
      rc.bytes_to = static_cast<std::uint64_t>(l.n) * eb * cols;
      rc.bytes_from = static_cast<std::uint64_t>(rc.rows) * eb * cols;
      rc.t_kernel = static_cast<double>(cols) *
                    core_kernel_seconds(c.plan.work.nnz(), c.sync_ops, topo.threads_per_core, 1,
                                        l.value_kind, profile, topo);
    } else {
      rc.bytes_to = static_cast<std::uint64_t>(c.tile_rows.size()) * cols * eb;
      rc.bytes_from = static_cast<std::uint64_t>(rc.rows) * cols * eb;
      rc.t_kernel = core_kernel_seconds(c.plan.work.nnz(), c.sync_ops, topo.threads_per_core,
                                        cols, l.value_kind, profile, topo);
    }
    if (rc.idle) {
      ++r.idle_cores;
    } else {
      ++r.active_cores;
    }
    cr.nnz += rc.nnz;
    cr.bytes_to += rc.bytes_to;
    cr.bytes_from += rc.bytes_from;
    cr.t_kernel = std::max(cr.t_kernel, rc.t_kernel);
    r.max_nnz_per_core = std::max(r.max_nnz_per_core, c.plan.work.nnz());
    r.cores.push_back(rc);
  }
  if (l.kind != BaselineKind::kGraNDe) {
    for (ClusterReport& cr : r.clusters) cr.split_rows = l.group_split_rows;
  }
}

void account_grande(const Layout& l, ExecutionReport& r, const PimTopology& topo,
                    const CostProfile& profile) {
  const std::size_t eb = elem_bytes(l.value_kind);
  std::vector<CorePayload> to, from;
  std::size_t active_devices = 0;
  for (std::size_t d = 0; d < topo.n_devices; ++d) {
    bool any = false;
    for (std::size_t i = 0; i < topo.cores_per_device; ++i) {
      const BaselineCore& c = l.cores[d * topo.cores_per_device + i];
      if (!c.cols.size()) continue;
      any = true;
      to.push_back({d, static_cast<std::uint64_t>(c.tile_rows.size()) * c.cols.size() * eb});
      from.push_back({d, static_cast<std::uint64_t>(l.n) * c.cols.size() * eb});
    }
    active_devices += any ? 1 : 0;
  }
  const TransferStats t_to = account_transfer(to, profile.host_pim_bw);
  const TransferStats t_from = account_transfer(from, profile.pim_host_bw);
  r.t_host_pim = t_to.seconds;
  r.t_pim_host = t_from.seconds;
  r.bytes_to_pim = t_to.total_bytes;
  r.bytes_from_pim = t_from.total_bytes;
  r.padding_to_pim = t_to.padding;
  r.padding_from_pim = t_from.padding;
  r.max_bytes_to_core = t_to.max_payload;
  r.max_bytes_from_core = t_from.max_payload;
  for (const ClusterReport& cr : r.clusters) r.t_kernel = std::max(r.t_kernel, cr.t_kernel);

  // One column block per active core index; every device returns all N rows
  // of it, so the host copies one partial and adds the other devices'.
  const std::size_t active = std::min(l.k, topo.cores_per_device);
  const auto col_split = even_split(l.k, active);
  const double n = static_cast<double>(l.n);
  const double reductions = active_devices > 0 ? static_cast<double>(active_devices - 1) : 0.0;
  for (std::size_t i = 0; i < active; ++i) {
    const double w = static_cast<double>(col_split[i + 1] - col_split[i]);
    const double bytes = n * w * static_cast<double>(eb);
    const double bw = profile.host_bw.lookup(w * static_cast<double>(eb)) * 1e9;
    r.t_merge += bytes / bw + reductions * n * w / profile.add_host.lookup(w);
    r.t_other += bytes / bw;
  }
}

void account_sp(const Layout& l, ExecutionReport& r, const PimTopology& topo,
                const CostProfile& profile) {
  const std::size_t eb = elem_bytes(l.value_kind);
  // Round s runs one SpMV in every group that still has a column left.
  std::size_t rounds = 0;
  for (const BaselineCore& c : l.cores) rounds = std::max(rounds, c.cols.size());
  std::vector<std::size_t> group_cols(l.clusters, 0);
  for (const BaselineCore& c : l.cores) group_cols[c.cluster] = c.cols.size();

  TransferStats last_to, last_from;
  std::size_t last_active = static_cast<std::size_t>(-1);
  double last_kernel = 0;
  for (std::size_t s = 0; s < rounds; ++s) {
    std::size_t active_groups = 0;
    for (std::size_t cols : group_cols) active_groups += cols > s ? 1 : 0;
    if (active_groups != last_active) {
      std::vector<CorePayload> to, from;
      last_kernel = 0;
      for (const BaselineCore& c : l.cores) {
        if (group_cols[c.cluster] <= s) continue;
        to.push_back({c.device, static_cast<std::uint64_t>(l.n) * eb});
        from.push_back({c.device, static_cast<std::uint64_t>(c.plan.work.rows()) * eb});
        last_kernel = std::max(last_kernel,
                               core_kernel_seconds(c.plan.work.nnz(), c.sync_ops,
                                                   topo.threads_per_core, 1, l.value_kind,
                                                   profile, topo));
      }
      last_to = account_transfer(to, profile.host_pim_bw);
      last_from = account_transfer(from, profile.pim_host_bw);
      last_active = active_groups;
    }
    r.t_host_pim += last_to.seconds;
    r.t_pim_host += last_from.seconds;
    r.t_kernel += last_kernel;
    r.bytes_to_pim += last_to.total_bytes;
    r.bytes_from_pim += last_from.total_bytes;
    r.padding_to_pim += last_to.padding;
    r.padding_from_pim += last_from.padding;
    r.max_bytes_to_core = std::max(r.max_bytes_to_core, last_to.max_payload);
    r.max_bytes_from_core = std::max(r.max_bytes_from_core, last_from.max_payload);
  }

  // Per column: copy every core's rows into the output column, add the
  // partials of rows cut between cores or devices.
  std::uint64_t group_rows = 0;
  for (const BaselineCore& c : l.cores) {
    if (c.cluster == 0) group_rows += c.plan.work.rows();
  }
  const double k = static_cast<double>(l.k);
  const double e = static_cast<double>(eb);
  const double elem_bw = profile.host_bw.lookup(e) * 1e9;
  r.t_merge = k * static_cast<double>(group_rows) * e / elem_bw +
              k * static_cast<double>(l.group_split_rows) / profile.add_host.lookup(1.0);
  // Column extraction from the row-major feature matrix.
  r.t_other = static_cast<double>(l.n) * k * e / elem_bw;
}

ExecutionReport account_layout(const Layout& l, const PimTopology& topo,
                               const CostProfile& profile) {
  ExecutionReport r;
  r.strategy = l.label;
  r.config = l.label;
  r.edges = l.nnz;
  r.hidden = l.k;
  const bool per_column = l.kind != BaselineKind::kGraNDe;
  fill_core_reports(l, r, topo, profile, per_column);
  if (per_column) {
    account_sp(l, r, topo, profile);
  } else {
    account_grande(l, r, topo, profile);
  }
  r.finalize();
  if (r.t_total > 0) {
    r.utilization_pct = resource_utilization(r, r.edges, r.hidden, profile.pim_peak_ops_per_s);
  }
  return r;
}

}  // namespace

ExecutionReport account_baseline(BaselineKind kind, const SparseMatrix& a, std::size_t k,
                                 const PimTopology& topo, const CostProfile& profile) {
  return account_layout(make_layout(kind, a, k, topo), topo, profile);
}

SimResult simulate_baseline(BaselineKind kind, const SparseMatrix& a, const DenseMatrix& f,
                            const PimTopology& topo, const CostProfile& profile) {
  if (f.n_rows() != a.n_cols()) {
    throw DimensionError("features have " + std::to_string(f.n_rows()) + " rows, adjacency has " +
                         std::to_string(a.n_cols()) + " columns");
  }
  if (f.kind() != a.kind()) {
    throw PreconditionError("feature kind " + std::string(to_string(f.kind())) +
                            " differs from adjacency kind " + std::string(to_string(a.kind())));
  }
  const Layout l = make_layout(kind, a, f.n_cols(), topo);
  OutputAccumulator acc(f.kind(), a.n_rows(), f.n_cols());
  for (const BaselineCore& c : l.cores) {
    if (!c.cols.size() || c.plan.work.nnz() == 0) continue;
    acc.add(kernel_execute(l.slices[c.slice], c.plan, f, c.tile_rows, c.cols, SyncMode::kLockFree,
                           l.thread_scheme, profile, topo));
  }
  return {acc.finish(), account_layout(l, topo, profile)};
}

}  // namespace pimgnn::sim
