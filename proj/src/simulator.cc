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

#include "pimgnn/simulator.h"

#include <algorithm>
#include <map>
#include <string>

#include "pimgnn/arith.h"
#include "pimgnn/error.h"

namespace pimgnn::sim {

TransferStats account_transfer(std::span<const CorePayload> payloads, const SizeTable& bw_gbps) {
  TransferStats t;
  t.cores = payloads.size();
  std::map<std::size_t, std::pair<std::uint64_t, std::uint64_t>> per_device;  // max, count
  for (const CorePayload& p : payloads) {
    t.payload.push_back(p.bytes);
    auto& [mx, count] = per_device[p.device];
    mx = std::max(mx, p.bytes);
    ++count;
    t.max_payload = std::max(t.max_payload, p.bytes);
  }
  std::uint64_t unpadded = 0;
  for (const CorePayload& p : payloads) unpadded += p.bytes;
  for (const auto& [device, mc] : per_device) t.total_bytes += mc.first * mc.second;
  t.padding = t.total_bytes - unpadded;
  if (t.max_payload > 0) {
    const double bytes = static_cast<double>(t.cores) * static_cast<double>(t.max_payload);
    t.seconds = bytes / (bw_gbps.lookup(static_cast<double>(t.max_payload)) * 1e9);
  }
  return t;
}

namespace {

std::uint64_t tile_bytes(const paf::ClusterGeometry& g, std::size_t eb) {
  return static_cast<std::uint64_t>(g.rows.size()) * g.cols.size() * eb;
}

std::uint64_t output_bytes(const paf::CorePlan& core, const paf::ClusterGeometry& g,
                           std::size_t eb) {
  return static_cast<std::uint64_t>(core.work.rows()) * g.cols.size() * eb;
}

}  // namespace

TransferStats host_pim_transfer(const paf::TilePlan& plan, const CostProfile& profile) {
  std::vector<CorePayload> payloads;
  for (const paf::ClusterPlan& c : plan.clusters) {
    for (std::size_t i = 0; i < c.cores.size(); ++i) {
      payloads.push_back({c.geometry.device, tile_bytes(c.geometry, plan.elem_bytes())});
    }
  }
  return account_transfer(payloads, profile.host_pim_bw);
}

TransferStats pim_host_transfer(const paf::TilePlan& plan, const CostProfile& profile) {
  std::vector<CorePayload> payloads;
  for (const paf::ClusterPlan& c : plan.clusters) {
    for (const paf::CorePlan& core : c.cores) {
      payloads.push_back({c.geometry.device, output_bytes(core, c.geometry, plan.elem_bytes())});
    }
  }
  return account_transfer(payloads, profile.pim_host_bw);
}

double per_op_cost(const CostProfile& profile, std::size_t chunk, ValueKind kind) {
  const double base = 1.0 / profile.fma_core.lookup(static_cast<double>(chunk));
  return kind == ValueKind::kFloat32 ? base * profile.fp32_kernel_penalty : base;
}

double thread_scaling(std::size_t threads, const PimTopology& topo) {
  return static_cast<double>(std::min(threads, topo.pipeline_saturation_threads));
}

double core_kernel_seconds(std::uint64_t nnz, std::uint64_t sync_ops, std::size_t threads,
                           std::size_t chunk, ValueKind kind, const CostProfile& profile,
                           const PimTopology& topo) {
  if (nnz == 0) return 0.0;
  const double op = per_op_cost(profile, chunk, kind);
  return static_cast<double>(nnz) * op / thread_scaling(threads, topo) +
         static_cast<double>(sync_ops) * op;
}

namespace {

std::uint64_t sync_ops_of(const paf::SplitStats& s, SyncMode sync) {
  return sync == SyncMode::kCoarseLock ? s.writes : s.boundaries;
}

std::size_t concurrent_threads(std::size_t threads, const PimTopology& topo) {
  return std::min(threads, topo.pipeline_saturation_threads);
}

// Sync operations of a planned core, reusing its thread split when every
// thread runs concurrently.
std::uint64_t planned_sync_ops(const SparseMatrix& slice, const paf::CorePlan& core,
                               Scheme scheme, SyncMode sync, const PimTopology& topo) {
  const std::size_t t = core.threads.threads.size();
  if (concurrent_threads(t, topo) == t) return sync_ops_of(core.threads.splits, sync);
  return core_sync_ops(slice, core.work, t, scheme, sync, topo);
}

}  // namespace

std::uint64_t core_sync_ops(const SparseMatrix& slice, const paf::WorkRange& work,
                            std::size_t threads, Scheme scheme, SyncMode sync,
                            const PimTopology& topo) {
  const std::size_t t = concurrent_threads(threads, topo);
  if (t == 0) return 0;
  const auto pieces = paf::partition_chunk(slice.rowptr(), work, t, scheme);
  return sync_ops_of(paf::split_stats(pieces), sync);
}

namespace {

template <class Acc>
void run_core(const SparseMatrix& slice, const paf::CorePlan& core, const DenseMatrix& f,
              paf::IndexRange tile_rows, paf::IndexRange tile_cols, SyncMode sync,
              std::vector<typename Acc::type>& out) {
  using T = typename Acc::type;
  const std::size_t cols = tile_cols.size();
  const std::uint32_t base_row = core.work.row_begin;
  const auto rowptr = slice.rowptr();
  const auto colind = slice.colind();
  const auto values = slice.values();

  // LockFree slots: (row, partial) written by threads that start in a row
  // another thread of this core also produces; thread 0 merges them last.
  std::vector<std::pair<std::uint32_t, std::vector<T>>> slots;
  std::vector<T> acc(cols);
  bool seen_nonempty = false;
  for (const paf::WorkRange& th : core.threads.threads) {
    if (th.rows() == 0) continue;
    const bool internal_split = seen_nonempty && th.shares_first_row;
    seen_nonempty = true;
    for (std::uint32_t r = th.row_begin; r < th.row_end; ++r) {
      const std::uint64_t lo = std::max(rowptr[r], th.nnz_begin);
      const std::uint64_t hi = std::min(rowptr[r + 1], th.nnz_end);
      std::fill(acc.begin(), acc.end(), T{});
      for (std::uint64_t e = lo; e < hi; ++e) {
        const double a = values[e];
        const std::size_t frow = tile_rows.begin + colind[e];
        const double* x = f.row(frow).data() + tile_cols.begin;
        for (std::size_t c = 0; c < cols; ++c) Acc::fma(acc[c], a, x[c]);
      }
      if (internal_split && r == th.row_begin && sync == SyncMode::kLockFree) {
        slots.emplace_back(r, acc);
        continue;
      }
      // CoarseLock takes the core mutex for split rows; the commit itself is
      // the same accumulation.
      T* dst = out.data() + static_cast<std::size_t>(r - base_row) * cols;
      for (std::size_t c = 0; c < cols; ++c) Acc::add(dst[c], acc[c]);
    }
  }
  for (const auto& [r, partial] : slots) {
    T* dst = out.data() + static_cast<std::size_t>(r - base_row) * cols;
    for (std::size_t c = 0; c < cols; ++c) Acc::add(dst[c], partial[c]);
  }
}

}  // namespace

CorePartial kernel_execute(const SparseMatrix& slice, const paf::CorePlan& core,
                           const DenseMatrix& f, paf::IndexRange tile_rows,
                           paf::IndexRange tile_cols, SyncMode sync, Scheme thread_scheme,
                           const CostProfile& profile, const PimTopology& topo) {
  if (tile_rows.size() != slice.n_cols() || tile_rows.end > f.n_rows() ||
      tile_cols.end > f.n_cols()) {
    throw DimensionError("feature tile does not match the sparse slice");
  }
  CorePartial p;
  p.row_begin = core.work.row_begin;
  p.rows = core.work.rows();
  p.cols = tile_cols.size();
  p.col_offset = tile_cols.begin;
  const std::size_t n = p.rows * p.cols;
  if (is_integer(f.kind())) {
    p.ints.assign(n, 0);
    run_core<arith::IntAcc>(slice, core, f, tile_rows, tile_cols, sync, p.ints);
  } else {
    p.reals.assign(n, 0.0);
    run_core<arith::FloatAcc>(slice, core, f, tile_rows, tile_cols, sync, p.reals);
  }
  p.sync_ops = planned_sync_ops(slice, core, thread_scheme, sync, topo);
  p.seconds = core_kernel_seconds(core.work.nnz(), p.sync_ops, core.threads.threads.size(),
                                  p.cols, f.kind(), profile, topo);
  return p;
}

double merge_seconds(const paf::TilePlan& plan, const CostProfile& profile) {
  const std::size_t eb = plan.elem_bytes();
  const double n = static_cast<double>(plan.n);
  double copy = 0, reduce = 0, split = 0;
  for (const paf::IndexRange& cols : plan.tile_cols) {
    const double w = static_cast<double>(cols.size());
    const double tile_bytes = n * w * static_cast<double>(eb);
    copy += tile_bytes / (profile.host_bw.lookup(w * static_cast<double>(eb)) * 1e9);
    reduce += static_cast<double>(plan.cfg.sp - 1) * n * w / profile.add_host.lookup(w);
  }
  for (const paf::ClusterPlan& c : plan.clusters) {
    const double w = static_cast<double>(c.geometry.cols.size());
    split += static_cast<double>(c.core_splits.boundaries) * w / profile.add_host.lookup(w);
  }
  return copy + reduce + split;
}

namespace {

template <class T>
void add_partial(std::vector<T>& acc, std::size_t k, const CorePartial& p,
                 const std::vector<T>& src) {
  for (std::size_t r = 0; r < p.rows; ++r) {
    T* dst = acc.data() + (p.row_begin + r) * k + p.col_offset;
    const T* s = src.data() + r * p.cols;
    for (std::size_t c = 0; c < p.cols; ++c) {
      if constexpr (std::is_integral_v<T>) {
        arith::IntAcc::add(dst[c], s[c]);
      } else {
        arith::FloatAcc::add(dst[c], s[c]);
      }
    }
  }
}

}  // namespace

OutputAccumulator::OutputAccumulator(ValueKind kind, std::size_t n, std::size_t k)
    : kind_(kind), n_(n), k_(k) {
  if (is_integer(kind_)) {
    ints_.assign(n_ * k_, 0);
  } else {
    reals_.assign(n_ * k_, 0.0);
  }
}

void OutputAccumulator::add(const CorePartial& p) {
  if (p.row_begin + p.rows > n_ || p.col_offset + p.cols > k_) {
    throw DimensionError("partial does not fit the output");
  }
  if (is_integer(kind_)) {
    if (p.ints.size() != p.rows * p.cols) throw DimensionError("partial has wrong size");
    add_partial(ints_, k_, p, p.ints);
  } else {
    if (p.reals.size() != p.rows * p.cols) throw DimensionError("partial has wrong size");
    add_partial(reals_, k_, p, p.reals);
  }
}

DenseMatrix OutputAccumulator::finish() const {
  std::vector<double> out(n_ * k_);
  for (std::size_t i = 0; i < n_ * k_; ++i) {
    out[i] = is_integer(kind_) ? narrow(kind_, ints_[i]) : narrow(kind_, reals_[i]);
  }
  return DenseMatrix(n_, k_, kind_, std::move(out));
}

MergeResult merge(std::span<const CorePartial> partials, const paf::TilePlan& plan,
                  const CostProfile& profile) {
  OutputAccumulator acc(plan.kind, plan.n, plan.k);
  for (const CorePartial& p : partials) acc.add(p);
  return {acc.finish(), merge_seconds(plan, profile)};
}

double other_seconds(const paf::TilePlan& plan, const CostProfile& profile) {
  const double eb = static_cast<double>(plan.elem_bytes());
  double t = 0;
  for (const paf::IndexRange& cols : plan.tile_cols) {
    const double w = static_cast<double>(cols.size());
    t += static_cast<double>(plan.n) * w * eb / (profile.host_bw.lookup(w * eb) * 1e9);
  }
  return t;
}

ExecutionReport account_aggregation(const paf::TilePlan& plan, const CostProfile& profile) {
  ExecutionReport r;
  r.strategy = "pygim";
  r.config = plan.cfg.label();
  r.edges = plan.nnz;
  r.hidden = plan.k;

  const std::size_t eb = plan.elem_bytes();
  const Scheme thread_scheme = plan.cfg.core_scheme();
  for (const paf::ClusterPlan& c : plan.clusters) {
    const paf::ClusterGeometry& g = c.geometry;
    const SparseMatrix& slice = plan.slices[g.slice];
    ClusterReport cr;
    cr.index = g.index;
    cr.device = g.device;
    cr.slice = g.slice;
    cr.tile_col = g.tile_col;
    cr.cores = c.cores.size();
    cr.split_rows = c.core_splits.boundaries;
    for (const paf::CorePlan& core : c.cores) {
      CoreReport rc;
      rc.core = core.global_core;
      rc.cluster = g.index;
      rc.device = g.device;
      rc.nnz = core.work.nnz();
      rc.rows = core.work.rows();
      rc.bytes_to = tile_bytes(g, eb);
      rc.bytes_from = output_bytes(core, g, eb);
      rc.sync_ops = planned_sync_ops(slice, core, thread_scheme, plan.cfg.sync, plan.topo);
      rc.t_kernel = core_kernel_seconds(rc.nnz, rc.sync_ops, core.threads.threads.size(),
                                        g.cols.size(), plan.kind, profile, plan.topo);
      rc.idle = rc.nnz == 0;
      cr.nnz += rc.nnz;
      cr.bytes_to += rc.bytes_to;
      cr.bytes_from += rc.bytes_from;
      cr.t_kernel = std::max(cr.t_kernel, rc.t_kernel);
      r.max_nnz_per_core = std::max(r.max_nnz_per_core, rc.nnz);
      if (rc.idle) {
        ++r.idle_cores;
      } else {
        ++r.active_cores;
      }
      r.cores.push_back(rc);
    }
    r.t_kernel = std::max(r.t_kernel, cr.t_kernel);
    r.clusters.push_back(cr);
  }

  const TransferStats to = host_pim_transfer(plan, profile);
  const TransferStats from = pim_host_transfer(plan, profile);
  r.t_host_pim = to.seconds;
  r.t_pim_host = from.seconds;
  r.bytes_to_pim = to.total_bytes;
  r.bytes_from_pim = from.total_bytes;
  r.padding_to_pim = to.padding;
  r.padding_from_pim = from.padding;
  r.max_bytes_to_core = to.max_payload;
  r.max_bytes_from_core = from.max_payload;
  r.t_merge = merge_seconds(plan, profile);
  r.t_other = other_seconds(plan, profile);
  r.finalize();
  if (r.t_total > 0) {
    r.utilization_pct = resource_utilization(r, r.edges, r.hidden, profile.pim_peak_ops_per_s);
  }
  return r;
}

SimResult simulate_aggregation(const paf::TilePlan& plan, const DenseMatrix& f,
                               const CostProfile& profile) {
  if (f.n_rows() != plan.n || f.n_cols() != plan.k) {
    throw DimensionError("features are " + std::to_string(f.n_rows()) + "x" +
                         std::to_string(f.n_cols()) + ", plan expects " + std::to_string(plan.n) +
                         "x" + std::to_string(plan.k));
  }
  if (f.kind() != plan.kind) {
    throw PreconditionError("feature kind " + std::string(to_string(f.kind())) +
                            " differs from adjacency kind " + std::string(to_string(plan.kind)));
  }
  paf::validate_capacity(plan, plan.topo);

  OutputAccumulator acc(plan.kind, plan.n, plan.k);
  for (const paf::ClusterPlan& c : plan.clusters) {
    const paf::ClusterGeometry& g = c.geometry;
    for (const paf::CorePlan& core : c.cores) {
      const CorePartial p = kernel_execute(plan.slices[g.slice], core, f, g.rows, g.cols,
                                           plan.cfg.sync, plan.cfg.core_scheme(), profile,
                                           plan.topo);
      acc.add(p);
    }
  }
  return {acc.finish(), account_aggregation(plan, profile)};
}

}  // namespace pimgnn::sim
