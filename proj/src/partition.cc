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

#include "pimgnn/partition.h"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "pimgnn/error.h"

namespace pimgnn::paf {

namespace {

std::int64_t iabs(std::int64_t v) { return v < 0 ? -v : v; }

// Position of row boundary `r` inside the chunk, in nonzero space.
std::uint64_t boundary_nnz(std::span<const std::uint64_t> rowptr, const WorkRange& chunk,
                           std::uint32_t r) {
  if (r <= chunk.row_begin) return chunk.nnz_begin;
  if (r >= chunk.row_end) return chunk.nnz_end;
  return std::clamp(rowptr[r], chunk.nnz_begin, chunk.nnz_end);
}

std::uint64_t clipped_row_nnz(std::span<const std::uint64_t> rowptr, const WorkRange& chunk,
                              std::uint32_t r) {
  return boundary_nnz(rowptr, chunk, r + 1) - boundary_nnz(rowptr, chunk, r);
}

std::uint32_t row_containing(std::span<const std::uint64_t> rowptr, std::uint64_t e) {
  auto it = std::upper_bound(rowptr.begin(), rowptr.end(), e);
  return static_cast<std::uint32_t>(it - rowptr.begin() - 1);
}

// Converts row boundaries b[0..parts] into ranges and places the chunk's
// share flags on the first and last non-empty pieces.
std::vector<WorkRange> ranges_from_row_bounds(std::span<const std::uint64_t> rowptr,
                                              const WorkRange& chunk,
                                              const std::vector<std::uint32_t>& bounds) {
  const std::size_t parts = bounds.size() - 1;
  std::vector<WorkRange> out(parts);
  for (std::size_t p = 0; p < parts; ++p) {
    out[p].row_begin = bounds[p];
    out[p].row_end = bounds[p + 1];
    out[p].nnz_begin = boundary_nnz(rowptr, chunk, bounds[p]);
    out[p].nnz_end = boundary_nnz(rowptr, chunk, bounds[p + 1]);
  }
  for (std::size_t p = 0; p < parts; ++p) {
    if (out[p].rows() > 0) {
      out[p].shares_first_row = chunk.shares_first_row;
      break;
    }
  }
  for (std::size_t p = parts; p-- > 0;) {
    if (out[p].rows() > 0) {
      out[p].shares_last_row = chunk.shares_last_row;
      break;
    }
  }
  return out;
}

std::vector<WorkRange> partition_rows_even(std::span<const std::uint64_t> rowptr,
                                           const WorkRange& chunk, std::size_t parts) {
  const auto split = even_split(chunk.rows(), parts);
  std::vector<std::uint32_t> bounds(parts + 1);
  for (std::size_t p = 0; p <= parts; ++p) {
    bounds[p] = chunk.row_begin + static_cast<std::uint32_t>(split[p]);
  }
  return ranges_from_row_bounds(rowptr, chunk, bounds);
}

// Row bounds whose per-part nnz all lie in [lo, lo + max_row] for some lo.
// Such a window always exists. The reachable boundary set after j parts is an
// index interval because consecutive prefix sums differ by at most max_row.
std::vector<std::uint32_t> window_row_bounds(std::span<const std::uint64_t> rowptr,
                                             const WorkRange& chunk, std::size_t parts) {
  const std::size_t m = chunk.rows();
  std::vector<std::uint64_t> prefix(m + 1);
  std::uint64_t max_row = 0;
  for (std::size_t i = 0; i <= m; ++i) {
    prefix[i] = boundary_nnz(rowptr, chunk, chunk.row_begin + static_cast<std::uint32_t>(i)) -
                chunk.nnz_begin;
    if (i > 0) max_row = std::max(max_row, prefix[i] - prefix[i - 1]);
  }
  const std::uint64_t mean = prefix[m] / parts;
  const std::uint64_t lo_end = mean > max_row ? mean - max_row : 0;
  std::vector<std::pair<std::size_t, std::size_t>> reach(parts + 1);
  for (std::uint64_t lo = mean + 1; lo-- > lo_end;) {
    const std::uint64_t hi = lo + max_row;
    reach[0] = {0, 0};
    bool ok = true;
    for (std::size_t j = 1; j <= parts && ok; ++j) {
      const auto [a, b] = reach[j - 1];
      const auto first = std::lower_bound(prefix.begin(), prefix.end(), prefix[a] + lo);
      const auto last = std::upper_bound(prefix.begin(), prefix.end(), prefix[b] + hi);
      ok = first < last;
      reach[j] = {static_cast<std::size_t>(first - prefix.begin()),
                  static_cast<std::size_t>(last - prefix.begin()) - 1};
    }
    if (!ok || reach[parts].first > m || reach[parts].second < m) continue;
    std::vector<std::uint32_t> bounds(parts + 1);
    std::size_t cur = m;
    for (std::size_t j = parts; j > 0; --j) {
      bounds[j] = chunk.row_begin + static_cast<std::uint32_t>(cur);
      const auto it = std::upper_bound(prefix.begin(), prefix.end(), prefix[cur] - lo);
      cur = std::min(static_cast<std::size_t>(it - prefix.begin()) - 1, reach[j - 1].second);
    }
    bounds[0] = chunk.row_begin;
    return bounds;
  }
  throw std::logic_error("no balanced row window for " + std::to_string(parts) + " parts");
}

std::vector<WorkRange> partition_rows_greedy(std::span<const std::uint64_t> rowptr,
                                             const WorkRange& chunk, std::size_t parts) {
  std::vector<std::uint32_t> bounds(parts + 1, chunk.row_end);
  std::uint32_t r = chunk.row_begin;
  for (std::size_t p = 0; p < parts; ++p) {
    bounds[p] = r;
    if (p + 1 == parts) break;
    const auto k = static_cast<std::int64_t>(parts - p);
    const auto remaining = static_cast<std::int64_t>(chunk.nnz_end - boundary_nnz(rowptr, chunk, r));
    std::int64_t total = 0;
    while (r < chunk.row_end) {
      const auto s = static_cast<std::int64_t>(clipped_row_nnz(rowptr, chunk, r));
      if (iabs(k * (total + s) - remaining) > iabs(k * total - remaining)) break;
      total += s;
      ++r;
    }
  }
  bounds[parts] = chunk.row_end;
  // The greedy walk can drift past the max-row spread on skewed slices.
  std::uint64_t lo = ~std::uint64_t{0}, hi = 0, max_row = 0;
  for (std::size_t p = 0; p < parts; ++p) {
    const std::uint64_t v = boundary_nnz(rowptr, chunk, bounds[p + 1]) - boundary_nnz(rowptr, chunk, bounds[p]);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  for (std::uint32_t row = chunk.row_begin; row < chunk.row_end; ++row) {
    max_row = std::max(max_row, clipped_row_nnz(rowptr, chunk, row));
  }
  if (hi - lo > max_row) bounds = window_row_bounds(rowptr, chunk, parts);
  return ranges_from_row_bounds(rowptr, chunk, bounds);
}

std::vector<WorkRange> partition_nnz_split(std::span<const std::uint64_t> rowptr,
                                           const WorkRange& chunk, std::size_t parts) {
  const std::uint64_t total = chunk.nnz();
  if (total == 0) {
    std::vector<std::uint32_t> bounds(parts + 1, chunk.row_end);
    bounds[0] = chunk.row_begin;
    return ranges_from_row_bounds(rowptr, chunk, bounds);
  }
  const auto split = even_split(total, parts);
  const std::size_t last = std::min<std::uint64_t>(parts, total) - 1;

  // split_at[p]: piece p begins in the middle of a row.
  std::vector<std::uint64_t> begin(parts + 1);
  std::vector<bool> split_at(parts + 1, false);
  for (std::size_t p = 0; p <= parts; ++p) begin[p] = chunk.nnz_begin + split[p];
  for (std::size_t p = 1; p <= last; ++p) {
    const std::uint32_t row = row_containing(rowptr, begin[p]);
    split_at[p] = std::max(rowptr[row], chunk.nnz_begin) < begin[p];
  }

  std::vector<WorkRange> out(parts);
  for (std::size_t p = 0; p < parts; ++p) {
    WorkRange& w = out[p];
    if (p > last) {
      w.row_begin = w.row_end = chunk.row_end;
      w.nnz_begin = w.nnz_end = chunk.nnz_end;
      continue;
    }
    w.nnz_begin = begin[p];
    w.nnz_end = begin[p + 1];
    w.row_begin = p == 0 ? chunk.row_begin : row_containing(rowptr, begin[p]);
    if (p == last) {
      w.row_end = chunk.row_end;
    } else {
      w.row_end = row_containing(rowptr, begin[p + 1]) + (split_at[p + 1] ? 1 : 0);
    }
    w.shares_first_row = p == 0 ? chunk.shares_first_row : static_cast<bool>(split_at[p]);
    w.shares_last_row = p == last ? chunk.shares_last_row : static_cast<bool>(split_at[p + 1]);
  }
  return out;
}

}  // namespace

WorkRange whole(std::span<const std::uint64_t> rowptr) {
  WorkRange w;
  w.row_begin = 0;
  w.row_end = static_cast<std::uint32_t>(rowptr.size() - 1);
  w.nnz_begin = 0;
  w.nnz_end = rowptr.back();
  return w;
}

std::vector<WorkRange> partition_chunk(std::span<const std::uint64_t> rowptr,
                                       const WorkRange& chunk, std::size_t parts, Scheme scheme) {
  if (parts == 0) throw PreconditionError("partition needs at least one piece");
  switch (scheme) {
    case Scheme::kRV: return partition_rows_even(rowptr, chunk, parts);
    case Scheme::kRE:
    case Scheme::kCE: return partition_rows_greedy(rowptr, chunk, parts);
    case Scheme::kCP: return partition_nnz_split(rowptr, chunk, parts);
  }
  return {};
}

std::vector<WorkRange> assign_within_cluster(const SparseMatrix& slice, std::size_t cores,
                                             Scheme scheme) {
  if (cores == 0) throw PreconditionError("cluster needs at least one core");
  if (!scheme_matches_format(scheme, slice.format())) {
    throw PreconditionError(std::string("scheme ") + std::string(to_string(scheme)) +
                            " does not apply to " + std::string(to_string(slice.format())));
  }
  return partition_chunk(slice.rowptr(), whole(slice.rowptr()), cores, scheme);
}

SplitStats split_stats(std::span<const WorkRange> pieces) {
  SplitStats s;
  for (std::size_t p = 1; p < pieces.size(); ++p) {
    const WorkRange& w = pieces[p];
    if (w.rows() == 0 || !w.shares_first_row) continue;
    // A piece that shares its first row with a predecessor inside this
    // partition; p == 0 inherits its flag from the enclosing range.
    bool internal = false;
    for (std::size_t q = p; q-- > 0;) {
      if (pieces[q].rows() == 0) continue;
      internal = true;
      break;
    }
    if (!internal) continue;
    ++s.boundaries;
    if (s.rows.empty() || s.rows.back() != w.row_begin) s.rows.push_back(w.row_begin);
  }
  s.writes = s.boundaries + s.rows.size();
  return s;
}

std::uint64_t scratchpad_bytes(const PimTopology& topo, std::size_t threads,
                               std::size_t tile_cols, std::size_t elem_bytes,
                               std::size_t scratch_slots) {
  const std::uint64_t row = static_cast<std::uint64_t>(tile_cols) * elem_bytes;
  return threads * (topo.transfer_chunk + 2 * row) + scratch_slots * row;
}

ThreadPlan assign_within_core(const SparseMatrix& slice, const WorkRange& core,
                              std::size_t threads, Scheme scheme, SyncMode sync,
                              std::size_t tile_cols, std::size_t elem_bytes,
                              const PimTopology& topo, std::size_t core_id) {
  if (threads < 1 || threads > topo.threads_per_core || threads > kMaxThreadsPerCore) {
    throw PreconditionError("threads per core must be in [1, " +
                            std::to_string(std::min(topo.threads_per_core, kMaxThreadsPerCore)) +
                            "], got " + std::to_string(threads));
  }
  if (!scheme_matches_format(scheme, slice.format())) {
    throw PreconditionError(std::string("scheme ") + std::string(to_string(scheme)) +
                            " does not apply to " + std::string(to_string(slice.format())));
  }
  ThreadPlan plan;
  plan.threads = partition_chunk(slice.rowptr(), core, threads, scheme);
  plan.splits = split_stats(plan.threads);
  if (sync == SyncMode::kCoarseLock) {
    plan.locked_rows = plan.splits.rows;
  } else {
    plan.scratch_slots = plan.splits.boundaries;
  }
  plan.scratchpad_bytes = scratchpad_bytes(topo, threads, tile_cols, elem_bytes, plan.scratch_slots);
  if (plan.scratchpad_bytes > topo.scratchpad_capacity) {
    throw ScratchpadError(core_id, plan.scratchpad_bytes, topo.scratchpad_capacity,
                          "core " + std::to_string(core_id) + " needs " +
                              std::to_string(plan.scratchpad_bytes) + " scratchpad bytes, capacity " +
                              std::to_string(topo.scratchpad_capacity));
  }
  return plan;
}

}  // namespace pimgnn::paf
