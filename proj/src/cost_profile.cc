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

#include "pimgnn/cost_profile.h"

#include <algorithm>
#include <cmath>

#include "json.hpp"
#include "pimgnn/error.h"

namespace pimgnn {

SizeTable::SizeTable(std::vector<Point> points) : points_(std::move(points)) {
  if (points_.empty()) throw PreconditionError("size table is empty");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!(points_[i].first > 0) || !(points_[i].second > 0)) {
      throw PreconditionError("size table keys and values must be positive");
    }
    if (i > 0 && !(points_[i].first > points_[i - 1].first)) {
      throw PreconditionError("size table keys must be strictly increasing");
    }
  }
}

double SizeTable::lookup(double size) const {
  if (points_.empty()) throw PreconditionError("lookup in empty size table");
  if (size <= points_.front().first) return points_.front().second;
  if (size >= points_.back().first) return points_.back().second;
  auto hi = std::lower_bound(points_.begin(), points_.end(), size,
                             [](const Point& p, double s) { return p.first < s; });
  if (hi->first == size) return hi->second;
  auto lo = hi - 1;
  // Closer in log2 space: log q - log a < log b - log q  <=>  q^2 < a*b.
  const long double q = size;
  const long double ab = static_cast<long double>(lo->first) * hi->first;
  return q * q <= ab ? lo->second : hi->second;
}

void CostProfile::validate() const {
  for (const SizeTable* t : {&host_pim_bw, &pim_host_bw, &host_bw, &fma_core, &add_host}) {
    if (t->empty()) throw PreconditionError("cost profile has an empty table");
  }
  if (!(host_gemm_ops_per_s > 0) || !(pim_peak_ops_per_s > 0) || !(fp32_kernel_penalty > 0)) {
    throw PreconditionError("cost profile scalars must be positive");
  }
}

namespace {

// Geometric sizes from lo to hi with `per_octave` points per doubling,
// rounded to integers and deduplicated.
std::vector<double> geometric(double lo, double hi, int per_octave) {
  std::vector<double> out;
  const int steps = static_cast<int>(std::lround(std::log2(hi / lo) * per_octave));
  for (int i = 0; i <= steps; ++i) {
    const double v = std::round(lo * std::exp2(static_cast<double>(i) / per_octave));
    if (out.empty() || v > out.back()) out.push_back(v);
  }
  return out;
}

template <class F>
SizeTable sample(const std::vector<double>& keys, F&& f) {
  std::vector<SizeTable::Point> pts;
  pts.reserve(keys.size());
  for (double k : keys) pts.emplace_back(k, f(k));
  return SizeTable(std::move(pts));
}

}  // namespace

CostProfile default_upmem_profile() {
  CostProfile p;
  // Parallel rank transfers: a per-transfer setup cost amortized over bytes
  // per core, saturating near the bus limit.
  p.host_pim_bw = sample(geometric(256, 64.0 * (1 << 20), 4),
                         [](double m) { return 6.8 * m / (m + 8192.0); });
  p.pim_host_bw = sample(geometric(256, 64.0 * (1 << 20), 4),
                         [](double m) { return 4.6 * m / (m + 8192.0); });
  p.host_bw = sample(geometric(4, 64.0 * 1024, 4),
                     [](double m) { return 10.0 * m / (m + 64.0); });
  // One thread issues an instruction every 11 cycles at 350 MHz; a nonzero
  // costs a fixed decode/fetch overhead plus an int32 multiply-add per chunk
  // element.
  p.fma_core = sample(geometric(1, 4096, 4),
                      [](double c) { return (350e6 / 11.0) / (60.0 + 34.0 * c); });
  p.add_host = sample(geometric(1, 8192, 4),
                      [](double c) { return 2.0e9 * c / (c + 8.0); });
  return p;
}

CostProfile constant_profile(double host_pim_gbps, double pim_host_gbps, double host_gbps,
                             double fma_nnz_per_s, double add_per_s) {
  CostProfile p;
  p.host_pim_bw = SizeTable({{1.0, host_pim_gbps}});
  p.pim_host_bw = SizeTable({{1.0, pim_host_gbps}});
  p.host_bw = SizeTable({{1.0, host_gbps}});
  p.fma_core = SizeTable({{1.0, fma_nnz_per_s}});
  p.add_host = SizeTable({{1.0, add_per_s}});
  return p;
}

namespace {

nlohmann::json table_json(const SizeTable& t) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& [k, v] : t.points()) arr.push_back({k, v});
  return arr;
}

SizeTable table_from(const nlohmann::json& j, const char* name) {
  if (!j.contains(name)) throw ParseError(0, std::string("profile missing table '") + name + "'");
  std::vector<SizeTable::Point> pts;
  for (const auto& e : j.at(name)) {
    if (!e.is_array() || e.size() != 2) {
      throw ParseError(0, std::string("table '") + name + "' entries must be [size, value]");
    }
    pts.emplace_back(e[0].get<double>(), e[1].get<double>());
  }
  return SizeTable(std::move(pts));
}

}  // namespace

std::string profile_to_json(const CostProfile& p) {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["host_pim_bw_gbps"] = table_json(p.host_pim_bw);
  j["pim_host_bw_gbps"] = table_json(p.pim_host_bw);
  j["host_bw_gbps"] = table_json(p.host_bw);
  j["fma_core_nnz_per_s"] = table_json(p.fma_core);
  j["add_host_per_s"] = table_json(p.add_host);
  j["host_gemm_ops_per_s"] = p.host_gemm_ops_per_s;
  j["pim_peak_ops_per_s"] = p.pim_peak_ops_per_s;
  j["fp32_kernel_penalty"] = p.fp32_kernel_penalty;
  return j.dump(2);
}

CostProfile profile_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(0, std::string("profile: ") + e.what());
  }
  CostProfile p;
  try {
    p.host_pim_bw = table_from(j, "host_pim_bw_gbps");
    p.pim_host_bw = table_from(j, "pim_host_bw_gbps");
    p.host_bw = table_from(j, "host_bw_gbps");
    p.fma_core = table_from(j, "fma_core_nnz_per_s");
    p.add_host = table_from(j, "add_host_per_s");
    p.host_gemm_ops_per_s = j.value("host_gemm_ops_per_s", p.host_gemm_ops_per_s);
    p.pim_peak_ops_per_s = j.value("pim_peak_ops_per_s", p.pim_peak_ops_per_s);
    p.fp32_kernel_penalty = j.value("fp32_kernel_penalty", p.fp32_kernel_penalty);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(0, std::string("profile: ") + e.what());
  }
  p.validate();
  return p;
}

}  // namespace pimgnn
