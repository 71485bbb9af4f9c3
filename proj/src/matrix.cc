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

#include "pimgnn/matrix.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "pimgnn/arith.h"
#include "pimgnn/error.h"

namespace pimgnn {

std::size_t elem_bytes(ValueKind kind) {
  switch (kind) {
    case ValueKind::kInt32: return 4;
    case ValueKind::kInt16: return 2;
    case ValueKind::kInt8: return 1;
    case ValueKind::kFloat32: return 4;
  }
  return 4;
}

bool is_integer(ValueKind kind) { return kind != ValueKind::kFloat32; }

std::int64_t kind_min(ValueKind kind) {
  switch (kind) {
    case ValueKind::kInt16: return std::numeric_limits<std::int16_t>::min();
    case ValueKind::kInt8: return std::numeric_limits<std::int8_t>::min();
    default: return std::numeric_limits<std::int32_t>::min();
  }
}

std::int64_t kind_max(ValueKind kind) {
  switch (kind) {
    case ValueKind::kInt16: return std::numeric_limits<std::int16_t>::max();
    case ValueKind::kInt8: return std::numeric_limits<std::int8_t>::max();
    default: return std::numeric_limits<std::int32_t>::max();
  }
}

std::string_view to_string(ValueKind kind) {
  switch (kind) {
    case ValueKind::kInt32: return "int32";
    case ValueKind::kInt16: return "int16";
    case ValueKind::kInt8: return "int8";
    case ValueKind::kFloat32: return "fp32";
  }
  return "int32";
}

ValueKind parse_value_kind(std::string_view name) {
  if (name == "int32") return ValueKind::kInt32;
  if (name == "int16") return ValueKind::kInt16;
  if (name == "int8") return ValueKind::kInt8;
  if (name == "fp32" || name == "float32") return ValueKind::kFloat32;
  throw PreconditionError("unknown value kind '" + std::string(name) + "'");
}

double narrow(ValueKind kind, std::int64_t v) {
  if (!is_integer(kind)) return static_cast<float>(v);
  if (v < kind_min(kind) || v > kind_max(kind)) {
    throw OverflowError("value " + std::to_string(v) + " does not fit " +
                        std::string(to_string(kind)));
  }
  return static_cast<double>(v);
}

double narrow(ValueKind kind, double v) {
  if (is_integer(kind)) return narrow(kind, static_cast<std::int64_t>(v));
  return static_cast<float>(v);
}

std::string_view to_string(SparseFormat format) {
  return format == SparseFormat::kCSR ? "csr" : "coo";
}

SparseFormat parse_format(std::string_view name) {
  if (name == "csr" || name == "CSR") return SparseFormat::kCSR;
  if (name == "coo" || name == "COO") return SparseFormat::kCOO;
  throw PreconditionError("unknown sparse format '" + std::string(name) + "'");
}

namespace {

void check_values(ValueKind kind, std::span<const double> values) {
  if (!is_integer(kind)) return;
  for (double v : values) {
    if (v != std::floor(v) || v < static_cast<double>(kind_min(kind)) ||
        v > static_cast<double>(kind_max(kind))) {
      throw PreconditionError("value " + std::to_string(v) + " is not a valid " +
                              std::string(to_string(kind)));
    }
  }
}

}  // namespace

SparseMatrix SparseMatrix::from_coo(std::size_t n_rows, std::size_t n_cols, ValueKind kind,
                                    std::vector<std::uint32_t> rowind,
                                    std::vector<std::uint32_t> colind,
                                    std::vector<double> values) {
  if (rowind.size() != colind.size() || rowind.size() != values.size()) {
    throw PreconditionError("COO arrays differ in length");
  }
  for (std::size_t e = 0; e < rowind.size(); ++e) {
    if (rowind[e] >= n_rows || colind[e] >= n_cols) {
      throw PreconditionError("COO entry " + std::to_string(e) + " out of range");
    }
    if (e > 0 && (rowind[e] < rowind[e - 1] ||
                  (rowind[e] == rowind[e - 1] && colind[e] <= colind[e - 1]))) {
      throw PreconditionError("COO entries not sorted by (row, col) at " + std::to_string(e));
    }
  }
  check_values(kind, values);

  SparseMatrix m;
  m.n_rows_ = n_rows;
  m.n_cols_ = n_cols;
  m.format_ = SparseFormat::kCOO;
  m.kind_ = kind;
  m.rowptr_.assign(n_rows + 1, 0);
  for (std::uint32_t r : rowind) ++m.rowptr_[r + 1];
  for (std::size_t r = 0; r < n_rows; ++r) m.rowptr_[r + 1] += m.rowptr_[r];
  m.rowind_ = std::move(rowind);
  m.colind_ = std::move(colind);
  m.values_ = std::move(values);
  return m;
}

SparseMatrix SparseMatrix::from_csr(std::size_t n_rows, std::size_t n_cols, ValueKind kind,
                                    std::vector<std::uint64_t> rowptr,
                                    std::vector<std::uint32_t> colind,
                                    std::vector<double> values) {
  if (rowptr.size() != n_rows + 1 || rowptr.front() != 0) {
    throw PreconditionError("CSR rowptr must have n_rows+1 entries starting at 0");
  }
  if (colind.size() != values.size() || rowptr.back() != colind.size()) {
    throw PreconditionError("CSR rowptr[n_rows] must equal nnz");
  }
  for (std::size_t r = 0; r < n_rows; ++r) {
    if (rowptr[r + 1] < rowptr[r]) throw PreconditionError("CSR rowptr is decreasing");
    for (std::uint64_t e = rowptr[r]; e < rowptr[r + 1]; ++e) {
      if (colind[e] >= n_cols) throw PreconditionError("CSR column index out of range");
      if (e > rowptr[r] && colind[e] <= colind[e - 1]) {
        throw PreconditionError("CSR columns not strictly increasing in row " +
                                std::to_string(r));
      }
    }
  }
  check_values(kind, values);

  SparseMatrix m;
  m.n_rows_ = n_rows;
  m.n_cols_ = n_cols;
  m.format_ = SparseFormat::kCSR;
  m.kind_ = kind;
  m.rowptr_ = std::move(rowptr);
  m.colind_ = std::move(colind);
  m.values_ = std::move(values);
  return m;
}

SparseMatrix SparseMatrix::identity(std::size_t n, ValueKind kind, double value) {
  std::vector<std::uint64_t> rowptr(n + 1);
  std::vector<std::uint32_t> colind(n);
  for (std::size_t i = 0; i < n; ++i) {
    rowptr[i + 1] = i + 1;
    colind[i] = static_cast<std::uint32_t>(i);
  }
  return from_csr(n, n, kind, std::move(rowptr), std::move(colind),
                  std::vector<double>(n, value));
}

std::size_t SparseMatrix::row_of(std::uint64_t e) const {
  auto it = std::upper_bound(rowptr_.begin(), rowptr_.end(), e);
  return static_cast<std::size_t>(it - rowptr_.begin()) - 1;
}

SparseMatrix SparseMatrix::with_format(SparseFormat format) const {
  if (format == format_) return *this;
  return format == SparseFormat::kCSR ? coo_to_csr(*this) : csr_to_coo(*this);
}

SparseMatrix SparseMatrix::with_kind(ValueKind kind) const {
  check_values(kind, values_);
  SparseMatrix m = *this;
  m.kind_ = kind;
  return m;
}

SparseMatrix coo_to_csr(const SparseMatrix& m) {
  if (m.format() == SparseFormat::kCSR) return m;
  return SparseMatrix::from_csr(
      m.n_rows(), m.n_cols(), m.kind(),
      std::vector<std::uint64_t>(m.rowptr().begin(), m.rowptr().end()),
      std::vector<std::uint32_t>(m.colind().begin(), m.colind().end()),
      std::vector<double>(m.values().begin(), m.values().end()));
}

SparseMatrix csr_to_coo(const SparseMatrix& m) {
  if (m.format() == SparseFormat::kCOO) return m;
  std::vector<std::uint32_t> rowind(m.nnz());
  for (std::size_t r = 0; r < m.n_rows(); ++r) {
    for (std::uint64_t e = m.rowptr()[r]; e < m.rowptr()[r + 1]; ++e) {
      rowind[e] = static_cast<std::uint32_t>(r);
    }
  }
  return SparseMatrix::from_coo(m.n_rows(), m.n_cols(), m.kind(), std::move(rowind),
                                std::vector<std::uint32_t>(m.colind().begin(), m.colind().end()),
                                std::vector<double>(m.values().begin(), m.values().end()));
}

DenseMatrix::DenseMatrix(std::size_t n_rows, std::size_t n_cols, ValueKind kind)
    : n_rows_(n_rows), n_cols_(n_cols), kind_(kind), values_(n_rows * n_cols, 0.0) {}

DenseMatrix::DenseMatrix(std::size_t n_rows, std::size_t n_cols, ValueKind kind,
                         std::vector<double> values)
    : n_rows_(n_rows), n_cols_(n_cols), kind_(kind), values_(std::move(values)) {
  if (values_.size() != n_rows * n_cols) {
    throw DimensionError("dense values length " + std::to_string(values_.size()) +
                         " != " + std::to_string(n_rows) + "x" + std::to_string(n_cols));
  }
  check_values(kind, values_);
}

DenseMatrix DenseMatrix::identity(std::size_t n, ValueKind kind) {
  DenseMatrix m(n, n, kind);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::columns(std::size_t begin, std::size_t end) const {
  if (begin > end || end > n_cols_) throw DimensionError("column range out of bounds");
  DenseMatrix out(n_rows_, end - begin, kind_);
  for (std::size_t r = 0; r < n_rows_; ++r) {
    std::copy(values_.begin() + r * n_cols_ + begin, values_.begin() + r * n_cols_ + end,
              out.row(r).begin());
  }
  return out;
}

DenseMatrix to_dense(const SparseMatrix& m) {
  DenseMatrix out(m.n_rows(), m.n_cols(), m.kind());
  for (std::size_t r = 0; r < m.n_rows(); ++r) {
    for (std::uint64_t e = m.rowptr()[r]; e < m.rowptr()[r + 1]; ++e) {
      out.at(r, m.colind()[e]) = m.values()[e];
    }
  }
  return out;
}

DenseMatrix dense_spmm_oracle(const SparseMatrix& a, const DenseMatrix& f) {
  if (a.n_cols() != f.n_rows()) {
    throw DimensionError("spmm: A is " + std::to_string(a.n_rows()) + "x" +
                         std::to_string(a.n_cols()) + ", F has " + std::to_string(f.n_rows()) +
                         " rows");
  }
  const std::size_t k = f.n_cols();
  DenseMatrix out(a.n_rows(), k, f.kind());
  arith::with_accumulator(f.kind(), [&](auto acc_policy) {
    using Policy = decltype(acc_policy);
    std::vector<typename Policy::type> acc(k);
    for (std::size_t r = 0; r < a.n_rows(); ++r) {
      std::fill(acc.begin(), acc.end(), typename Policy::type{});
      for (std::uint64_t e = a.rowptr()[r]; e < a.rowptr()[r + 1]; ++e) {
        const double w = a.values()[e];
        auto frow = f.row(a.colind()[e]);
        for (std::size_t c = 0; c < k; ++c) Policy::fma(acc[c], w, frow[c]);
      }
      auto orow = out.row(r);
      for (std::size_t c = 0; c < k; ++c) orow[c] = Policy::store(f.kind(), acc[c]);
    }
  });
  return out;
}

DegreeStats degree_stats(const SparseMatrix& m) {
  DegreeStats s;
  if (m.n_rows() == 0) return s;
  double sum = 0;
  s.min_nnz = static_cast<double>(m.row_nnz(0));
  s.max_nnz = s.min_nnz;
  for (std::size_t r = 0; r < m.n_rows(); ++r) {
    const double d = static_cast<double>(m.row_nnz(r));
    s.min_nnz = std::min(s.min_nnz, d);
    s.max_nnz = std::max(s.max_nnz, d);
    sum += d;
  }
  s.avg_nnz = sum / static_cast<double>(m.n_rows());
  double var = 0;
  for (std::size_t r = 0; r < m.n_rows(); ++r) {
    const double d = static_cast<double>(m.row_nnz(r)) - s.avg_nnz;
    var += d * d;
  }
  s.std_nnz = std::sqrt(var / static_cast<double>(m.n_rows()));
  return s;
}

}  // namespace pimgnn
