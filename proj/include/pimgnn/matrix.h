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

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace pimgnn {

// Element type of matrices as stored in PIM banks. Values are carried on the
// host as doubles: integer kinds always hold exact integers within the kind's
// range, Float32 results are rounded to binary32 whenever they are produced.
enum class ValueKind : std::uint8_t { kInt32, kInt16, kInt8, kFloat32 };

std::size_t elem_bytes(ValueKind kind);
bool is_integer(ValueKind kind);
std::int64_t kind_min(ValueKind kind);
std::int64_t kind_max(ValueKind kind);
std::string_view to_string(ValueKind kind);
ValueKind parse_value_kind(std::string_view name);

// Checked narrowing of an accumulator value into `kind`. Throws OverflowError
// for integer kinds when `v` is out of range.
double narrow(ValueKind kind, std::int64_t v);
double narrow(ValueKind kind, double v);

enum class SparseFormat : std::uint8_t { kCSR, kCOO };

std::string_view to_string(SparseFormat format);
SparseFormat parse_format(std::string_view name);

// Sparse matrix with entries ordered by (row, col). The row-offset index is
// kept for both formats; `format()` selects which arrays exist on the PIM side
// (rowptr for CSR, rowind for COO), which only matters for byte accounting
// and scheme validation.
class SparseMatrix {
 public:
  SparseMatrix() = default;

  // Throws PreconditionError unless entries are sorted by (row, col), unique
  // and in range.
  static SparseMatrix from_coo(std::size_t n_rows, std::size_t n_cols, ValueKind kind,
                               std::vector<std::uint32_t> rowind,
                               std::vector<std::uint32_t> colind, std::vector<double> values);
  static SparseMatrix from_csr(std::size_t n_rows, std::size_t n_cols, ValueKind kind,
                               std::vector<std::uint64_t> rowptr,
                               std::vector<std::uint32_t> colind, std::vector<double> values);
  static SparseMatrix identity(std::size_t n, ValueKind kind, double value = 1.0);

  std::size_t n_rows() const { return n_rows_; }
  std::size_t n_cols() const { return n_cols_; }
  std::size_t nnz() const { return colind_.size(); }
  SparseFormat format() const { return format_; }
  ValueKind kind() const { return kind_; }

  std::span<const std::uint64_t> rowptr() const { return rowptr_; }
  // Empty for CSR matrices.
  std::span<const std::uint32_t> rowind() const { return rowind_; }
  std::span<const std::uint32_t> colind() const { return colind_; }
  std::span<const double> values() const { return values_; }

  std::size_t row_nnz(std::size_t row) const { return rowptr_[row + 1] - rowptr_[row]; }
  // Row that holds nonzero `e`. Precondition: e < nnz().
  std::size_t row_of(std::uint64_t e) const;

  SparseMatrix with_format(SparseFormat format) const;
  SparseMatrix with_kind(ValueKind kind) const;

  friend bool operator==(const SparseMatrix&, const SparseMatrix&) = default;

 private:
  std::size_t n_rows_ = 0;
  std::size_t n_cols_ = 0;
  SparseFormat format_ = SparseFormat::kCSR;
  ValueKind kind_ = ValueKind::kInt32;
  std::vector<std::uint64_t> rowptr_{0};
  std::vector<std::uint32_t> rowind_;
  std::vector<std::uint32_t> colind_;
  std::vector<double> values_;
};

SparseMatrix coo_to_csr(const SparseMatrix& m);
SparseMatrix csr_to_coo(const SparseMatrix& m);

class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t n_rows, std::size_t n_cols, ValueKind kind);
  // Throws DimensionError when values.size() != n_rows * n_cols.
  DenseMatrix(std::size_t n_rows, std::size_t n_cols, ValueKind kind, std::vector<double> values);

  static DenseMatrix identity(std::size_t n, ValueKind kind);

  std::size_t n_rows() const { return n_rows_; }
  std::size_t n_cols() const { return n_cols_; }
  ValueKind kind() const { return kind_; }

  double& at(std::size_t r, std::size_t c) { return values_[r * n_cols_ + c]; }
  double at(std::size_t r, std::size_t c) const { return values_[r * n_cols_ + c]; }
  std::span<double> row(std::size_t r) { return {values_.data() + r * n_cols_, n_cols_}; }
  std::span<const double> row(std::size_t r) const {
    return {values_.data() + r * n_cols_, n_cols_};
  }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  // Columns [begin, end) as a new matrix.
  DenseMatrix columns(std::size_t begin, std::size_t end) const;

  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t n_rows_ = 0;
  std::size_t n_cols_ = 0;
  ValueKind kind_ = ValueKind::kInt32;
  std::vector<double> values_;
};

DenseMatrix to_dense(const SparseMatrix& m);

// Reference A * F. Integer kinds accumulate in int64 (overflow-checked) and
// narrow into the kind of `f`; Float32 accumulates in double and rounds.
DenseMatrix dense_spmm_oracle(const SparseMatrix& a, const DenseMatrix& f);

struct DegreeStats {
  double min_nnz = 0;
  double max_nnz = 0;
  double avg_nnz = 0;
  double std_nnz = 0;  // population
};

DegreeStats degree_stats(const SparseMatrix& m);

}  // namespace pimgnn
