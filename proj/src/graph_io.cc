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

#include "pimgnn/graph_io.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "pimgnn/error.h"

namespace pimgnn {

namespace {

struct Triple {
  std::uint32_t row;
  std::uint32_t col;
  double value;
};

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream is(line);
  std::vector<std::string> out;
  for (std::string tok; is >> tok;) out.push_back(tok);
  return out;
}

template <class T>
T parse_number(const std::string& tok, std::size_t line, const char* what) {
  T v{};
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw ParseError(line, std::string("non-numeric ") + what + " '" + tok + "'");
  }
  return v;
}

SparseMatrix assemble(std::size_t n_rows, std::size_t n_cols, ValueKind kind,
                      std::vector<Triple> entries) {
  std::sort(entries.begin(), entries.end(), [](const Triple& a, const Triple& b) {
    return std::tie(a.row, a.col) < std::tie(b.row, b.col);
  });
  std::vector<std::uint32_t> rowind;
  std::vector<std::uint32_t> colind;
  std::vector<double> values;
  for (const Triple& t : entries) {
    if (!rowind.empty() && rowind.back() == t.row && colind.back() == t.col) {
      values.back() += t.value;
      continue;
    }
    rowind.push_back(t.row);
    colind.push_back(t.col);
    values.push_back(t.value);
  }
  return SparseMatrix::from_coo(n_rows, n_cols, kind, std::move(rowind), std::move(colind),
                                std::move(values));
}

}  // namespace

SparseMatrix read_matrix_market(std::istream& in, std::optional<ValueKind> kind) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw ParseError(1, "empty file");
  ++line_no;
  const auto header = split_ws(lower(line));
  if (header.size() != 5 || header[0] != "%%matrixmarket" || header[1] != "matrix" ||
      header[2] != "coordinate") {
    throw ParseError(line_no, "expected '%%MatrixMarket matrix coordinate <field> <symmetry>'");
  }
  const std::string& field = header[3];
  const std::string& symmetry = header[4];
  if (field != "integer" && field != "real" && field != "pattern") {
    throw ParseError(line_no, "unsupported field '" + field + "'");
  }
  if (symmetry != "general" && symmetry != "symmetric") {
    throw ParseError(line_no, "unsupported symmetry '" + symmetry + "'");
  }
  const bool pattern = field == "pattern";
  const bool symmetric = symmetry == "symmetric";
  const ValueKind target = kind.value_or(field == "real" ? ValueKind::kFloat32 : ValueKind::kInt32);

  std::size_t n_rows = 0, n_cols = 0, declared = 0;
  bool have_size = false;
  std::vector<Triple> entries;
  std::size_t seen = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto toks = split_ws(line);
    if (toks.empty() || toks[0][0] == '%') continue;
    if (!have_size) {
      if (toks.size() != 3) throw ParseError(line_no, "expected '<rows> <cols> <nnz>'");
      n_rows = parse_number<std::size_t>(toks[0], line_no, "row count");
      n_cols = parse_number<std::size_t>(toks[1], line_no, "column count");
      declared = parse_number<std::size_t>(toks[2], line_no, "entry count");
      if (symmetric && n_rows != n_cols) throw ParseError(line_no, "symmetric matrix not square");
      have_size = true;
      entries.reserve(symmetric ? 2 * declared : declared);
      continue;
    }
    if (toks.size() != (pattern ? 2u : 3u)) {
      throw ParseError(line_no, pattern ? "expected '<row> <col>'" : "expected '<row> <col> <value>'");
    }
    const auto i = parse_number<std::int64_t>(toks[0], line_no, "row index");
    const auto j = parse_number<std::int64_t>(toks[1], line_no, "column index");
    if (i < 1 || static_cast<std::size_t>(i) > n_rows) {
      throw ParseError(line_no, "row index " + toks[0] + " out of range [1, " +
                                    std::to_string(n_rows) + "]");
    }
    if (j < 1 || static_cast<std::size_t>(j) > n_cols) {
      throw ParseError(line_no, "column index " + toks[1] + " out of range [1, " +
                                    std::to_string(n_cols) + "]");
    }
    double v = 1.0;
    if (!pattern) {
      v = field == "integer" ? static_cast<double>(parse_number<std::int64_t>(toks[2], line_no, "value"))
                             : parse_number<double>(toks[2], line_no, "value");
      if (is_integer(target) && v != std::floor(v)) {
        throw ParseError(line_no, "non-integral value '" + toks[2] + "' for integer kind");
      }
    }
    const auto r = static_cast<std::uint32_t>(i - 1);
    const auto c = static_cast<std::uint32_t>(j - 1);
    entries.push_back({r, c, v});
    if (symmetric && r != c) entries.push_back({c, r, v});
    ++seen;
  }
  if (!have_size) throw ParseError(line_no, "missing size line");
  if (seen != declared) {
    throw ParseError(line_no, "declared " + std::to_string(declared) + " entries, found " +
                                  std::to_string(seen));
  }
  SparseMatrix m = assemble(n_rows, n_cols, ValueKind::kFloat32, std::move(entries));
  try {
    return m.with_kind(target);
  } catch (const PreconditionError& e) {
    throw ParseError(0, std::string("summed values do not fit: ") + e.what());
  }
}

SparseMatrix load_matrix_market(const std::filesystem::path& path, std::optional<ValueKind> kind) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  return read_matrix_market(in, kind);
}

void write_matrix_market(std::ostream& out, const SparseMatrix& m) {
  out << "%%MatrixMarket matrix coordinate " << (is_integer(m.kind()) ? "integer" : "real")
      << " general\n";
  out << m.n_rows() << ' ' << m.n_cols() << ' ' << m.nnz() << '\n';
  std::ostringstream buf;
  buf.precision(17);
  for (std::size_t r = 0; r < m.n_rows(); ++r) {
    for (std::uint64_t e = m.rowptr()[r]; e < m.rowptr()[r + 1]; ++e) {
      buf << r + 1 << ' ' << m.colind()[e] + 1 << ' ';
      if (is_integer(m.kind())) {
        buf << static_cast<std::int64_t>(m.values()[e]);
      } else {
        buf << m.values()[e];
      }
      buf << '\n';
    }
  }
  out << buf.str();
}

void save_matrix_market(const std::filesystem::path& path, const SparseMatrix& m) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  write_matrix_market(out, m);
}

std::string_view to_string(GnnModelKind kind) {
  switch (kind) {
    case GnnModelKind::kGCN: return "gcn";
    case GnnModelKind::kGIN: return "gin";
    case GnnModelKind::kSAGE: return "sage";
  }
  return "gcn";
}

GnnModelKind parse_model_kind(std::string_view name) {
  const std::string n = lower(std::string(name));
  if (n == "gcn") return GnnModelKind::kGCN;
  if (n == "gin") return GnnModelKind::kGIN;
  if (n == "sage") return GnnModelKind::kSAGE;
  throw PreconditionError("unknown GNN model '" + std::string(name) + "'");
}

SparseMatrix normalize_adjacency(const SparseMatrix& m, GnnModelKind model, double eps,
                                 std::int64_t scale) {
  if (m.n_rows() != m.n_cols()) {
    throw DimensionError("adjacency must be square, got " + std::to_string(m.n_rows()) + "x" +
                         std::to_string(m.n_cols()));
  }
  if (scale < 1) throw PreconditionError("fixed-point scale must be >= 1");
  const std::size_t n = m.n_rows();
  const bool integer = is_integer(m.kind());
  const auto encode = [&](double w) {
    return integer ? static_cast<double>(std::llround(w * static_cast<double>(scale))) : w;
  };
  auto rowptr = m.rowptr();
  auto colind = m.colind();
  auto values = m.values();

  std::vector<std::uint32_t> rowind;
  std::vector<std::uint32_t> cols;
  std::vector<double> vals;
  rowind.reserve(m.nnz() + n);
  cols.reserve(m.nnz() + n);
  vals.reserve(m.nnz() + n);
  const auto emit = [&](std::size_t r, std::uint32_t c, double v) {
    rowind.push_back(static_cast<std::uint32_t>(r));
    cols.push_back(c);
    vals.push_back(v);
  };

  switch (model) {
    case GnnModelKind::kGCN: {
      std::vector<double> deg(n, 0.0);
      for (std::size_t r = 0; r < n; ++r) {
        for (std::uint64_t e = rowptr[r]; e < rowptr[r + 1]; ++e) {
          if (colind[e] != r) deg[r] += 1.0;
        }
      }
      for (std::size_t r = 0; r < n; ++r) {
        bool diag_done = false;
        for (std::uint64_t e = rowptr[r]; e < rowptr[r + 1]; ++e) {
          const std::uint32_t c = colind[e];
          if (!diag_done && c >= r) {
            emit(r, static_cast<std::uint32_t>(r), encode(1.0 / (deg[r] + 1.0)));
            diag_done = true;
          }
          if (c == r) continue;
          emit(r, c, encode(1.0 / std::sqrt((deg[r] + 1.0) * (deg[c] + 1.0))));
        }
        if (!diag_done) emit(r, static_cast<std::uint32_t>(r), encode(1.0 / (deg[r] + 1.0)));
      }
      break;
    }
    case GnnModelKind::kSAGE: {
      for (std::size_t r = 0; r < n; ++r) {
        const double d = static_cast<double>(rowptr[r + 1] - rowptr[r]);
        for (std::uint64_t e = rowptr[r]; e < rowptr[r + 1]; ++e) emit(r, colind[e], encode(1.0 / d));
      }
      break;
    }
    case GnnModelKind::kGIN: {
      const double self = encode(1.0 + eps);
      const double unit = integer ? static_cast<double>(scale) : 1.0;
      for (std::size_t r = 0; r < n; ++r) {
        bool diag_done = false;
        for (std::uint64_t e = rowptr[r]; e < rowptr[r + 1]; ++e) {
          const std::uint32_t c = colind[e];
          if (!diag_done && c > r) {
            emit(r, static_cast<std::uint32_t>(r), self);
            diag_done = true;
          }
          if (c == r) {
            emit(r, c, values[e] * unit + self);
            diag_done = true;
          } else {
            emit(r, c, values[e] * unit);
          }
        }
        if (!diag_done) emit(r, static_cast<std::uint32_t>(r), self);
      }
      break;
    }
  }
  SparseMatrix out = SparseMatrix::from_coo(n, n, m.kind(), std::move(rowind), std::move(cols),
                                            std::move(vals));
  return out.with_format(m.format());
}

SparseMatrix generate_power_law(const SyntheticGraphSpec& spec) {
  const std::size_t n = spec.n_vertices;
  if (n < 2) throw PreconditionError("power-law graph needs at least 2 vertices");
  if (spec.exponent <= 1.0) throw PreconditionError("power-law exponent must exceed 1");
  std::mt19937_64 rng(spec.seed);

  std::vector<double> cdf(n);
  const double alpha = 1.0 / (spec.exponent - 1.0);
  double total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    total += std::pow(static_cast<double>(i + 1), -alpha);
    cdf[i] = total;
  }
  std::uniform_real_distribution<double> uni(0.0, total);
  const auto draw = [&] {
    const double u = uni(rng);
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    return static_cast<std::uint32_t>(std::min<std::size_t>(it - cdf.begin(), n - 1));
  };

  std::vector<std::uint32_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0u);
  std::shuffle(perm.begin(), perm.end(), rng);

  const auto target_edges =
      static_cast<std::size_t>(std::llround(static_cast<double>(n) * spec.avg_degree / 2.0));
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  edges.reserve(2 * target_edges);
  for (std::size_t e = 0; e < target_edges; ++e) {
    const std::uint32_t a = perm[draw()];
    const std::uint32_t b = perm[draw()];
    if (a == b) continue;
    edges.emplace_back(a, b);
    edges.emplace_back(b, a);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  std::vector<std::uint32_t> rowind(edges.size());
  std::vector<std::uint32_t> colind(edges.size());
  for (std::size_t e = 0; e < edges.size(); ++e) std::tie(rowind[e], colind[e]) = edges[e];
  std::vector<double> values(edges.size(), 1.0);
  return SparseMatrix::from_coo(n, n, ValueKind::kInt32, std::move(rowind), std::move(colind),
                                std::move(values))
      .with_format(SparseFormat::kCSR);
}

SparseMatrix generate_uniform(std::size_t n_rows, std::size_t n_cols, double density,
                              std::int64_t lo, std::int64_t hi, std::uint64_t seed,
                              ValueKind kind) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution present(density);
  std::uniform_int_distribution<std::int64_t> value(lo, hi);
  std::vector<std::uint64_t> rowptr(n_rows + 1, 0);
  std::vector<std::uint32_t> colind;
  std::vector<double> values;
  for (std::size_t r = 0; r < n_rows; ++r) {
    for (std::size_t c = 0; c < n_cols; ++c) {
      if (!present(rng)) continue;
      colind.push_back(static_cast<std::uint32_t>(c));
      values.push_back(static_cast<double>(value(rng)));
    }
    rowptr[r + 1] = colind.size();
  }
  return SparseMatrix::from_csr(n_rows, n_cols, kind, std::move(rowptr), std::move(colind),
                                std::move(values));
}

DenseMatrix generate_dense(std::size_t n_rows, std::size_t n_cols, std::int64_t lo,
                           std::int64_t hi, std::uint64_t seed, ValueKind kind) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::int64_t> value(lo, hi);
  std::vector<double> values(n_rows * n_cols);
  for (double& v : values) v = static_cast<double>(value(rng));
  return DenseMatrix(n_rows, n_cols, kind, std::move(values));
}

}  // namespace pimgnn
