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

#include <cstdint>
#include <utility>

#include "pimgnn/error.h"
#include "pimgnn/matrix.h"

namespace pimgnn::arith {

// Accumulation policies shared by every kernel that has to agree bit for bit
// with the reference product.

struct IntAcc {
  using type = std::int64_t;

  static void fma(type& acc, double a, double b) {
    type prod;
    if (__builtin_mul_overflow(static_cast<type>(a), static_cast<type>(b), &prod) ||
        __builtin_add_overflow(acc, prod, &acc)) {
      throw OverflowError("integer accumulation exceeds 64-bit accumulator");
    }
  }
  static void add(type& acc, type v) {
    if (__builtin_add_overflow(acc, v, &acc)) {
      throw OverflowError("integer accumulation exceeds 64-bit accumulator");
    }
  }
  static double store(ValueKind kind, type v) { return narrow(kind, v); }
};

struct FloatAcc {
  using type = double;

  static void fma(type& acc, double a, double b) { acc += a * b; }
  static void add(type& acc, type v) { acc += v; }
  static double store(ValueKind kind, type v) { return narrow(kind, v); }
};

template <class F>
decltype(auto) with_accumulator(ValueKind kind, F&& f) {
  if (is_integer(kind)) return std::forward<F>(f)(IntAcc{});
  return std::forward<F>(f)(FloatAcc{});
}

}  // namespace pimgnn::arith
