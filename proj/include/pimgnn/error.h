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
#include <stdexcept>
#include <string>

namespace pimgnn {

// Root of every error the library raises.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input file. `line()` is 1-based, 0 when unknown.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

// Integer result outside the accumulator or the target value kind.
class OverflowError : public Error {
 public:
  using Error::Error;
};

// Invalid PaF configuration or topology (geometry, divisibility, ranges).
class ConfigError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Per-core bank footprint of a plan.
struct BankUsage {
  std::uint64_t sparse_bytes = 0;
  std::uint64_t feature_bytes = 0;
  std::uint64_t output_bytes = 0;
  std::uint64_t total() const { return sparse_bytes + feature_bytes + output_bytes; }
};

class CapacityError : public Error {
 public:
  CapacityError(std::size_t core, const BankUsage& usage, std::uint64_t capacity,
                const std::string& what)
      : Error(what), core_(core), usage_(usage), capacity_(capacity) {}

  // Global index of the first offending core.
  std::size_t core() const { return core_; }
  const BankUsage& usage() const { return usage_; }
  std::uint64_t capacity() const { return capacity_; }

 private:
  std::size_t core_;
  BankUsage usage_;
  std::uint64_t capacity_;
};

class ScratchpadError : public Error {
 public:
  ScratchpadError(std::size_t core, std::uint64_t required, std::uint64_t capacity,
                  const std::string& what)
      : Error(what), core_(core), required_(required), capacity_(capacity) {}
  std::size_t core() const { return core_; }
  std::uint64_t required() const { return required_; }
  std::uint64_t capacity() const { return capacity_; }

 private:
  std::size_t core_;
  std::uint64_t required_;
  std::uint64_t capacity_;
};

}  // namespace pimgnn
