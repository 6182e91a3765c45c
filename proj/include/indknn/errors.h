// Copyright 2026 The indknn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef INDKNN_ERRORS_H_
#define INDKNN_ERRORS_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace indknn {

// Base of everything this library throws on bad input or broken state.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  // Stable machine-readable category, e.g. "ingestion" or "format".
  virtual const char* kind() const noexcept { return "error"; }
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "invalid_argument"; }
};

// A row of input data could not be turned into an example.
class IngestionError : public Error {
 public:
  IngestionError(std::size_t row, const std::string& what)
      : Error("row " + std::to_string(row) + ": " + what), row_(row) {}
  std::size_t row() const noexcept { return row_; }
  const char* kind() const noexcept override { return "ingestion"; }

 private:
  std::size_t row_;
};

// A file does not match its declared layout.
class FormatError : public Error {
 public:
  FormatError(std::size_t offset, const std::string& what)
      : Error("byte " + std::to_string(offset) + ": " + what),
        offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }
  const char* kind() const noexcept override { return "format"; }

 private:
  std::size_t offset_;
};

// Internal state broke a guarantee the engine relies on. Never recoverable.
class InvariantViolation : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "invariant_violation"; }
};

}  // namespace indknn

#endif  // INDKNN_ERRORS_H_
