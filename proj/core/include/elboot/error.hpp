// Copyright 2026 The elboot Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ELBOOT_ERROR_HPP_
#define ELBOOT_ERROR_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace elboot {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed corpus input. Carries the 1-based line number.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string &what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Input bytes are not valid UTF-8.
class EncodingError : public Error {
 public:
  EncodingError(std::size_t line, const std::string &what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Caller supplied an argument outside the accepted domain.
class InputError : public Error {
 public:
  using Error::Error;
};

// A workflow operation was requested from a state that does not allow it.
class TransitionError : public Error {
 public:
  using Error::Error;
};

// Store initialisation failed (duplicate mention ids and the like).
class InitError : public Error {
 public:
  using Error::Error;
};

// Export requested before the store was finalized.
class ExportError : public Error {
 public:
  using Error::Error;
};

// Statistics or export requested on a store that is still in progress.
class NotFinalizedError : public Error {
 public:
  using Error::Error;
};

// Unknown record id.
class NotFoundError : public Error {
 public:
  using Error::Error;
};

// The candidate generator could not be started or reached.
class BackendUnavailable : public Error {
 public:
  using Error::Error;
};

// Lease conflicts in the review service.
class ConflictError : public Error {
 public:
  using Error::Error;
};

// Transport-level failure (connection refused, timeout).
class TransportError : public Error {
 public:
  TransportError(const std::string &what, bool timeout)
      : Error(what), timeout_(timeout) {}
  bool timeout() const { return timeout_; }

 private:
  bool timeout_;
};

}  // namespace elboot

#endif  // ELBOOT_ERROR_HPP_
