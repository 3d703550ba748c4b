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

#ifndef ELBOOT_GENERATOR_HPP_
#define ELBOOT_GENERATOR_HPP_

#include <chrono>
#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "elboot/corpus.hpp"
#include "elboot/types.hpp"

namespace elboot {

struct GeneratorRequest {
  std::string mention_id;
  std::string left_context;
  std::string mention;
  std::string right_context;
  int max_candidates = 1;

  friend bool operator==(const GeneratorRequest &,
                         const GeneratorRequest &) = default;
};

// Contexts are copied verbatim from the mention. Throws InputError for
// non-linkable mentions or max_candidates < 1.
GeneratorRequest encode_request(const Mention &mention, int max_candidates);

// Wire protocol, version 1: one JSON object per line.
//   request:  {"v":1,"id":..,"left":..,"mention":..,"right":..,"k":..}
//   response: {"v":1,"id":..,"candidates":[{"lang":..,"title":..,"score":..}]}
// A response may carry "error" instead of "candidates".
namespace protocol {

inline constexpr int kVersion = 1;

struct Response {
  std::string id;
  std::vector<Candidate> candidates;
  std::optional<std::string> error;
};

std::string encode_request(const GeneratorRequest &request);
GeneratorRequest decode_request(std::string_view line);
std::string encode_response(std::string_view id,
                            std::span<const Candidate> candidates);
std::string encode_error(std::string_view id, std::string_view message);
// Throws InputError on malformed records. Decoded candidates have
// source = MODEL.
Response decode_response(std::string_view line);

}  // namespace protocol

// A connection to a candidate generator. Requests are pipelined; responses
// may come back in any order and are matched by id. Owned and driven by a
// single dispatcher.
class GeneratorEndpoint {
 public:
  virtual ~GeneratorEndpoint() = default;

  // Throws BackendUnavailable if the backend cannot be reached.
  virtual void start() = 0;
  virtual void send(const std::string &line) = 0;
  // Next response line, or nullopt if none arrived within `timeout`.
  virtual std::optional<std::string> receive(std::chrono::milliseconds timeout) = 0;
  // True once the backend can no longer produce responses.
  virtual bool closed() const = 0;
};

// In-process generator answering from a fixed table. Unknown ids get an
// empty candidate list.
class ScriptedBackend final : public GeneratorEndpoint {
 public:
  using Fixture = std::map<std::string, std::vector<Candidate>>;

  explicit ScriptedBackend(Fixture fixture = {});

  // Ids that never get an answer, to exercise request timeouts.
  void set_silent(std::set<std::string> ids) { silent_ = std::move(ids); }
  // Release queued responses last-in first-out.
  void set_reverse_order(bool reverse) { reverse_ = reverse; }

  // Protocol-level answer for one request line.
  std::string answer(std::string_view request_line) const;

  void start() override {}
  void send(const std::string &line) override;
  std::optional<std::string> receive(std::chrono::milliseconds timeout) override;
  bool closed() const override { return false; }

  std::size_t requests_seen() const { return requests_seen_; }

 private:
  Fixture fixture_;
  std::set<std::string> silent_;
  bool reverse_ = false;
  std::deque<std::string> queue_;
  std::size_t requests_seen_ = 0;
};

// Child process speaking the protocol over stdin/stdout. The command is
// split on whitespace and executed directly (no shell).
class ProcessBackend final : public GeneratorEndpoint {
 public:
  explicit ProcessBackend(std::string command);
  ~ProcessBackend() override;
  ProcessBackend(const ProcessBackend &) = delete;
  ProcessBackend &operator=(const ProcessBackend &) = delete;

  void start() override;
  void send(const std::string &line) override;
  std::optional<std::string> receive(std::chrono::milliseconds timeout) override;
  bool closed() const override { return closed_; }

 private:
  void shutdown();

  std::string command_;
  int pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  bool closed_ = false;
  std::string buffer_;
};

// HTTP POST endpoint: each request line is POSTed as the body; the response
// body carries the response line.
class HttpBackend final : public GeneratorEndpoint {
 public:
  explicit HttpBackend(std::string url,
                       std::chrono::milliseconds timeout = std::chrono::seconds(30));
  ~HttpBackend() override;

  void start() override;
  void send(const std::string &line) override;
  std::optional<std::string> receive(std::chrono::milliseconds timeout) override;
  bool closed() const override { return false; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// "http://..." and "https://..." select HttpBackend, anything else is a
// command line for ProcessBackend.
std::unique_ptr<GeneratorEndpoint> make_generator_endpoint(const std::string &target);

struct BatchOptions {
  int max_candidates = 10;
  int fan_out = 4;  // requests in flight
  std::chrono::milliseconds timeout = std::chrono::seconds(30);
};

struct BatchResult {
  // Every requested mention id is present; order is the backend's.
  std::map<std::string, std::vector<Candidate>> candidates;
  // Mention id -> reason its list is empty because of a failure.
  std::map<std::string, std::string> diagnostics;
  // Response lines that could not be attributed to any request.
  std::vector<std::string> protocol_errors;
};

// Starts the endpoint (BackendUnavailable propagates) and runs every request
// through it. Per-request failures leave an empty list and a diagnostic.
BatchResult run_batch(std::span<const GeneratorRequest> requests,
                      GeneratorEndpoint &backend, const BatchOptions &options);
BatchResult run_batch(std::span<const Mention> mentions,
                      GeneratorEndpoint &backend, const BatchOptions &options);

}  // namespace elboot

#endif  // ELBOOT_GENERATOR_HPP_
