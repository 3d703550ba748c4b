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

#ifndef ELBOOT_NET_HPP_
#define ELBOOT_NET_HPP_

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "elboot/clock.hpp"

namespace elboot {

struct HttpResponse {
  int status = 0;
  std::string body;
};

// Blocking HTTP GET. Implementations must be safe for concurrent use and
// throw TransportError on connection failures and timeouts.
class Transport {
 public:
  virtual ~Transport() = default;
  virtual HttpResponse get(const std::string &url) = 0;
};

// Live HTTPS transport.
class HttpsTransport final : public Transport {
 public:
  explicit HttpsTransport(std::chrono::seconds timeout = std::chrono::seconds(30),
                          std::string user_agent = "elboot/0.1");
  HttpResponse get(const std::string &url) override;

 private:
  std::chrono::seconds timeout_;
  std::string user_agent_;
};

// Serves recorded responses keyed by exact URL. Unknown URLs get a 404.
class FixtureTransport final : public Transport {
 public:
  FixtureTransport() = default;

  void add(std::string url, HttpResponse response);
  // Scripted sequence for one URL: each call consumes the next response;
  // the last one repeats.
  void add_sequence(std::string url, std::vector<HttpResponse> responses);
  // Makes every request to `url` throw TransportError(timeout=true).
  void add_timeout(std::string url);

  // JSON object {url: {"status": int, "body": string}} or {url: body}.
  void load_json_file(const std::filesystem::path &path);

  HttpResponse get(const std::string &url) override;

  std::size_t request_count() const;
  std::size_t request_count(const std::string &url) const;
  std::vector<std::string> requested_urls() const;

 private:
  struct Entry {
    std::vector<HttpResponse> responses;
    std::size_t next = 0;
    bool timeout = false;
  };
  mutable std::mutex mu_;
  std::map<std::string, Entry> entries_;
  std::vector<std::string> log_;
};

// Token bucket per key (host). `rate` tokens per second, capacity `burst`.
// reserve() hands out the earliest admissible time for the next request and
// books it; concurrent callers get distinct, increasing slots.
class RateLimiter {
 public:
  RateLimiter(Clock &clock, double rate_per_second, double burst = 1.0);

  TimePoint reserve(const std::string &key);
  // reserve() followed by clock.sleep_until().
  void acquire(const std::string &key);

  double rate() const { return rate_; }

 private:
  struct Bucket {
    double tokens;
    TimePoint updated;
  };
  Clock &clock_;
  double rate_;
  double burst_;
  std::mutex mu_;
  std::map<std::string, Bucket> buckets_;
};

struct RetryPolicy {
  int max_attempts = 4;
  Milliseconds initial_backoff{500};
  double multiplier = 2.0;
};

struct HostStatus {
  enum class Kind { kOk, kHttpError, kTimeout };
  Kind kind = Kind::kOk;
  int code = 0;  // HTTP status for kHttpError

  bool ok() const { return kind == Kind::kOk; }
  std::string to_string() const;
  friend bool operator==(const HostStatus &, const HostStatus &) = default;
};

struct FetchResult {
  HostStatus status;
  std::string body;
};

// GET with rate limiting and exponential backoff on 429, 5xx and transport
// errors. Other statuses are returned as is.
FetchResult fetch_with_retry(Transport &transport, RateLimiter *limiter,
                             Clock &clock, const std::string &host,
                             const std::string &url, const RetryPolicy &retry);

// (host, text) -> raw response body, with a time-to-live. When given a
// directory, each host gets an append-only file `<dir>/<host>.jsonl` holding
// one record per line: {"host", "text", "fetched_at", "body"}, fetched_at in
// epoch seconds. Later records supersede earlier ones.
class ResponseCache {
 public:
  ResponseCache(Clock &clock, std::chrono::seconds ttl,
                std::optional<std::filesystem::path> dir = std::nullopt);

  std::optional<std::string> get(const std::string &host,
                                 const std::string &text) const;
  void put(const std::string &host, const std::string &text, std::string body);

  std::size_t size() const;

 private:
  struct Entry {
    std::int64_t fetched_at;  // epoch seconds
    std::string body;
  };
  void load();

  Clock &clock_;
  std::chrono::seconds ttl_;
  std::optional<std::filesystem::path> dir_;
  mutable std::shared_mutex mu_;
  std::map<std::pair<std::string, std::string>, Entry> entries_;
};

// Everything needed to talk to a wiki API.
struct WikiAccess {
  Transport &transport;
  Clock &clock;
  ResponseCache *cache = nullptr;
  RateLimiter *limiter = nullptr;
  RetryPolicy retry{};
};

}  // namespace elboot

#endif  // ELBOOT_NET_HPP_
