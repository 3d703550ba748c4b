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

#include "elboot/net.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "elboot/error.hpp"

namespace elboot {

using nlohmann::json;

void FixtureTransport::add(std::string url, HttpResponse response) {
  std::lock_guard lock(mu_);
  entries_[std::move(url)] = Entry{{std::move(response)}, 0, false};
}

void FixtureTransport::add_sequence(std::string url,
                                    std::vector<HttpResponse> responses) {
  std::lock_guard lock(mu_);
  entries_[std::move(url)] = Entry{std::move(responses), 0, false};
}

void FixtureTransport::add_timeout(std::string url) {
  std::lock_guard lock(mu_);
  entries_[std::move(url)] = Entry{{}, 0, true};
}

void FixtureTransport::load_json_file(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open fixture file " + path.string());
  json j = json::parse(in);
  if (!j.is_object()) throw InputError("fixture file must hold a JSON object");
  for (auto &[url, value] : j.items()) {
    if (value.is_string()) {
      add(url, HttpResponse{200, value.get<std::string>()});
    } else {
      add(url, HttpResponse{value.value("status", 200), value.value("body", std::string())});
    }
  }
}

HttpResponse FixtureTransport::get(const std::string &url) {
  std::lock_guard lock(mu_);
  log_.push_back(url);
  auto it = entries_.find(url);
  if (it == entries_.end()) return HttpResponse{404, ""};
  Entry &e = it->second;
  if (e.timeout) throw TransportError("timeout fetching " + url, true);
  if (e.responses.empty()) return HttpResponse{404, ""};
  const std::size_t i = std::min(e.next, e.responses.size() - 1);
  ++e.next;
  return e.responses[i];
}

std::size_t FixtureTransport::request_count() const {
  std::lock_guard lock(mu_);
  return log_.size();
}

std::size_t FixtureTransport::request_count(const std::string &url) const {
  std::lock_guard lock(mu_);
  return static_cast<std::size_t>(std::count(log_.begin(), log_.end(), url));
}

std::vector<std::string> FixtureTransport::requested_urls() const {
  std::lock_guard lock(mu_);
  return log_;
}

RateLimiter::RateLimiter(Clock &clock, double rate_per_second, double burst)
    : clock_(clock), rate_(rate_per_second), burst_(std::max(1.0, burst)) {
  if (!(rate_per_second > 0)) throw InputError("rate limit must be positive");
}

TimePoint RateLimiter::reserve(const std::string &key) {
  std::lock_guard lock(mu_);
  const TimePoint now = clock_.now();
  auto [it, inserted] = buckets_.try_emplace(key, Bucket{burst_, now});
  Bucket &b = it->second;
  if (now > b.updated) {
    const double elapsed = std::chrono::duration<double>(now - b.updated).count();
    b.tokens = std::min(burst_, b.tokens + elapsed * rate_);
    b.updated = now;
  }
  // Negative balances are bookings that have not come due yet.
  b.tokens -= 1.0;
  if (b.tokens >= 0) return b.updated;
  const double wait_s = -b.tokens / rate_;
  return b.updated + Milliseconds(static_cast<std::int64_t>(std::ceil(wait_s * 1000.0 - 1e-9)));
}

void RateLimiter::acquire(const std::string &key) {
  const TimePoint slot = reserve(key);
  if (slot > clock_.now()) clock_.sleep_until(slot);
}

std::string HostStatus::to_string() const {
  switch (kind) {
    case Kind::kOk:
      return "ok";
    case Kind::kHttpError:
      return "http_error(" + std::to_string(code) + ")";
    case Kind::kTimeout:
      return "timeout";
  }
  return "?";
}

FetchResult fetch_with_retry(Transport &transport, RateLimiter *limiter,
                             Clock &clock, const std::string &host,
                             const std::string &url, const RetryPolicy &retry) {
  Milliseconds backoff = retry.initial_backoff;
  FetchResult last;
  const int attempts = std::max(1, retry.max_attempts);
  for (int attempt = 0; attempt < attempts; ++attempt) {
    if (attempt > 0) {
      clock.sleep_until(clock.now() + backoff);
      backoff = Milliseconds(static_cast<std::int64_t>(
          static_cast<double>(backoff.count()) * retry.multiplier));
    }
    if (limiter != nullptr) limiter->acquire(host);
    try {
      HttpResponse r = transport.get(url);
      if (r.status == 200) return FetchResult{HostStatus{}, std::move(r.body)};
      last = FetchResult{HostStatus{HostStatus::Kind::kHttpError, r.status}, ""};
      if (r.status != 429 && r.status < 500) return last;
    } catch (const TransportError &e) {
      last = FetchResult{
          e.timeout() ? HostStatus{HostStatus::Kind::kTimeout, 0}
                      : HostStatus{HostStatus::Kind::kHttpError, 0},
          ""};
    }
  }
  return last;
}

ResponseCache::ResponseCache(Clock &clock, std::chrono::seconds ttl,
                             std::optional<std::filesystem::path> dir)
    : clock_(clock), ttl_(ttl), dir_(std::move(dir)) {
  if (dir_) {
    std::filesystem::create_directories(*dir_);
    load();
  }
}

void ResponseCache::load() {
  for (const auto &entry : std::filesystem::directory_iterator(*dir_)) {
    if (entry.path().extension() != ".jsonl") continue;
    std::ifstream in(entry.path());
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      json j = json::parse(line, nullptr, false);
      // A torn final line from an interrupted append is skipped.
      if (!j.is_object()) continue;
      try {
        entries_[{j.at("host").get<std::string>(), j.at("text").get<std::string>()}] =
            Entry{j.at("fetched_at").get<std::int64_t>(), j.at("body").get<std::string>()};
      } catch (const json::exception &) {
        continue;
      }
    }
  }
}

std::optional<std::string> ResponseCache::get(const std::string &host,
                                              const std::string &text) const {
  const std::int64_t now_s = to_epoch_ms(clock_.now()) / 1000;
  std::shared_lock lock(mu_);
  auto it = entries_.find({host, text});
  if (it == entries_.end()) return std::nullopt;
  if (now_s - it->second.fetched_at >= ttl_.count()) return std::nullopt;
  return it->second.body;
}

void ResponseCache::put(const std::string &host, const std::string &text,
                        std::string body) {
  const std::int64_t now_s = to_epoch_ms(clock_.now()) / 1000;
  std::unique_lock lock(mu_);
  if (dir_) {
    json j{{"host", host}, {"text", text}, {"fetched_at", now_s}, {"body", body}};
    std::ofstream out(*dir_ / (host + ".jsonl"), std::ios::app);
    out << j.dump() << '\n';
  }
  entries_[{host, text}] = Entry{now_s, std::move(body)};
}

std::size_t ResponseCache::size() const {
  std::shared_lock lock(mu_);
  return entries_.size();
}

}  // namespace elboot
