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

#include "elboot/config.hpp"

#include <cstdlib>
#include <fstream>

#include "elboot/error.hpp"

namespace elboot {

using nlohmann::json;

Config config_from_json(const json &j) {
  if (!j.is_object()) throw InputError("config must be a JSON object");
  static const std::set<std::string> kKnown = {
      "hosts", "language_priority", "search_limit", "cache_ttl_seconds",
      "rate_limit", "max_retries", "context_window", "max_candidates", "fan_out",
      "request_timeout_ms", "lease_ttl_seconds", "journal_dir", "cache_dir",
      "auth_token", "doc_marker", "skew_subcategories", "snapshot_every"};
  for (const auto &[key, value] : j.items()) {
    if (!kKnown.count(key)) throw InputError("unknown config key '" + key + "'");
  }

  Config c;
  try {
    if (j.contains("hosts")) c.hosts = j["hosts"].get<std::vector<std::string>>();
    if (j.contains("language_priority")) {
      c.language_priority = j["language_priority"].get<std::vector<std::string>>();
    }
    if (j.contains("search_limit")) c.search_limit = j["search_limit"].get<int>();
    if (j.contains("cache_ttl_seconds")) {
      c.cache_ttl = std::chrono::seconds(j["cache_ttl_seconds"].get<std::int64_t>());
    }
    if (j.contains("rate_limit")) c.rate_limit = j["rate_limit"].get<double>();
    if (j.contains("max_retries")) c.max_retries = j["max_retries"].get<int>();
    if (j.contains("context_window")) c.context_window = j["context_window"].get<std::size_t>();
    if (j.contains("max_candidates")) c.max_candidates = j["max_candidates"].get<int>();
    if (j.contains("fan_out")) c.fan_out = j["fan_out"].get<int>();
    if (j.contains("request_timeout_ms")) {
      c.request_timeout = std::chrono::milliseconds(j["request_timeout_ms"].get<std::int64_t>());
    }
    if (j.contains("lease_ttl_seconds")) {
      c.lease_ttl = std::chrono::seconds(j["lease_ttl_seconds"].get<std::int64_t>());
    }
    if (j.contains("journal_dir")) c.journal_dir = j["journal_dir"].get<std::string>();
    if (j.contains("cache_dir")) c.cache_dir = j["cache_dir"].get<std::string>();
    if (j.contains("auth_token")) c.auth_token = j["auth_token"].get<std::string>();
    if (j.contains("doc_marker")) c.doc_marker = j["doc_marker"].get<std::string>();
    if (j.contains("skew_subcategories")) {
      c.skew_subcategories = j["skew_subcategories"].get<std::set<std::string>>();
    }
    if (j.contains("snapshot_every")) c.snapshot_every = j["snapshot_every"].get<std::size_t>();
  } catch (const json::exception &e) {
    throw InputError(std::string("bad config value: ") + e.what());
  }

  if (c.hosts.empty()) throw InputError("config: hosts must not be empty");
  if (c.search_limit < 1) throw InputError("config: search_limit must be >= 1");
  if (!(c.rate_limit > 0)) throw InputError("config: rate_limit must be positive");
  if (c.context_window == 0) throw InputError("config: context_window must be positive");
  if (c.max_candidates < 1) throw InputError("config: max_candidates must be >= 1");
  if (c.fan_out < 1) throw InputError("config: fan_out must be >= 1");
  return c;
}

json config_to_json(const Config &c) {
  json j{{"hosts", c.hosts},
         {"language_priority", c.language_priority},
         {"search_limit", c.search_limit},
         {"cache_ttl_seconds", c.cache_ttl.count()},
         {"rate_limit", c.rate_limit},
         {"max_retries", c.max_retries},
         {"context_window", c.context_window},
         {"max_candidates", c.max_candidates},
         {"fan_out", c.fan_out},
         {"request_timeout_ms", c.request_timeout.count()},
         {"lease_ttl_seconds",
          std::chrono::duration_cast<std::chrono::seconds>(c.lease_ttl).count()},
         {"journal_dir", c.journal_dir.string()},
         {"auth_token", c.auth_token},
         {"doc_marker", c.doc_marker},
         {"skew_subcategories", c.skew_subcategories},
         {"snapshot_every", c.snapshot_every}};
  if (c.cache_dir) j["cache_dir"] = c.cache_dir->string();
  return j;
}

Config load_config(const std::optional<std::filesystem::path> &explicit_path) {
  std::optional<std::filesystem::path> path = explicit_path;
  if (!path) {
    if (const char *env = std::getenv("ELBOOT_CONFIG"); env != nullptr && *env != '\0') {
      path = env;
    }
  }
  if (!path) return Config{};
  std::ifstream in(*path);
  if (!in) throw InputError("cannot read config " + path->string());
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded()) throw InputError("config " + path->string() + " is not valid JSON");
  return config_from_json(j);
}

}  // namespace elboot
