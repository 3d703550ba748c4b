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

#ifndef ELBOOT_CONFIG_HPP_
#define ELBOOT_CONFIG_HPP_

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace elboot {

// Tool configuration. Every field has a default; a JSON config file only
// needs the keys it changes.
struct Config {
  std::vector<std::string> hosts{"is.wikipedia.org", "en.wikipedia.org"};
  std::vector<std::string> language_priority{"is", "en"};
  int search_limit = 10;
  std::chrono::seconds cache_ttl = std::chrono::hours(24 * 7);
  double rate_limit = 2.0;  // requests per second per host
  int max_retries = 3;
  std::size_t context_window = 256;
  int max_candidates = 10;
  int fan_out = 4;
  std::chrono::milliseconds request_timeout = std::chrono::seconds(30);
  std::chrono::milliseconds lease_ttl = std::chrono::minutes(10);
  std::filesystem::path journal_dir = "elboot-data";
  std::optional<std::filesystem::path> cache_dir;  // default: <journal_dir>/cache
  std::string auth_token;
  std::string doc_marker;  // empty: built-in "# newdoc id = .. subcat = .."
  std::set<std::string> skew_subcategories{"adjudications"};
  std::size_t snapshot_every = 1000;  // events between snapshots

  std::filesystem::path effective_cache_dir() const {
    return cache_dir ? *cache_dir : journal_dir / "cache";
  }
};

Config config_from_json(const nlohmann::json &j);
nlohmann::json config_to_json(const Config &config);

// Loads `explicit_path` if given, else $ELBOOT_CONFIG if set, else returns
// defaults. Throws InputError for unreadable files or unknown keys.
Config load_config(const std::optional<std::filesystem::path> &explicit_path);

}  // namespace elboot

#endif  // ELBOOT_CONFIG_HPP_
