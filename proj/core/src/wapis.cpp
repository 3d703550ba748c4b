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

#include "elboot/wapis.hpp"

#include <nlohmann/json.hpp>

#include "elboot/error.hpp"
#include "elboot/text.hpp"

namespace elboot {

std::string build_search_url(std::string_view text, std::string_view host, int limit) {
  if (text.empty()) throw InputError("search text is empty");
  if (limit < 1) throw InputError("search limit must be >= 1");
  std::string url = "https://";
  url += host;
  url += "/w/api.php?action=opensearch&search=";
  url += text::percent_encode(text);
  url += "&limit=";
  url += std::to_string(limit);
  url += "&namespace=0&format=json";
  return url;
}

std::string language_of_host(std::string_view host) {
  return std::string(host.substr(0, host.find('.')));
}

std::vector<std::string> parse_opensearch(std::string_view body) {
  auto j = nlohmann::json::parse(body, nullptr, false);
  if (!j.is_array() || j.size() != 4 || !j[1].is_array()) {
    throw InputError("unexpected opensearch response shape");
  }
  std::vector<std::string> titles;
  for (const auto &t : j[1]) {
    if (!t.is_string()) throw InputError("opensearch title is not a string");
    titles.push_back(t.get<std::string>());
  }
  return titles;
}

SearchResult search(const SearchQuery &query, WikiAccess &access) {
  if (query.hosts.empty()) throw InputError("search needs at least one host");
  SearchResult result;
  for (const std::string &host : query.hosts) {
    std::optional<std::string> body;
    if (access.cache) body = access.cache->get(host, query.text);
    bool from_cache = body.has_value();
    if (!body) {
      FetchResult fetched =
          fetch_with_retry(access.transport, access.limiter, access.clock, host,
                           build_search_url(query.text, host, query.limit), access.retry);
      if (!fetched.status.ok()) {
        result.per_host_status[host] = fetched.status;
        continue;
      }
      body = std::move(fetched.body);
    }

    std::vector<std::string> titles;
    try {
      titles = parse_opensearch(*body);
    } catch (const InputError &) {
      result.per_host_status[host] = HostStatus{HostStatus::Kind::kHttpError, 200};
      continue;
    }
    if (!from_cache && access.cache) access.cache->put(host, query.text, *body);
    result.per_host_status[host] = HostStatus{};

    const std::string language = language_of_host(host);
    for (std::string &title : titles) {
      if (title.empty()) continue;
      Candidate c;
      c.source = CandidateSource::kSearch;
      c.language = language;
      c.title = std::move(title);
      result.candidates.push_back(std::move(c));
    }
  }
  return result;
}

}  // namespace elboot
