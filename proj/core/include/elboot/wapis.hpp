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

#ifndef ELBOOT_WAPIS_HPP_
#define ELBOOT_WAPIS_HPP_

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "elboot/net.hpp"
#include "elboot/types.hpp"

namespace elboot {

// Wikipedia API search: the mention's verbatim text is sent to the
// opensearch (suggestion drop-down) endpoint of each configured wiki.

struct SearchQuery {
  std::string text;  // unaltered mention surface
  std::vector<std::string> hosts{"is.wikipedia.org", "en.wikipedia.org"};
  int limit = 10;
};

struct SearchResult {
  // Host order first, API rank second. source = SEARCH.
  std::vector<Candidate> candidates;
  std::map<std::string, HostStatus> per_host_status;
};

// https://<host>/w/api.php?action=opensearch&search=<text>&limit=<n>&namespace=0&format=json
std::string build_search_url(std::string_view text, std::string_view host, int limit);

// Language subdomain of a wiki host: "is.wikipedia.org" -> "is".
std::string language_of_host(std::string_view host);

// Titles from the 4-element opensearch array [query, titles, descriptions,
// urls]. Throws InputError on any other shape.
std::vector<std::string> parse_opensearch(std::string_view body);

// Cache-first per host; failed hosts are recorded in per_host_status and do
// not fail the search.
SearchResult search(const SearchQuery &query, WikiAccess &access);

}  // namespace elboot

#endif  // ELBOOT_WAPIS_HPP_
