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

#ifndef ELBOOT_RESOLVER_HPP_
#define ELBOOT_RESOLVER_HPP_

#include <compare>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "elboot/net.hpp"
#include "elboot/types.hpp"

namespace elboot {

// The page exists nowhere or has no Wikidata item. A normal outcome.
struct NotFound {
  friend bool operator==(const NotFound &, const NotFound &) = default;
};

// Transport or protocol failure after retries.
struct ResolutionError {
  std::string message;
  friend bool operator==(const ResolutionError &, const ResolutionError &) = default;
};

using ResolveResult = std::variant<ResolvedEntity, NotFound, ResolutionError>;

struct TitleKey {
  std::string language;
  std::string title;
  friend auto operator<=>(const TitleKey &, const TitleKey &) = default;
};

// MediaWiki title normalisation: underscores become spaces, runs of
// whitespace collapse, ends are trimmed and the first letter is upper-cased.
std::string normalize_title(std::string_view title);

std::string wiki_host(std::string_view language);

// action=query&prop=pageprops&redirects=1 for one (normalised) title.
std::string build_resolve_url(std::string_view language, std::string_view title);

// Interprets a query response for `requested_title` (already normalised).
// Throws InputError on malformed bodies.
ResolveResult parse_resolve_response(std::string_view language,
                                     std::string_view requested_title,
                                     std::string_view body);

// Follows redirects to the canonical page and returns its Wikidata item.
ResolveResult resolve(std::string_view language, std::string_view title,
                      WikiAccess &access);

// One entry per input pair, in input order. Pairs that normalise to the
// same key are fetched once.
std::vector<std::pair<TitleKey, ResolveResult>> batch_resolve(
    std::span<const TitleKey> pairs, WikiAccess &access);

}  // namespace elboot

#endif  // ELBOOT_RESOLVER_HPP_
