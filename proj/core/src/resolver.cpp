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

#include "elboot/resolver.hpp"

#include <map>

#include <nlohmann/json.hpp>

#include "elboot/error.hpp"
#include "elboot/text.hpp"

namespace elboot {

using nlohmann::json;

std::string normalize_title(std::string_view title) {
  std::string spaced;
  spaced.reserve(title.size());
  for (char c : title) spaced.push_back(c == '_' ? ' ' : c);
  std::string collapsed;
  for (std::string_view word : text::split_whitespace(spaced)) {
    if (!collapsed.empty()) collapsed.push_back(' ');
    collapsed += word;
  }
  return text::upper_first(collapsed);
}

std::string wiki_host(std::string_view language) {
  return std::string(language) + ".wikipedia.org";
}

std::string build_resolve_url(std::string_view language, std::string_view title) {
  std::string url = "https://" + wiki_host(language);
  url += "/w/api.php?action=query&prop=pageprops&ppprop=wikibase_item"
         "&redirects=1&format=json&formatversion=2&titles=";
  url += text::percent_encode(title);
  return url;
}

ResolveResult parse_resolve_response(std::string_view language,
                                     std::string_view requested_title,
                                     std::string_view body) {
  json j = json::parse(body, nullptr, false);
  if (!j.is_object()) throw InputError("resolver response is not a JSON object");
  auto q = j.find("query");
  if (q == j.end() || !q->is_object()) throw InputError("resolver response without 'query'");

  std::optional<std::string> redirected_from;
  if (auto r = q->find("redirects"); r != q->end() && r->is_array() && !r->empty()) {
    redirected_from = std::string(requested_title);
  }

  auto pages = q->find("pages");
  if (pages == q->end()) throw InputError("resolver response without 'pages'");
  const json *page = nullptr;
  if (pages->is_array()) {
    if (!pages->empty()) page = &(*pages)[0];
  } else if (pages->is_object()) {
    // formatversion=1 keys pages by id; "-1" marks a missing page.
    if (!pages->empty()) page = &pages->begin().value();
  } else {
    throw InputError("'pages' has unexpected type");
  }
  if (page == nullptr || page->contains("missing") || page->contains("invalid")) {
    return NotFound{};
  }
  auto props = page->find("pageprops");
  if (props == page->end() || !props->contains("wikibase_item")) return NotFound{};

  ResolvedEntity entity;
  entity.qid = (*props)["wikibase_item"].get<std::string>();
  if (!is_valid_qid(entity.qid)) throw InputError("malformed QID " + entity.qid);
  entity.canonical_title = page->value("title", std::string(requested_title));
  entity.language = std::string(language);
  entity.redirected_from = std::move(redirected_from);
  return entity;
}

ResolveResult resolve(std::string_view language, std::string_view title,
                      WikiAccess &access) {
  const std::string normalized = normalize_title(title);
  if (normalized.empty()) throw InputError("title is empty");
  const std::string host = wiki_host(language);

  std::optional<std::string> body;
  if (access.cache) body = access.cache->get(host, normalized);
  const bool from_cache = body.has_value();
  if (!body) {
    FetchResult fetched =
        fetch_with_retry(access.transport, access.limiter, access.clock, host,
                         build_resolve_url(language, normalized), access.retry);
    if (!fetched.status.ok()) {
      return ResolutionError{host + ": " + fetched.status.to_string()};
    }
    body = std::move(fetched.body);
  }
  try {
    ResolveResult result = parse_resolve_response(language, normalized, *body);
    if (!from_cache && access.cache) access.cache->put(host, normalized, *body);
    return result;
  } catch (const std::exception &e) {
    return ResolutionError{host + ": " + e.what()};
  }
}

std::vector<std::pair<TitleKey, ResolveResult>> batch_resolve(
    std::span<const TitleKey> pairs, WikiAccess &access) {
  std::map<TitleKey, ResolveResult> unique;
  std::vector<std::pair<TitleKey, ResolveResult>> out;
  out.reserve(pairs.size());
  for (const TitleKey &pair : pairs) {
    TitleKey key{pair.language, normalize_title(pair.title)};
    auto it = unique.find(key);
    if (it == unique.end()) {
      ResolveResult r = key.title.empty()
                            ? ResolveResult{ResolutionError{"title is empty"}}
                            : resolve(pair.language, pair.title, access);
      it = unique.emplace(std::move(key), std::move(r)).first;
    }
    out.emplace_back(pair, it->second);
  }
  return out;
}

}  // namespace elboot
