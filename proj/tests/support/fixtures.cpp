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

#include "fixtures.hpp"

#include <atomic>
#include <nlohmann/json.hpp>

#include "elboot/wapis.hpp"

#ifndef ELBOOT_TEST_DATA_DIR
#error "ELBOOT_TEST_DATA_DIR must be defined"
#endif

namespace elboot::testing {

using nlohmann::json;

std::filesystem::path data_dir() { return ELBOOT_TEST_DATA_DIR; }

std::filesystem::path make_temp_dir(std::string_view prefix) {
  static std::atomic<int> counter{0};
  std::random_device rd;
  auto dir = std::filesystem::temp_directory_path() /
             (std::string(prefix) + "-" + std::to_string(rd()) + "-" +
              std::to_string(counter++));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::string page_body(std::string_view title, std::string_view qid) {
  json page{{"pageid", 1}, {"ns", 0}, {"title", title},
            {"pageprops", {{"wikibase_item", qid}}}};
  return json{{"batchcomplete", true}, {"query", {{"pages", json::array({page})}}}}.dump();
}

std::string redirect_body(std::string_view from, std::string_view to, std::string_view qid) {
  json page{{"pageid", 2}, {"ns", 0}, {"title", to}, {"pageprops", {{"wikibase_item", qid}}}};
  json redirects = json::array({json{{"from", from}, {"to", to}}});
  return json{{"batchcomplete", true},
              {"query", {{"redirects", redirects}, {"pages", json::array({page})}}}}
      .dump();
}

std::string missing_body(std::string_view title) {
  json page{{"ns", 0}, {"title", title}, {"missing", true}};
  return json{{"batchcomplete", true}, {"query", {{"pages", json::array({page})}}}}.dump();
}

std::string no_item_body(std::string_view title) {
  json page{{"pageid", 3}, {"ns", 0}, {"title", title}};
  return json{{"batchcomplete", true}, {"query", {{"pages", json::array({page})}}}}.dump();
}

std::string opensearch_body(std::string_view query, const std::vector<std::string> &titles) {
  json descriptions = json::array();
  json urls = json::array();
  for (const std::string &t : titles) {
    descriptions.push_back("");
    urls.push_back("https://example.invalid/wiki/" + t);
  }
  return json::array({query, titles, descriptions, urls}).dump();
}

Candidate resolved(CandidateSource source, std::string language, std::string title,
                   std::string qid) {
  Candidate c;
  c.source = source;
  c.language = language;
  c.title = title;
  if (source == CandidateSource::kModel) c.score = 0.9;
  c.resolution = ResolvedEntity{std::move(qid), std::move(title), std::move(language),
                                std::nullopt};
  return c;
}

MentionInfo make_info(std::string id, std::string surface, NeType type,
                      std::string subcategory) {
  MentionInfo m;
  m.id = std::move(id);
  m.doc_id = "d";
  m.subcategory = std::move(subcategory);
  m.surface = std::move(surface);
  m.ne_type = type;
  m.morph_tags = {std::optional<std::string>("nken-m")};
  return m;
}

namespace {

template <typename T>
const T &pick(std::mt19937_64 &rng, const std::vector<T> &v) {
  return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
}

int roll(std::mt19937_64 &rng, int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }

SearchResult random_search(std::mt19937_64 &rng, const std::string &qid_hint) {
  SearchResult r;
  const int n = roll(rng, 4);
  for (int i = 0; i < n; ++i) {
    const std::string lang = roll(rng, 2) ? "is" : "en";
    const std::string title = "T" + std::to_string(roll(rng, 1000));
    if (roll(rng, 4) == 0) {
      Candidate c;
      c.source = CandidateSource::kSearch;
      c.language = lang;
      c.title = title;
      r.candidates.push_back(c);
    } else {
      const std::string qid = roll(rng, 2) ? qid_hint : "Q" + std::to_string(1 + roll(rng, 999));
      r.candidates.push_back(resolved(CandidateSource::kSearch, lang, title, qid));
    }
  }
  return r;
}

void maybe_select(std::mt19937_64 &rng, Store &store, const std::string &id) {
  const WorkflowRecord &r = store.record(id);
  if (r.state != WorkflowState::kSearchSuggested) return;
  const int choice = roll(rng, 3);
  if (choice == 0) return;  // left for finalize
  if (choice == 1) {
    store.apply_search_selection(id, NoMatch{}, "ann");
    return;
  }
  for (std::size_t i = 0; i < r.search_candidates.size(); ++i) {
    if (r.search_candidates[i].resolution) {
      store.apply_search_selection(id, i, "ann");
      return;
    }
  }
  store.apply_search_selection(id, NoMatch{}, "ann");
}

}  // namespace

Store random_finalized_store(std::mt19937_64 &rng, Clock &clock, EventSink *sink) {
  static const std::vector<NeType> types{NeType::kPerson, NeType::kLocation,
                                         NeType::kOrganization, NeType::kMiscellaneous};
  static const std::vector<std::string> subcats{"news", "blogs", "adjudications", "books"};
  Store store(clock, sink);
  const int n = roll(rng, 61);
  std::vector<MentionInfo> infos;
  for (int i = 0; i < n; ++i) {
    infos.push_back(make_info("m" + std::to_string(i), "S" + std::to_string(roll(rng, 50)),
                              pick(rng, types), pick(rng, subcats)));
  }
  store.init(infos);

  for (const MentionInfo &m : infos) {
    const std::string qid = "Q" + std::to_string(1 + roll(rng, 999));
    switch (roll(rng, 6)) {
      case 0:
        break;  // never reaches the generator
      case 1:
        store.record_model_suggestion(m.id, {resolved(CandidateSource::kModel, "is", m.surface, qid)});
        store.apply_model_decision(m.id, ModelDecision::kAccept, "ann");
        if (roll(rng, 2)) store.attach_search_results(m.id, random_search(rng, qid));
        break;
      case 2:
        store.record_model_suggestion(m.id, {resolved(CandidateSource::kModel, "en", m.surface, qid)});
        store.apply_model_decision(m.id, ModelDecision::kReject, "ann");
        if (roll(rng, 4)) {
          store.attach_search_results(m.id, random_search(rng, qid));
          maybe_select(rng, store, m.id);
        }
        break;
      case 3: {
        Candidate unresolved;
        unresolved.language = "is";
        unresolved.title = m.surface;
        store.record_model_suggestion(m.id, roll(rng, 2) ? std::vector<Candidate>{}
                                                         : std::vector<Candidate>{unresolved});
        if (roll(rng, 4)) {
          store.attach_search_results(m.id, random_search(rng, qid));
          maybe_select(rng, store, m.id);
        }
        break;
      }
      case 4:
        store.record_model_suggestion(m.id, {resolved(CandidateSource::kModel, "is", m.surface, qid)});
        break;  // suggested but never reviewed
      default:
        store.record_model_suggestion(m.id, {resolved(CandidateSource::kModel, "is", m.surface, qid)});
        store.apply_model_decision(m.id, ModelDecision::kReject, "ann");
        break;
    }
  }
  store.finalize();

  for (const MentionInfo &m : infos) {
    if (store.record(m.id).state != WorkflowState::kUnlabeled || roll(rng, 2)) continue;
    UnlabeledTag tag;
    tag.category = pick(rng, all_unlabeled_categories());
    for (int k = roll(rng, 3); k > 0; --k) {
      UnlabeledFactor f = pick(rng, all_unlabeled_factors());
      if (f != UnlabeledFactor::kNone) tag.factors.insert(f);
    }
    store.tag_unlabeled(m.id, tag, "ann");
  }
  return store;
}

Store store_with_label_languages(Clock &clock,
                                 const std::vector<std::pair<std::string, std::size_t>> &counts) {
  Store store(clock);
  std::vector<MentionInfo> infos;
  std::vector<std::string> languages;
  for (const auto &[lang, n] : counts) {
    for (std::size_t i = 0; i < n; ++i) {
      infos.push_back(make_info("m" + std::to_string(infos.size())));
      languages.push_back(lang);
    }
  }
  store.init(infos);
  for (std::size_t i = 0; i < infos.size(); ++i) {
    const std::string &id = infos[i].id;
    const std::string qid = "Q" + std::to_string(i + 1);
    if (i % 2 == 0) {
      store.record_model_suggestion(id, {resolved(CandidateSource::kModel, languages[i], "T", qid)});
      store.apply_model_decision(id, ModelDecision::kAccept, "ann");
    } else {
      store.record_model_suggestion(id, {});
      SearchResult r;
      r.candidates.push_back(resolved(CandidateSource::kSearch, languages[i], "T", qid));
      store.attach_search_results(id, r);
      store.apply_search_selection(id, std::size_t{0}, "ann");
    }
  }
  store.finalize();
  return store;
}

Store store_with_unlabeled_categories(
    Clock &clock, const std::vector<std::pair<UnlabeledCategory, std::size_t>> &counts) {
  Store store(clock);
  std::vector<MentionInfo> infos;
  std::vector<UnlabeledCategory> categories;
  for (const auto &[category, n] : counts) {
    for (std::size_t i = 0; i < n; ++i) {
      infos.push_back(make_info("m" + std::to_string(infos.size())));
      categories.push_back(category);
    }
  }
  store.init(infos);
  store.finalize();
  for (std::size_t i = 0; i < infos.size(); ++i) {
    store.tag_unlabeled(infos[i].id, UnlabeledTag{categories[i], {}}, "ann");
  }
  return store;
}

std::vector<TokenSpan> brute_force_bio_spans(const std::vector<std::string> &tags) {
  auto type_of = [](const std::string &t) { return t == "O" ? std::string() : t.substr(2); };
  const int n = static_cast<int>(tags.size());
  std::vector<TokenSpan> spans;
  for (int s = 0; s < n; ++s) {
    for (int e = s + 1; e <= n; ++e) {
      if (tags[s] == "O") continue;
      const std::string type = type_of(tags[s]);
      bool ok = true;
      if (tags[s][0] == 'I' && s > 0 && type_of(tags[s - 1]) == type) ok = false;
      for (int k = s + 1; k < e && ok; ++k) {
        if (tags[k] != "I-" + type) ok = false;
      }
      if (ok && e < n && tags[e] == "I-" + type) ok = false;
      if (ok) spans.push_back({s, e});
    }
  }
  return spans;
}

Document document_from_tags(const std::vector<std::string> &tags) {
  Document d{"d", "news", {}};
  Sentence s;
  for (std::size_t i = 0; i < tags.size(); ++i) {
    s.push_back(Token{"w" + std::to_string(i), tags[i], std::nullopt, static_cast<int>(i)});
  }
  d.sentences.push_back(s);
  return d;
}

std::vector<std::string> random_bio_tags(std::mt19937_64 &rng, std::size_t max_len) {
  static const std::vector<std::string> types{"Person", "Location", "Organization",
                                              "Miscellaneous", "Date", "Time",
                                              "Money", "Percent"};
  const std::size_t len = std::uniform_int_distribution<std::size_t>(0, max_len)(rng);
  std::vector<std::string> tags;
  for (std::size_t i = 0; i < len; ++i) {
    const int kind = roll(rng, 3);
    if (kind == 0) {
      tags.push_back("O");
    } else {
      // Few types make same-type continuations and type switches common.
      const std::string &type = types[roll(rng, 3) == 0 ? roll(rng, 8) : roll(rng, 2)];
      tags.push_back((kind == 1 ? "B-" : "I-") + type);
    }
  }
  return tags;
}

}  // namespace elboot::testing
