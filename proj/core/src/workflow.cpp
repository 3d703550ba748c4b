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

#include "elboot/workflow.hpp"

#include <algorithm>
#include <array>
#include <ostream>
#include <utility>

#include "elboot/error.hpp"

namespace elboot {

using nlohmann::json;

namespace {

constexpr std::array<std::pair<WorkflowState, std::string_view>, 7> kStateNames = {{
    {WorkflowState::kPending, "Pending"},
    {WorkflowState::kModelSuggested, "ModelSuggested"},
    {WorkflowState::kModelAccepted, "ModelAccepted"},
    {WorkflowState::kModelRejected, "ModelRejected"},
    {WorkflowState::kSearchSuggested, "SearchSuggested"},
    {WorkflowState::kSearchAccepted, "SearchAccepted"},
    {WorkflowState::kUnlabeled, "Unlabeled"},
}};

constexpr std::array<std::pair<UnlabeledCategory, std::string_view>, 12> kCategoryNames = {{
    {UnlabeledCategory::kPerson, "person"},
    {UnlabeledCategory::kFictionalCharacter, "fictional_character"},
    {UnlabeledCategory::kInstitutionCompany, "institution_company"},
    {UnlabeledCategory::kLocation, "location"},
    {UnlabeledCategory::kBookTitle, "book_title"},
    {UnlabeledCategory::kBrand, "brand"},
    {UnlabeledCategory::kEvent, "event"},
    {UnlabeledCategory::kShow, "show"},
    {UnlabeledCategory::kNomenclature, "nomenclature"},
    {UnlabeledCategory::kMagazine, "magazine"},
    {UnlabeledCategory::kDeity, "deity"},
    {UnlabeledCategory::kOther, "other"},
}};

constexpr std::array<std::pair<UnlabeledFactor, std::string_view>, 10> kFactorNames = {{
    {UnlabeledFactor::kFirstNameOnly, "first_name_only"},
    {UnlabeledFactor::kLastNameOnly, "last_name_only"},
    {UnlabeledFactor::kNickname, "nickname"},
    {UnlabeledFactor::kNameInsertion, "name_insertion"},
    {UnlabeledFactor::kAbbreviation, "abbreviation"},
    {UnlabeledFactor::kNoContext, "no_context"},
    {UnlabeledFactor::kInexactLocation, "inexact_location"},
    {UnlabeledFactor::kTranslatedTitle, "translated_title"},
    {UnlabeledFactor::kMisspelling, "misspelling"},
    {UnlabeledFactor::kNone, "none"},
}};

template <typename Enum, std::size_t N>
std::string_view name_of(const std::array<std::pair<Enum, std::string_view>, N> &table,
                         Enum value) {
  for (const auto &[v, name] : table) {
    if (v == value) return name;
  }
  return "?";
}

template <typename Enum, std::size_t N>
std::optional<Enum> value_of(const std::array<std::pair<Enum, std::string_view>, N> &table,
                             std::string_view name) {
  for (const auto &[v, n] : table) {
    if (n == name) return v;
  }
  return std::nullopt;
}

// Event type names.
constexpr std::string_view kMentionAdded = "mention_added";
constexpr std::string_view kModelSuggestion = "model_suggestion";
constexpr std::string_view kModelDecision = "model_decision";
constexpr std::string_view kSearchResults = "search_results";
constexpr std::string_view kSearchSelection = "search_selection";
constexpr std::string_view kFinalize = "finalize";
constexpr std::string_view kUnlabeledTag = "unlabeled_tag";

std::vector<Candidate> candidates_from(const json &payload) {
  std::vector<Candidate> out;
  for (const json &c : payload.at("candidates")) {
    Candidate candidate = c.get<Candidate>();
    validate(candidate);
    out.push_back(std::move(candidate));
  }
  return out;
}

template <typename T>
void put_optional(json &j, const char *key, const std::optional<T> &value) {
  if (value) {
    j[key] = *value;
  } else {
    j[key] = nullptr;
  }
}

template <typename T>
std::optional<T> get_optional(const json &j, const char *key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return it->get<T>();
}

void from_json_record(const json &j, WorkflowRecord &r) {
  r.mention = j.at("mention").get<MentionInfo>();
  auto state = parse_workflow_state(j.at("state").get<std::string>());
  if (!state) throw InputError("unknown workflow state in snapshot");
  r.state = *state;
  r.model_round_done = j.at("model_round_done").get<bool>();
  r.search_round_done = j.at("search_round_done").get<bool>();
  r.model_candidates = j.at("model_candidates").get<std::vector<Candidate>>();
  r.search_candidates = j.at("search_candidates").get<std::vector<Candidate>>();
  r.correct_wiki = get_optional<ResolvedEntity>(j, "correct_wiki");
  r.suggestion_wiki = get_optional<ResolvedEntity>(j, "suggestion_wiki");
  r.overlap = get_optional<bool>(j, "overlap");
  r.decisions = j.at("decisions").get<std::vector<Decision>>();
  r.unlabeled_tag = get_optional<UnlabeledTag>(j, "unlabeled_tag");
}

}  // namespace

void to_json(json &j, const Decision &d) {
  j = json{{"annotator", d.annotator_id}, {"action", d.action}, {"ts", d.timestamp_ms}};
}

void from_json(const json &j, Decision &d) {
  d.annotator_id = j.at("annotator").get<std::string>();
  d.action = j.at("action").get<std::string>();
  d.timestamp_ms = j.at("ts").get<std::int64_t>();
}

std::string_view to_string(WorkflowState state) { return name_of(kStateNames, state); }

std::optional<WorkflowState> parse_workflow_state(std::string_view name) {
  return value_of(kStateNames, name);
}

bool is_terminal(WorkflowState state) {
  return state == WorkflowState::kModelAccepted ||
         state == WorkflowState::kSearchAccepted ||
         state == WorkflowState::kUnlabeled;
}

std::string_view to_string(UnlabeledCategory category) {
  return name_of(kCategoryNames, category);
}

std::string_view to_string(UnlabeledFactor factor) { return name_of(kFactorNames, factor); }

std::optional<UnlabeledCategory> parse_unlabeled_category(std::string_view name) {
  return value_of(kCategoryNames, name);
}

std::optional<UnlabeledFactor> parse_unlabeled_factor(std::string_view name) {
  return value_of(kFactorNames, name);
}

const std::vector<UnlabeledCategory> &all_unlabeled_categories() {
  static const std::vector<UnlabeledCategory> all = [] {
    std::vector<UnlabeledCategory> v;
    for (const auto &[c, name] : kCategoryNames) v.push_back(c);
    return v;
  }();
  return all;
}

const std::vector<UnlabeledFactor> &all_unlabeled_factors() {
  static const std::vector<UnlabeledFactor> all = [] {
    std::vector<UnlabeledFactor> v;
    for (const auto &[f, name] : kFactorNames) v.push_back(f);
    return v;
  }();
  return all;
}

void to_json(json &j, const UnlabeledTag &tag) {
  json factors = json::array();
  for (UnlabeledFactor f : tag.factors) factors.push_back(to_string(f));
  j = json{{"category", to_string(tag.category)}, {"factors", std::move(factors)}};
}

void from_json(const json &j, UnlabeledTag &tag) {
  auto category = parse_unlabeled_category(j.at("category").get<std::string>());
  if (!category) throw InputError("unknown unlabeled category");
  tag.category = *category;
  tag.factors.clear();
  if (auto it = j.find("factors"); it != j.end()) {
    for (const json &f : *it) {
      auto factor = parse_unlabeled_factor(f.get<std::string>());
      if (!factor) throw InputError("unknown unlabeled factor '" + f.get<std::string>() + "'");
      tag.factors.insert(*factor);
    }
  }
}

void to_json(json &j, const MentionInfo &info) {
  json morph = json::array();
  for (const auto &m : info.morph_tags) morph.push_back(m ? json(*m) : json(nullptr));
  j = json{{"id", info.id},
           {"doc_id", info.doc_id},
           {"subcategory", info.subcategory},
           {"surface", info.surface},
           {"ne_type", to_string(info.ne_type)},
           {"left", info.left_context},
           {"right", info.right_context},
           {"morph_tags", std::move(morph)}};
}

void from_json(const json &j, MentionInfo &info) {
  info.id = j.at("id").get<std::string>();
  info.doc_id = j.at("doc_id").get<std::string>();
  info.subcategory = j.at("subcategory").get<std::string>();
  info.surface = j.at("surface").get<std::string>();
  auto type = parse_ne_type(j.at("ne_type").get<std::string>());
  if (!type) throw InputError("unknown NE type");
  info.ne_type = *type;
  info.left_context = j.at("left").get<std::string>();
  info.right_context = j.at("right").get<std::string>();
  info.morph_tags.clear();
  for (const json &m : j.at("morph_tags")) {
    info.morph_tags.push_back(m.is_null() ? std::nullopt
                                          : std::optional<std::string>(m.get<std::string>()));
  }
}

void to_json(json &j, const WorkflowRecord &r) {
  j = json{{"mention", r.mention},
           {"state", to_string(r.state)},
           {"model_round_done", r.model_round_done},
           {"search_round_done", r.search_round_done},
           {"model_candidates", r.model_candidates},
           {"search_candidates", r.search_candidates},
           {"decisions", r.decisions}};
  put_optional(j, "correct_wiki", r.correct_wiki);
  put_optional(j, "suggestion_wiki", r.suggestion_wiki);
  put_optional(j, "overlap", r.overlap);
  put_optional(j, "unlabeled_tag", r.unlabeled_tag);
}

std::string encode_event(const Event &e) {
  json j{{"seq", e.seq},
         {"type", e.type},
         {"mention_id", e.mention_id},
         {"payload", e.payload},
         {"annotator", e.annotator},
         {"ts", e.timestamp_ms}};
  if (e.request_id) j["request_id"] = *e.request_id;
  return j.dump();
}

Event decode_event(std::string_view line) {
  json j = json::parse(line, nullptr, false);
  if (!j.is_object()) throw InputError("journal record is not a JSON object");
  try {
    Event e;
    e.seq = j.at("seq").get<std::uint64_t>();
    e.type = j.at("type").get<std::string>();
    e.mention_id = j.at("mention_id").get<std::string>();
    e.payload = j.at("payload");
    e.annotator = j.at("annotator").get<std::string>();
    e.timestamp_ms = j.at("ts").get<std::int64_t>();
    if (auto it = j.find("request_id"); it != j.end()) e.request_id = it->get<std::string>();
    return e;
  } catch (const json::exception &ex) {
    throw InputError(std::string("malformed journal record: ") + ex.what());
  }
}

Store::Store(Clock &clock, EventSink *sink, std::vector<std::string> language_priority)
    : clock_(clock), sink_(sink), language_priority_(std::move(language_priority)) {}

void Store::init(std::span<const Mention> mentions,
                 const std::map<std::string, std::string> &subcategory_by_doc) {
  std::vector<MentionInfo> infos;
  for (const Mention &m : mentions) {
    if (!is_linkable(m.ne_type)) continue;
    MentionInfo info;
    info.id = m.id;
    info.doc_id = m.doc_id;
    auto sub = subcategory_by_doc.find(m.doc_id);
    info.subcategory = sub == subcategory_by_doc.end() ? "unknown" : sub->second;
    info.surface = m.surface;
    info.ne_type = m.ne_type;
    info.left_context = m.left_context;
    info.right_context = m.right_context;
    info.morph_tags = m.morph_tags;
    infos.push_back(std::move(info));
  }
  init(infos);
}

void Store::init(std::span<const MentionInfo> mentions) {
  if (finalized_) throw InitError("store is finalized");
  std::set<std::string> seen;
  for (const MentionInfo &m : mentions) {
    if (m.id.empty()) throw InitError("empty mention id");
    if (index_.count(m.id) || !seen.insert(m.id).second) {
      throw InitError("duplicate mention id '" + m.id + "'");
    }
  }
  for (const MentionInfo &m : mentions) {
    if (!is_linkable(m.ne_type)) continue;
    Event e;
    e.type = kMentionAdded;
    e.mention_id = m.id;
    e.payload = m;
    commit(std::move(e));
  }
}

WorkflowState Store::record_model_suggestion(const std::string &mention_id,
                                             std::vector<Candidate> candidates) {
  Event e;
  e.type = kModelSuggestion;
  e.mention_id = mention_id;
  e.payload = json{{"candidates", candidates}};
  commit(std::move(e));
  return record(mention_id).state;
}

WorkflowState Store::apply_model_decision(const std::string &mention_id,
                                          ModelDecision decision,
                                          const std::string &annotator_id,
                                          std::optional<std::string> request_id) {
  Event e;
  e.type = kModelDecision;
  e.mention_id = mention_id;
  e.payload = json{{"decision", decision == ModelDecision::kAccept ? "accept" : "reject"}};
  e.annotator = annotator_id;
  e.request_id = std::move(request_id);
  commit(std::move(e));
  return record(mention_id).state;
}

WorkflowState Store::attach_search_results(const std::string &mention_id,
                                           const SearchResult &result) {
  json status = json::object();
  for (const auto &[host, s] : result.per_host_status) status[host] = s.to_string();
  Event e;
  e.type = kSearchResults;
  e.mention_id = mention_id;
  e.payload = json{{"candidates", result.candidates}, {"status", std::move(status)}};
  commit(std::move(e));
  return record(mention_id).state;
}

WorkflowState Store::apply_search_selection(const std::string &mention_id,
                                            SearchSelection selection,
                                            const std::string &annotator_id,
                                            std::optional<std::string> request_id) {
  Event e;
  e.type = kSearchSelection;
  e.mention_id = mention_id;
  if (const auto *index = std::get_if<std::size_t>(&selection)) {
    e.payload = json{{"index", *index}};
  } else {
    e.payload = json{{"no_match", true}};
  }
  e.annotator = annotator_id;
  e.request_id = std::move(request_id);
  commit(std::move(e));
  return record(mention_id).state;
}

void Store::finalize() {
  if (finalized_) return;
  Event e;
  e.type = kFinalize;
  e.payload = json::object();
  commit(std::move(e));
}

void Store::tag_unlabeled(const std::string &mention_id, const UnlabeledTag &tag,
                          const std::string &annotator_id,
                          std::optional<std::string> request_id) {
  Event e;
  e.type = kUnlabeledTag;
  e.mention_id = mention_id;
  e.payload = json{{"tag", tag}};
  e.annotator = annotator_id;
  e.request_id = std::move(request_id);
  commit(std::move(e));
}

void Store::commit(Event event) {
  event.seq = last_seq_ + 1;
  event.timestamp_ms = std::max(to_epoch_ms(clock_.now()), last_timestamp_ms_);
  execute(event, /*mutate=*/false);
  if (sink_ != nullptr) sink_->append(event);
  execute(event, /*mutate=*/true);
}

void Store::apply(const Event &event) {
  if (event.seq <= last_seq_) {
    throw InputError("journal event " + std::to_string(event.seq) + " is out of order");
  }
  if (event.timestamp_ms < last_timestamp_ms_) {
    throw InputError("journal timestamps go backwards at event " + std::to_string(event.seq));
  }
  execute(event, false);
  execute(event, true);
}

Store Store::replay(std::span<const Event> events, Clock &clock,
                    std::vector<std::string> language_priority) {
  Store store(clock, nullptr, std::move(language_priority));
  for (const Event &e : events) store.apply(e);
  return store;
}

WorkflowRecord &Store::mutable_record(const std::string &mention_id) {
  auto it = index_.find(mention_id);
  if (it == index_.end()) throw NotFoundError("unknown mention '" + mention_id + "'");
  return records_[it->second];
}

const WorkflowRecord &Store::record(const std::string &mention_id) const {
  auto it = index_.find(mention_id);
  if (it == index_.end()) throw NotFoundError("unknown mention '" + mention_id + "'");
  return records_[it->second];
}

bool Store::contains(const std::string &mention_id) const {
  return index_.count(mention_id) > 0;
}

std::vector<Candidate> Store::order_by_language(std::vector<Candidate> candidates) const {
  auto rank = [this](const Candidate &c) {
    auto it = std::find(language_priority_.begin(), language_priority_.end(), c.language);
    return static_cast<std::size_t>(it - language_priority_.begin());
  };
  std::stable_sort(candidates.begin(), candidates.end(),
                   [&](const Candidate &a, const Candidate &b) { return rank(a) < rank(b); });
  return candidates;
}

void Store::execute(const Event &e, bool mutate) {
  auto transition_error = [&](const WorkflowRecord &r) {
    return TransitionError(e.type + " not allowed for " + e.mention_id + " in state " +
                           std::string(to_string(r.state)));
  };
  auto decide = [&](WorkflowRecord &r, std::string action) {
    r.decisions.push_back(Decision{e.annotator, std::move(action), e.timestamp_ms});
  };

  if (e.type == kMentionAdded) {
    MentionInfo info = e.payload.get<MentionInfo>();
    if (info.id != e.mention_id) throw InputError("mention_added id mismatch");
    if (index_.count(info.id)) throw InitError("duplicate mention id '" + info.id + "'");
    if (finalized_) throw InitError("store is finalized");
    if (mutate) {
      index_[info.id] = records_.size();
      WorkflowRecord r;
      r.mention = std::move(info);
      records_.push_back(std::move(r));
    }
  } else if (e.type == kModelSuggestion) {
    const WorkflowRecord &r = record(e.mention_id);
    if (r.state != WorkflowState::kPending || r.model_round_done) throw transition_error(r);
    std::vector<Candidate> candidates = candidates_from(e.payload);
    if (mutate) {
      WorkflowRecord &w = mutable_record(e.mention_id);
      w.model_round_done = true;
      if (!candidates.empty() && candidates.front().resolution) {
        w.state = WorkflowState::kModelSuggested;
      }
      w.model_candidates = std::move(candidates);
    }
  } else if (e.type == kModelDecision) {
    const WorkflowRecord &r = record(e.mention_id);
    if (r.state != WorkflowState::kModelSuggested) throw transition_error(r);
    const std::string decision = e.payload.at("decision").get<std::string>();
    if (decision != "accept" && decision != "reject") {
      throw InputError("unknown model decision '" + decision + "'");
    }
    if (mutate) {
      WorkflowRecord &w = mutable_record(e.mention_id);
      if (decision == "accept") {
        w.correct_wiki = w.model_candidates.front().resolution;
        w.state = WorkflowState::kModelAccepted;
      } else {
        w.state = WorkflowState::kModelRejected;
      }
      decide(w, decision);
    }
  } else if (e.type == kSearchResults) {
    const WorkflowRecord &r = record(e.mention_id);
    const bool accepted = r.state == WorkflowState::kModelAccepted;
    const bool eligible = r.state == WorkflowState::kModelRejected ||
                          (r.state == WorkflowState::kPending && r.model_round_done);
    if ((!accepted && !eligible) || r.search_round_done) throw transition_error(r);
    std::vector<Candidate> candidates = order_by_language(candidates_from(e.payload));
    if (mutate) {
      WorkflowRecord &w = mutable_record(e.mention_id);
      w.search_round_done = true;
      if (accepted) {
        bool found = false;
        for (const Candidate &c : candidates) {
          if (c.resolution && c.resolution->qid == w.correct_wiki->qid) found = true;
        }
        w.overlap = found;
      } else if (!candidates.empty()) {
        w.state = WorkflowState::kSearchSuggested;
      }
      w.search_candidates = std::move(candidates);
    }
  } else if (e.type == kSearchSelection) {
    const WorkflowRecord &r = record(e.mention_id);
    if (r.state != WorkflowState::kSearchSuggested) throw transition_error(r);
    const bool no_match = e.payload.contains("no_match");
    std::size_t index = 0;
    if (!no_match) {
      index = e.payload.at("index").get<std::size_t>();
      if (index >= r.search_candidates.size()) {
        throw InputError("selection " + std::to_string(index) + " out of range (" +
                         std::to_string(r.search_candidates.size()) + " candidates)");
      }
      if (!r.search_candidates[index].resolution) {
        throw InputError("candidate " + std::to_string(index) + " has no Wikidata item");
      }
    }
    if (mutate) {
      WorkflowRecord &w = mutable_record(e.mention_id);
      if (no_match) {
        w.state = WorkflowState::kUnlabeled;
        decide(w, "no_match");
      } else {
        w.suggestion_wiki = w.search_candidates[index].resolution;
        w.state = WorkflowState::kSearchAccepted;
        decide(w, "select:" + std::to_string(index));
      }
    }
  } else if (e.type == kFinalize) {
    if (mutate) {
      for (WorkflowRecord &w : records_) {
        if (!is_terminal(w.state)) w.state = WorkflowState::kUnlabeled;
      }
      finalized_ = true;
    }
  } else if (e.type == kUnlabeledTag) {
    const WorkflowRecord &r = record(e.mention_id);
    if (r.state != WorkflowState::kUnlabeled) throw transition_error(r);
    UnlabeledTag tag = e.payload.at("tag").get<UnlabeledTag>();
    if (mutate) {
      WorkflowRecord &w = mutable_record(e.mention_id);
      decide(w, "tag:" + std::string(to_string(tag.category)));
      w.unlabeled_tag = std::move(tag);
    }
  } else {
    throw InputError("unknown event type '" + e.type + "'");
  }

  if (mutate) {
    last_seq_ = e.seq;
    last_timestamp_ms_ = std::max(last_timestamp_ms_, e.timestamp_ms);
    if (e.request_id) requests_[*e.request_id] = e.mention_id;
  }
}

std::string Store::snapshot() const {
  json j{{"version", 1},
         {"seq", last_seq_},
         {"last_ts", last_timestamp_ms_},
         {"finalized", finalized_},
         {"language_priority", language_priority_},
         {"records", records_},
         {"requests", requests_}};
  return j.dump();
}

Store Store::from_snapshot(std::string_view snapshot, Clock &clock, EventSink *sink) {
  json j = json::parse(snapshot, nullptr, false);
  if (!j.is_object() || j.value("version", 0) != 1) {
    throw InputError("unsupported store snapshot");
  }
  Store store(clock, sink, j.at("language_priority").get<std::vector<std::string>>());
  store.last_seq_ = j.at("seq").get<std::uint64_t>();
  store.last_timestamp_ms_ = j.at("last_ts").get<std::int64_t>();
  store.finalized_ = j.at("finalized").get<bool>();
  for (const json &r : j.at("records")) {
    WorkflowRecord record;
    from_json_record(r, record);
    store.index_[record.mention.id] = store.records_.size();
    store.records_.push_back(std::move(record));
  }
  store.requests_ = j.at("requests").get<std::map<std::string, std::string>>();
  return store;
}

std::map<WorkflowState, std::size_t> Store::state_counts() const {
  std::map<WorkflowState, std::size_t> counts;
  for (const auto &[state, name] : kStateNames) counts[state] = 0;
  for (const WorkflowRecord &r : records_) ++counts[r.state];
  return counts;
}

std::optional<std::string> Store::find_request(const std::string &request_id) const {
  auto it = requests_.find(request_id);
  if (it == requests_.end()) return std::nullopt;
  return it->second;
}

void export_tsv(const Store &store, std::ostream &out) {
  if (!store.finalized()) throw ExportError("store must be finalized before export");
  out << "mention_id\tdoc_id\tsubcategory\tsurface\tne_type\tcorrect_wiki\t"
         "suggestion_wiki\tlabel_language\tstate\n";
  for (const WorkflowRecord &r : store.records()) {
    const ResolvedEntity *label = r.label();
    out << r.mention.id << '\t' << r.mention.doc_id << '\t' << r.mention.subcategory << '\t'
        << r.mention.surface << '\t' << to_string(r.mention.ne_type) << '\t'
        << (r.correct_wiki ? r.correct_wiki->qid : "") << '\t'
        << (r.suggestion_wiki ? r.suggestion_wiki->qid : "") << '\t'
        << (label ? label->language : "") << '\t' << to_string(r.state) << '\n';
  }
}

}  // namespace elboot
