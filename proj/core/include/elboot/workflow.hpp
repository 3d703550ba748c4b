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

#ifndef ELBOOT_WORKFLOW_HPP_
#define ELBOOT_WORKFLOW_HPP_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "elboot/clock.hpp"
#include "elboot/corpus.hpp"
#include "elboot/types.hpp"
#include "elboot/wapis.hpp"

namespace elboot {

enum class WorkflowState {
  kPending,
  kModelSuggested,
  kModelAccepted,
  kModelRejected,
  kSearchSuggested,
  kSearchAccepted,
  kUnlabeled,
};

std::string_view to_string(WorkflowState state);
std::optional<WorkflowState> parse_workflow_state(std::string_view name);
bool is_terminal(WorkflowState state);

enum class UnlabeledCategory {
  kPerson,
  kFictionalCharacter,
  kInstitutionCompany,
  kLocation,
  kBookTitle,
  kBrand,
  kEvent,
  kShow,
  kNomenclature,
  kMagazine,
  kDeity,
  kOther,
};

enum class UnlabeledFactor {
  kFirstNameOnly,
  kLastNameOnly,
  kNickname,
  kNameInsertion,
  kAbbreviation,
  kNoContext,
  kInexactLocation,
  kTranslatedTitle,
  kMisspelling,
  kNone,
};

std::string_view to_string(UnlabeledCategory category);
std::string_view to_string(UnlabeledFactor factor);
std::optional<UnlabeledCategory> parse_unlabeled_category(std::string_view name);
std::optional<UnlabeledFactor> parse_unlabeled_factor(std::string_view name);
const std::vector<UnlabeledCategory> &all_unlabeled_categories();
const std::vector<UnlabeledFactor> &all_unlabeled_factors();

// Why an unlabeled mention got no label.
struct UnlabeledTag {
  UnlabeledCategory category = UnlabeledCategory::kOther;
  std::set<UnlabeledFactor> factors;

  friend bool operator==(const UnlabeledTag &, const UnlabeledTag &) = default;
};

struct Decision {
  std::string annotator_id;
  std::string action;
  std::int64_t timestamp_ms = 0;

  friend bool operator==(const Decision &, const Decision &) = default;
};

// The parts of a Mention the workflow needs after ingestion.
struct MentionInfo {
  std::string id;
  std::string doc_id;
  std::string subcategory;
  std::string surface;
  NeType ne_type = NeType::kPerson;
  std::string left_context;
  std::string right_context;
  std::vector<std::optional<std::string>> morph_tags;

  friend bool operator==(const MentionInfo &, const MentionInfo &) = default;
};

struct WorkflowRecord {
  MentionInfo mention;
  WorkflowState state = WorkflowState::kPending;
  bool model_round_done = false;
  bool search_round_done = false;
  std::vector<Candidate> model_candidates;
  std::vector<Candidate> search_candidates;
  std::optional<ResolvedEntity> correct_wiki;     // model-derived label
  std::optional<ResolvedEntity> suggestion_wiki;  // search-derived label
  std::optional<bool> overlap;
  std::vector<Decision> decisions;
  std::optional<UnlabeledTag> unlabeled_tag;

  // Label that ended up on the mention, if any.
  const ResolvedEntity *label() const {
    if (correct_wiki) return &*correct_wiki;
    if (suggestion_wiki) return &*suggestion_wiki;
    return nullptr;
  }

  friend bool operator==(const WorkflowRecord &, const WorkflowRecord &) = default;
};

// One journal record. Every store mutation is exactly one event.
struct Event {
  std::uint64_t seq = 0;
  std::string type;
  std::string mention_id;
  nlohmann::json payload;
  std::string annotator;
  std::int64_t timestamp_ms = 0;
  std::optional<std::string> request_id;

  friend bool operator==(const Event &, const Event &) = default;
};

std::string encode_event(const Event &event);
Event decode_event(std::string_view line);

class EventSink {
 public:
  virtual ~EventSink() = default;
  virtual void append(const Event &event) = 0;
};

// Keeps events in memory; handy for tests and replay checks.
class MemoryJournal final : public EventSink {
 public:
  void append(const Event &event) override { events_.push_back(event); }
  const std::vector<Event> &events() const { return events_; }

 private:
  std::vector<Event> events_;
};

enum class ModelDecision { kAccept, kReject };

struct NoMatch {};
using SearchSelection = std::variant<std::size_t, NoMatch>;

// Per-mention annotation state machine.
//
// Pending -> ModelSuggested -> ModelAccepted | ModelRejected
// ModelRejected (or Pending with no usable model candidate)
//   -> SearchSuggested -> SearchAccepted | Unlabeled
// finalize(): every non-terminal record -> Unlabeled
//
// Each operation validates, appends one event to the sink, then applies it.
// replay() feeds events through the same validation, so a journal always
// rebuilds the same store. Not thread-safe: callers serialise writers.
class Store {
 public:
  explicit Store(Clock &clock, EventSink *sink = nullptr,
                 std::vector<std::string> language_priority = {"is", "en"});

  // One Pending record per linkable mention; other types are skipped.
  // Throws InitError on duplicate ids (including ids already present).
  void init(std::span<const Mention> mentions,
            const std::map<std::string, std::string> &subcategory_by_doc = {});
  void init(std::span<const MentionInfo> mentions);

  // Stores the generator's list. A top candidate carrying a resolution goes
  // to review (ModelSuggested); otherwise the record stays Pending and is
  // only eligible for the search round.
  WorkflowState record_model_suggestion(const std::string &mention_id,
                                        std::vector<Candidate> candidates);

  WorkflowState apply_model_decision(const std::string &mention_id,
                                     ModelDecision decision,
                                     const std::string &annotator_id,
                                     std::optional<std::string> request_id = std::nullopt);

  // ModelRejected / Pending-after-model-round: non-empty -> SearchSuggested,
  // candidates ordered by language priority. ModelAccepted: only computes
  // overlap, state unchanged.
  WorkflowState attach_search_results(const std::string &mention_id,
                                      const SearchResult &result);

  WorkflowState apply_search_selection(const std::string &mention_id,
                                       SearchSelection selection,
                                       const std::string &annotator_id,
                                       std::optional<std::string> request_id = std::nullopt);

  // Every non-terminal record becomes Unlabeled. Idempotent.
  void finalize();

  void tag_unlabeled(const std::string &mention_id, const UnlabeledTag &tag,
                     const std::string &annotator_id,
                     std::optional<std::string> request_id = std::nullopt);

  // Applies a journal event (validating it). Events must arrive in seq order.
  void apply(const Event &event);
  static Store replay(std::span<const Event> events, Clock &clock,
                      std::vector<std::string> language_priority = {"is", "en"});

  // Canonical JSON of the whole store; equal stores give identical bytes.
  std::string snapshot() const;
  static Store from_snapshot(std::string_view snapshot, Clock &clock,
                             EventSink *sink = nullptr);

  const WorkflowRecord &record(const std::string &mention_id) const;
  bool contains(const std::string &mention_id) const;
  const std::vector<WorkflowRecord> &records() const { return records_; }
  std::size_t size() const { return records_.size(); }
  bool finalized() const { return finalized_; }
  std::uint64_t last_seq() const { return last_seq_; }
  std::map<WorkflowState, std::size_t> state_counts() const;

  // Mention id of an earlier event with this request id.
  std::optional<std::string> find_request(const std::string &request_id) const;

  void set_sink(EventSink *sink) { sink_ = sink; }
  const std::vector<std::string> &language_priority() const { return language_priority_; }

 private:
  void commit(Event event);
  // Validates; mutates only when `mutate` is set.
  void execute(const Event &event, bool mutate);
  WorkflowRecord &mutable_record(const std::string &mention_id);
  std::vector<Candidate> order_by_language(std::vector<Candidate> candidates) const;

  Clock &clock_;
  EventSink *sink_;
  std::vector<std::string> language_priority_;
  std::vector<WorkflowRecord> records_;
  std::map<std::string, std::size_t> index_;
  std::map<std::string, std::string> requests_;
  bool finalized_ = false;
  std::uint64_t last_seq_ = 0;
  std::int64_t last_timestamp_ms_ = 0;
};

// Export TSV, one row per record. Header:
// mention_id doc_id subcategory surface ne_type correct_wiki suggestion_wiki
// label_language state
// Throws ExportError unless the store is finalized.
void export_tsv(const Store &store, std::ostream &out);

void to_json(nlohmann::json &j, const Decision &decision);
void from_json(const nlohmann::json &j, Decision &decision);
void to_json(nlohmann::json &j, const UnlabeledTag &tag);
void from_json(const nlohmann::json &j, UnlabeledTag &tag);
void to_json(nlohmann::json &j, const MentionInfo &info);
void from_json(const nlohmann::json &j, MentionInfo &info);
void to_json(nlohmann::json &j, const WorkflowRecord &record);

}  // namespace elboot

#endif  // ELBOOT_WORKFLOW_HPP_
