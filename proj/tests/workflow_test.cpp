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

#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "elboot/error.hpp"
#include "elboot/wapis.hpp"
#include "fixtures.hpp"

namespace elboot {
namespace {

using testing::make_info;
using testing::resolved;

SearchResult results(std::vector<Candidate> candidates) {
  SearchResult r;
  r.candidates = std::move(candidates);
  return r;
}

class StoreTest : public ::testing::Test {
 protected:
  void SetUp() override {
    std::vector<MentionInfo> infos{make_info("a", "Jón"), make_info("b", "Björk"),
                                   make_info("c", "Reykjavík", NeType::kLocation)};
    store.init(infos);
  }
  VirtualClock clock;
  MemoryJournal journal;
  Store store{clock, &journal};
};

TEST_F(StoreTest, InitCreatesPendingRecordsAndRejectsDuplicates) {
  EXPECT_EQ(store.size(), 3u);
  EXPECT_EQ(store.record("a").state, WorkflowState::kPending);
  std::vector<MentionInfo> dup{make_info("a")};
  EXPECT_THROW(store.init(dup), InitError);
  EXPECT_EQ(journal.events().size(), 3u);
  EXPECT_THROW(store.record("zzz"), NotFoundError);
}

TEST_F(StoreTest, InitFromMentionsSkipsNonLinkableTypes) {
  Store s(clock);
  Mention person;
  person.id = "d:0:0";
  person.doc_id = "d";
  person.surface = "Jón";
  Mention date = person;
  date.id = "d:0:3";
  date.ne_type = NeType::kDate;
  std::vector<Mention> ms{person, date};
  s.init(ms, {{"d", "news"}});
  EXPECT_EQ(s.size(), 1u);
  EXPECT_EQ(s.record("d:0:0").mention.subcategory, "news");
}

TEST_F(StoreTest, ModelAcceptPath) {
  EXPECT_EQ(store.record_model_suggestion(
                "a", {resolved(CandidateSource::kModel, "is", "Jón", "Q1"),
                      resolved(CandidateSource::kModel, "en", "John", "Q2")}),
            WorkflowState::kModelSuggested);
  EXPECT_EQ(store.apply_model_decision("a", ModelDecision::kAccept, "ann"),
            WorkflowState::kModelAccepted);
  const WorkflowRecord &r = store.record("a");
  ASSERT_TRUE(r.correct_wiki.has_value());
  EXPECT_EQ(r.correct_wiki->qid, "Q1");
  EXPECT_EQ(r.label()->qid, "Q1");
  ASSERT_EQ(r.decisions.size(), 1u);
  EXPECT_EQ(r.decisions[0].action, "accept");
  EXPECT_EQ(r.decisions[0].annotator_id, "ann");

  // Search after acceptance only records overlap.
  EXPECT_EQ(store.attach_search_results(
                "a", results({resolved(CandidateSource::kSearch, "en", "Jón", "Q1")})),
            WorkflowState::kModelAccepted);
  EXPECT_EQ(store.record("a").overlap, true);
  EXPECT_THROW(store.attach_search_results("a", results({})), TransitionError);
}

TEST_F(StoreTest, OverlapFalseWhenSearchMissesTheItem) {
  store.record_model_suggestion("a", {resolved(CandidateSource::kModel, "is", "Jón", "Q1")});
  store.apply_model_decision("a", ModelDecision::kAccept, "ann");
  store.attach_search_results("a", results({resolved(CandidateSource::kSearch, "is", "Jón", "Q9")}));
  EXPECT_EQ(store.record("a").overlap, false);
}

TEST_F(StoreTest, RejectThenSearchSelection) {
  store.record_model_suggestion("b", {resolved(CandidateSource::kModel, "is", "Björk", "Q1")});
  store.apply_model_decision("b", ModelDecision::kReject, "ann");
  EXPECT_EQ(store.record("b").state, WorkflowState::kModelRejected);
  Candidate unresolved;
  unresolved.source = CandidateSource::kSearch;
  unresolved.language = "is";
  unresolved.title = "Björk (aðgreining)";
  EXPECT_EQ(store.attach_search_results(
                "b", results({resolved(CandidateSource::kSearch, "en", "Björk", "Q42455"),
                              unresolved,
                              resolved(CandidateSource::kSearch, "is", "Björk", "Q42455")})),
            WorkflowState::kSearchSuggested);
  // Icelandic first, API order kept within a language.
  const auto &c = store.record("b").search_candidates;
  ASSERT_EQ(c.size(), 3u);
  EXPECT_EQ(c[0].title, "Björk (aðgreining)");
  EXPECT_EQ(c[1].language, "is");
  EXPECT_EQ(c[2].language, "en");

  EXPECT_THROW(store.apply_search_selection("b", std::size_t{0}, "ann"), InputError);
  EXPECT_THROW(store.apply_search_selection("b", std::size_t{3}, "ann"), InputError);
  EXPECT_EQ(store.apply_search_selection("b", std::size_t{2}, "ann"),
            WorkflowState::kSearchAccepted);
  EXPECT_EQ(store.record("b").suggestion_wiki->language, "en");
  EXPECT_EQ(store.record("b").decisions.back().action, "select:2");
}

TEST_F(StoreTest, UnresolvedTopCandidateStaysPendingForSearch) {
  Candidate top;
  top.language = "is";
  top.title = "Jón";
  EXPECT_EQ(store.record_model_suggestion("a", {top}), WorkflowState::kPending);
  EXPECT_TRUE(store.record("a").model_round_done);
  EXPECT_THROW(store.record_model_suggestion("a", {}), TransitionError);
  EXPECT_EQ(store.attach_search_results("a", results({})), WorkflowState::kPending);
  EXPECT_TRUE(store.record("a").search_round_done);
}

TEST_F(StoreTest, NoMatchMakesUnlabeledAndTagsApply) {
  store.record_model_suggestion("c", {});
  store.attach_search_results("c", results({resolved(CandidateSource::kSearch, "is", "X", "Q5")}));
  EXPECT_EQ(store.apply_search_selection("c", NoMatch{}, "ann"), WorkflowState::kUnlabeled);
  UnlabeledTag tag{UnlabeledCategory::kLocation, {UnlabeledFactor::kInexactLocation}};
  store.tag_unlabeled("c", tag, "ann2");
  EXPECT_EQ(store.record("c").unlabeled_tag, tag);
  EXPECT_THROW(store.tag_unlabeled("a", tag, "ann2"), TransitionError);
}

TEST_F(StoreTest, IllegalTransitionsThrowAndLeaveNoEvent) {
  const std::size_t before = journal.events().size();
  EXPECT_THROW(store.apply_model_decision("a", ModelDecision::kAccept, "ann"), TransitionError);
  EXPECT_THROW(store.apply_search_selection("a", NoMatch{}, "ann"), TransitionError);
  EXPECT_THROW(store.attach_search_results("a", results({})), TransitionError);
  EXPECT_THROW(store.apply_model_decision("nope", ModelDecision::kAccept, "ann"), NotFoundError);
  EXPECT_EQ(journal.events().size(), before);
}

TEST_F(StoreTest, FinalizeIsIdempotentAndClosesOpenRecords) {
  store.record_model_suggestion("a", {resolved(CandidateSource::kModel, "is", "Jón", "Q1")});
  store.finalize();
  const std::size_t events = journal.events().size();
  store.finalize();
  EXPECT_EQ(journal.events().size(), events);
  EXPECT_TRUE(store.finalized());
  for (const WorkflowRecord &r : store.records()) EXPECT_EQ(r.state, WorkflowState::kUnlabeled);
  std::vector<MentionInfo> late{make_info("late")};
  EXPECT_THROW(store.init(late), InitError);
}

TEST_F(StoreTest, RequestIdsAreRemembered) {
  store.record_model_suggestion("a", {resolved(CandidateSource::kModel, "is", "Jón", "Q1")});
  store.apply_model_decision("a", ModelDecision::kReject, "ann", "req-1");
  EXPECT_EQ(store.find_request("req-1"), "a");
  EXPECT_EQ(store.find_request("req-2"), std::nullopt);
}

TEST_F(StoreTest, TimestampsNeverGoBackwards) {
  clock.advance(std::chrono::seconds(10));
  store.record_model_suggestion("a", {});
  clock.set(clock.now() - std::chrono::hours(1));
  store.record_model_suggestion("b", {});
  const auto &ev = journal.events();
  for (std::size_t i = 1; i < ev.size(); ++i) {
    EXPECT_EQ(ev[i].seq, ev[i - 1].seq + 1);
    EXPECT_GE(ev[i].timestamp_ms, ev[i - 1].timestamp_ms);
  }
}

TEST_F(StoreTest, ExportRequiresFinalize) {
  std::ostringstream out;
  EXPECT_THROW(export_tsv(store, out), ExportError);
}

TEST_F(StoreTest, ExportRows) {
  store.record_model_suggestion("a", {resolved(CandidateSource::kModel, "is", "Jón", "Q1")});
  store.apply_model_decision("a", ModelDecision::kAccept, "ann");
  store.record_model_suggestion("b", {});
  store.attach_search_results("b", results({resolved(CandidateSource::kSearch, "en", "Björk", "Q7")}));
  store.apply_search_selection("b", std::size_t{0}, "ann");
  store.finalize();
  std::ostringstream out;
  export_tsv(store, out);
  EXPECT_EQ(out.str(),
            "mention_id\tdoc_id\tsubcategory\tsurface\tne_type\tcorrect_wiki\tsuggestion_wiki\t"
            "label_language\tstate\n"
            "a\td\tnews\tJón\tPerson\tQ1\t\tis\tModelAccepted\n"
            "b\td\tnews\tBjörk\tPerson\t\tQ7\ten\tSearchAccepted\n"
            "c\td\tnews\tReykjavík\tLocation\t\t\t\tUnlabeled\n");
}

TEST(Events, EncodeDecodeRoundTrip) {
  Event e;
  e.seq = 7;
  e.type = "model_decision";
  e.mention_id = "d:1:2";
  e.payload = {{"decision", "accept"}};
  e.annotator = "anna";
  e.timestamp_ms = 1'600'000'000'123;
  e.request_id = "r1";
  const std::string line = encode_event(e);
  EXPECT_EQ(line.find('\n'), std::string::npos);
  EXPECT_EQ(decode_event(line), e);
  EXPECT_THROW(decode_event("{"), InputError);
}

TEST(Replay, RebuildsIdenticalSnapshotsFromRandomHistories) {
  std::mt19937_64 rng(21);
  for (int round = 0; round < 100; ++round) {
    VirtualClock clock;
    MemoryJournal journal;
    Store original = testing::random_finalized_store(rng, clock, &journal);
    VirtualClock replay_clock(from_epoch_ms(0));
    Store rebuilt = Store::replay(journal.events(), replay_clock);
    ASSERT_EQ(rebuilt.snapshot(), original.snapshot());
    ASSERT_EQ(rebuilt.last_seq(), journal.events().size());

    Store restored = Store::from_snapshot(original.snapshot(), clock);
    ASSERT_EQ(restored.snapshot(), original.snapshot());
    ASSERT_EQ(restored.records(), original.records());
  }
}

TEST(Replay, RejectsOutOfOrderAndInvalidEvents) {
  VirtualClock clock;
  MemoryJournal journal;
  Store s(clock, &journal);
  std::vector<MentionInfo> infos{make_info("a")};
  s.init(infos);
  s.record_model_suggestion("a", {});
  std::vector<Event> events = journal.events();
  std::swap(events[0], events[1]);
  EXPECT_THROW(Store::replay(events, clock), Error);

  std::vector<Event> bad = journal.events();
  bad[1].type = "model_decision";
  bad[1].payload = {{"decision", "accept"}};
  EXPECT_THROW(Store::replay(bad, clock), TransitionError);
}

TEST(Replay, SnapshotIsCanonical) {
  VirtualClock clock;
  Store s(clock);
  std::vector<MentionInfo> infos{make_info("a"), make_info("b")};
  s.init(infos);
  const std::string snap = s.snapshot();
  EXPECT_EQ(Store::from_snapshot(snap, clock).snapshot(), snap);
  auto j = nlohmann::json::parse(snap);
  EXPECT_EQ(j["records"].size(), 2u);
}

TEST(Names, StatesCategoriesFactorsRoundTrip) {
  for (WorkflowState s : {WorkflowState::kPending, WorkflowState::kModelSuggested,
                          WorkflowState::kModelAccepted, WorkflowState::kModelRejected,
                          WorkflowState::kSearchSuggested, WorkflowState::kSearchAccepted,
                          WorkflowState::kUnlabeled}) {
    EXPECT_EQ(parse_workflow_state(to_string(s)), s);
  }
  EXPECT_EQ(all_unlabeled_categories().size(), 12u);
  EXPECT_EQ(all_unlabeled_factors().size(), 10u);
  for (auto c : all_unlabeled_categories()) EXPECT_EQ(parse_unlabeled_category(to_string(c)), c);
  for (auto f : all_unlabeled_factors()) EXPECT_EQ(parse_unlabeled_factor(to_string(f)), f);
  EXPECT_TRUE(is_terminal(WorkflowState::kModelAccepted));
  EXPECT_TRUE(is_terminal(WorkflowState::kSearchAccepted));
  EXPECT_TRUE(is_terminal(WorkflowState::kUnlabeled));
  EXPECT_FALSE(is_terminal(WorkflowState::kModelRejected));
  EXPECT_FALSE(is_terminal(WorkflowState::kSearchSuggested));
}

}  // namespace
}  // namespace elboot
