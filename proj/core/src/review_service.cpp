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

#include "elboot/review_service.hpp"

#include <ostream>
#include <sstream>

#include "elboot/error.hpp"

namespace elboot {

using nlohmann::json;

std::string_view to_string(Stage stage) {
  switch (stage) {
    case Stage::kModelReview:
      return "model_review";
    case Stage::kSearchReview:
      return "search_review";
    case Stage::kTaxonomy:
      return "taxonomy";
  }
  return "?";
}

Stage parse_stage(std::string_view name) {
  if (name == "model_review") return Stage::kModelReview;
  if (name == "search_review") return Stage::kSearchReview;
  if (name == "taxonomy") return Stage::kTaxonomy;
  throw InputError("unknown stage '" + std::string(name) + "'");
}

ReviewService::ReviewService(Store &store, Clock &clock, ServiceOptions options)
    : store_(store), clock_(clock), options_(std::move(options)), rng_(std::random_device{}()) {}

bool ReviewService::eligible(const WorkflowRecord &record, Stage stage) const {
  switch (stage) {
    case Stage::kModelReview:
      return record.state == WorkflowState::kModelSuggested;
    case Stage::kSearchReview:
      return record.state == WorkflowState::kSearchSuggested;
    case Stage::kTaxonomy:
      return record.state == WorkflowState::kUnlabeled && !record.unlabeled_tag;
  }
  return false;
}

bool ReviewService::leased(const std::string &mention_id, TimePoint now) const {
  auto it = token_by_mention_.find(mention_id);
  if (it == token_by_mention_.end()) return false;
  return leases_by_token_.at(it->second).expires_at > now;
}

std::string ReviewService::new_token() {
  static constexpr char kHex[] = "0123456789abcdef";
  std::string token;
  for (int i = 0; i < 2; ++i) {
    std::uint64_t v = rng_();
    for (int k = 0; k < 16; ++k) {
      token.push_back(kHex[v & 0xF]);
      v >>= 4;
    }
  }
  return token;
}

std::vector<ReviewItem> ReviewService::get_queue(Stage stage, const std::string &annotator_id,
                                                 std::size_t n) {
  std::shared_lock store_lock(store_mu_);
  std::lock_guard lease_lock(lease_mu_);
  const TimePoint now = clock_.now();
  std::vector<ReviewItem> items;
  for (const WorkflowRecord &r : store_.records()) {
    if (items.size() >= n) break;
    if (!eligible(r, stage) || leased(r.mention.id, now)) continue;

    // Drop the expired lease, if any, before handing the mention out again.
    if (auto old = token_by_mention_.find(r.mention.id); old != token_by_mention_.end()) {
      leases_by_token_.erase(old->second);
      token_by_mention_.erase(old);
    }
    Lease lease{r.mention.id, annotator_id, new_token(), stage, now + options_.lease_ttl};
    token_by_mention_[lease.mention_id] = lease.token;

    ReviewItem item;
    item.lease_token = lease.token;
    item.stage = stage;
    item.mention = r.mention;
    item.expires_at = lease.expires_at;
    if (stage == Stage::kModelReview) {
      item.candidates.push_back(r.model_candidates.front());
    } else if (stage == Stage::kSearchReview) {
      item.candidates = r.search_candidates;
    }
    leases_by_token_[lease.token] = std::move(lease);
    items.push_back(std::move(item));
  }
  return items;
}

DecisionOutcome ReviewService::post_decision(const std::string &lease_token,
                                             const DecisionPayload &payload,
                                             std::optional<std::string> request_id) {
  std::unique_lock store_lock(store_mu_);
  if (request_id) {
    if (auto id = store_.find_request(*request_id)) {
      return DecisionOutcome{*id, store_.record(*id).state, true};
    }
  }

  Lease lease;
  {
    std::lock_guard lease_lock(lease_mu_);
    auto it = leases_by_token_.find(lease_token);
    if (it == leases_by_token_.end()) throw ConflictError("unknown lease");
    if (it->second.expires_at <= clock_.now()) throw ConflictError("lease expired");
    lease = it->second;
  }

  auto wrong_stage = [&]() {
    return InputError("decision does not fit stage " + std::string(to_string(lease.stage)));
  };
  const std::string &id = lease.mention_id;
  WorkflowState state = WorkflowState::kPending;
  if (std::holds_alternative<decision::Accept>(payload) ||
      std::holds_alternative<decision::Reject>(payload)) {
    if (lease.stage != Stage::kModelReview) throw wrong_stage();
    state = store_.apply_model_decision(id,
                                        std::holds_alternative<decision::Accept>(payload)
                                            ? ModelDecision::kAccept
                                            : ModelDecision::kReject,
                                        lease.annotator_id, request_id);
  } else if (const auto *select = std::get_if<decision::Select>(&payload)) {
    if (lease.stage != Stage::kSearchReview) throw wrong_stage();
    state = store_.apply_search_selection(id, select->index, lease.annotator_id, request_id);
  } else if (std::holds_alternative<NoMatch>(payload)) {
    if (lease.stage != Stage::kSearchReview) throw wrong_stage();
    state = store_.apply_search_selection(id, NoMatch{}, lease.annotator_id, request_id);
  } else {
    if (lease.stage != Stage::kTaxonomy) throw wrong_stage();
    store_.tag_unlabeled(id, std::get<decision::Tag>(payload).tag, lease.annotator_id,
                         request_id);
    state = store_.record(id).state;
  }

  std::lock_guard lease_lock(lease_mu_);
  leases_by_token_.erase(lease_token);
  token_by_mention_.erase(id);
  return DecisionOutcome{id, state, false};
}

TimePoint ReviewService::renew(const std::string &lease_token) {
  std::lock_guard lease_lock(lease_mu_);
  auto it = leases_by_token_.find(lease_token);
  const TimePoint now = clock_.now();
  if (it == leases_by_token_.end()) throw ConflictError("unknown lease");
  if (it->second.expires_at <= now) throw ConflictError("lease expired");
  it->second.expires_at = now + options_.lease_ttl;
  return it->second.expires_at;
}

Progress ReviewService::progress() const {
  std::shared_lock store_lock(store_mu_);
  Progress p;
  p.states = store_.state_counts();
  for (Stage s : {Stage::kModelReview, Stage::kSearchReview, Stage::kTaxonomy}) {
    p.awaiting[s] = 0;
  }
  for (const WorkflowRecord &r : store_.records()) {
    for (Stage s : {Stage::kModelReview, Stage::kSearchReview, Stage::kTaxonomy}) {
      if (eligible(r, s)) ++p.awaiting[s];
    }
  }
  p.coverage = provisional_coverage(store_);
  p.active_leases = active_leases();
  return p;
}

std::size_t ReviewService::active_leases() const {
  std::lock_guard lease_lock(lease_mu_);
  const TimePoint now = clock_.now();
  std::size_t n = 0;
  for (const auto &[token, lease] : leases_by_token_) {
    if (lease.expires_at > now) ++n;
  }
  return n;
}

json ReviewService::mention(const std::string &mention_id) const {
  std::shared_lock store_lock(store_mu_);
  json j = store_.record(mention_id);
  std::lock_guard lease_lock(lease_mu_);
  if (leased(mention_id, clock_.now())) {
    const Lease &l = leases_by_token_.at(token_by_mention_.at(mention_id));
    j["lease"] = json{{"annotator", l.annotator_id},
                      {"stage", to_string(l.stage)},
                      {"expires_at", to_epoch_ms(l.expires_at)}};
  }
  return j;
}

void ReviewService::export_tsv(std::ostream &out) const {
  std::shared_lock store_lock(store_mu_);
  elboot::export_tsv(store_, out);
}

std::string ReviewService::snapshot() const {
  std::shared_lock store_lock(store_mu_);
  return store_.snapshot();
}

std::uint64_t ReviewService::last_seq() const {
  std::shared_lock store_lock(store_mu_);
  return store_.last_seq();
}

void to_json(json &j, const ReviewItem &item) {
  j = json{{"mention_id", item.mention.id},
           {"lease_token", item.lease_token},
           {"stage", to_string(item.stage)},
           {"doc_id", item.mention.doc_id},
           {"subcategory", item.mention.subcategory},
           {"surface", item.mention.surface},
           {"ne_type", to_string(item.mention.ne_type)},
           {"left", item.mention.left_context},
           {"right", item.mention.right_context},
           {"candidates", item.candidates},
           {"expires_at", to_epoch_ms(item.expires_at)}};
}

void to_json(json &j, const Progress &p) {
  json states = json::object();
  for (const auto &[state, n] : p.states) states[std::string(to_string(state))] = n;
  json awaiting = json::object();
  for (const auto &[stage, n] : p.awaiting) awaiting[std::string(to_string(stage))] = n;
  std::ostringstream coverage_lines;
  render(p.coverage, RenderFormat::kJsonLines, coverage_lines);
  json coverage = json::object();
  std::istringstream in(coverage_lines.str());
  std::string line;
  while (std::getline(in, line)) {
    json m = json::parse(line);
    coverage[m["metric"].get<std::string>()] =
        json{{"count", m["count"]}, {"denominator", m["denominator"]}, {"percent", m["percent"]}};
  }
  j = json{{"states", std::move(states)},
           {"awaiting", std::move(awaiting)},
           {"active_leases", p.active_leases},
           {"final", p.coverage.final},
           {"coverage", std::move(coverage)}};
}

DecisionPayload decision_from_json(const json &j) {
  if (!j.is_object()) throw InputError("decision must be a JSON object");
  auto action = j.find("action");
  if (action == j.end() || !action->is_string()) throw InputError("missing 'action'");
  const std::string a = action->get<std::string>();
  if (a == "accept") return decision::Accept{};
  if (a == "reject") return decision::Reject{};
  if (a == "no_match") return NoMatch{};
  if (a == "select") {
    auto index = j.find("index");
    if (index == j.end() || !index->is_number_integer() || index->get<std::int64_t>() < 0) {
      throw InputError("'select' needs a non-negative integer 'index'");
    }
    return decision::Select{index->get<std::size_t>()};
  }
  if (a == "tag") {
    auto tag = j.find("tag");
    if (tag == j.end()) throw InputError("'tag' needs a 'tag' object");
    try {
      return decision::Tag{tag->get<UnlabeledTag>()};
    } catch (const json::exception &e) {
      throw InputError(std::string("malformed tag: ") + e.what());
    }
  }
  throw InputError("unknown action '" + a + "'");
}

}  // namespace elboot
