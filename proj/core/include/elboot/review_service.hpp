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

#ifndef ELBOOT_REVIEW_SERVICE_HPP_
#define ELBOOT_REVIEW_SERVICE_HPP_

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <thread>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "elboot/clock.hpp"
#include "elboot/stats.hpp"
#include "elboot/workflow.hpp"

namespace elboot {

enum class Stage { kModelReview, kSearchReview, kTaxonomy };

std::string_view to_string(Stage stage);
// Throws InputError for unknown names.
Stage parse_stage(std::string_view name);

struct Lease {
  std::string mention_id;
  std::string annotator_id;
  std::string token;
  Stage stage = Stage::kModelReview;
  TimePoint expires_at;
};

struct ReviewItem {
  std::string lease_token;
  Stage stage = Stage::kModelReview;
  MentionInfo mention;
  // Model stage: the top candidate only. Search stage: every candidate in
  // store order (preferred language first). Taxonomy: empty.
  std::vector<Candidate> candidates;
  TimePoint expires_at;
};

namespace decision {
struct Accept {};
struct Reject {};
struct Select {
  std::size_t index = 0;
};
struct Tag {
  UnlabeledTag tag;
};
}  // namespace decision

using DecisionPayload = std::variant<decision::Accept, decision::Reject, decision::Select,
                                     NoMatch, decision::Tag>;

struct DecisionOutcome {
  std::string mention_id;
  WorkflowState state = WorkflowState::kPending;
  bool duplicate = false;  // request id seen before; nothing was applied
};

struct Progress {
  std::map<WorkflowState, std::size_t> states;
  std::map<Stage, std::size_t> awaiting;
  std::size_t active_leases = 0;
  CoverageReport coverage;
};

struct ServiceOptions {
  Milliseconds lease_ttl = std::chrono::minutes(10);
  std::string auth_token;  // empty disables the check
  std::filesystem::path static_dir;
};

// Serves the store to annotators. Store mutations are serialised behind one
// writer lock; reads share it. Leases live in their own table and give one
// annotator exclusive use of a mention until they expire or a decision is
// posted.
class ReviewService {
 public:
  ReviewService(Store &store, Clock &clock, ServiceOptions options = {});

  // Leases up to n items of the stage that nobody else holds.
  std::vector<ReviewItem> get_queue(Stage stage, const std::string &annotator_id,
                                    std::size_t n);

  // Applies the decision through the matching workflow operation and
  // releases the lease. A request id that was already applied is
  // acknowledged without applying anything. Throws ConflictError for
  // unknown or expired leases; workflow errors propagate unchanged.
  DecisionOutcome post_decision(const std::string &lease_token, const DecisionPayload &payload,
                                std::optional<std::string> request_id = std::nullopt);

  // Extends a live lease by the TTL.
  TimePoint renew(const std::string &lease_token);

  Progress progress() const;
  nlohmann::json mention(const std::string &mention_id) const;
  void export_tsv(std::ostream &out) const;
  std::string snapshot() const;
  std::uint64_t last_seq() const;
  std::size_t active_leases() const;

  const ServiceOptions &options() const { return options_; }

 private:
  bool eligible(const WorkflowRecord &record, Stage stage) const;
  // Caller holds lease_mu_.
  bool leased(const std::string &mention_id, TimePoint now) const;
  std::string new_token();

  Store &store_;
  Clock &clock_;
  ServiceOptions options_;
  mutable std::shared_mutex store_mu_;
  mutable std::mutex lease_mu_;
  std::map<std::string, Lease> leases_by_token_;
  std::map<std::string, std::string> token_by_mention_;
  std::mt19937_64 rng_;
};

void to_json(nlohmann::json &j, const ReviewItem &item);
void to_json(nlohmann::json &j, const Progress &progress);
// {"action": "accept"|"reject"|"select"|"no_match"|"tag", "index": n, "tag": {...}}
DecisionPayload decision_from_json(const nlohmann::json &j);

// HTTP front end:
//   GET  /api/queue?stage=&n=&annotator=
//   POST /api/decision       {"token", "request_id", "action", ...}
//   POST /api/lease/renew    {"token"}
//   GET  /api/progress
//   GET  /api/mention/{id}
//   GET  /api/export
// plus static files from options.static_dir.
class ReviewHttpServer {
 public:
  explicit ReviewHttpServer(ReviewService &service);
  ~ReviewHttpServer();
  ReviewHttpServer(const ReviewHttpServer &) = delete;
  ReviewHttpServer &operator=(const ReviewHttpServer &) = delete;

  // Binds and serves on a background thread. port 0 picks a free port.
  // Returns the bound port, throws Error on bind failure.
  int start(const std::string &host, int port);
  // Serves on the calling thread until stop().
  void listen(const std::string &host, int port);
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace elboot

#endif  // ELBOOT_REVIEW_SERVICE_HPP_
