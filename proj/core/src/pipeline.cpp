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

#include "elboot/pipeline.hpp"

#include <variant>

#include "elboot/resolver.hpp"
#include "elboot/wapis.hpp"

namespace elboot {

namespace {

void attach_resolution(Candidate &candidate, WikiAccess &resolver) {
  ResolveResult r = resolve(candidate.language, candidate.title, resolver);
  if (auto *entity = std::get_if<ResolvedEntity>(&r)) candidate.resolution = *entity;
}

}  // namespace

ModelRoundStats run_model_round(Store &store, GeneratorEndpoint &backend,
                                WikiAccess &resolver, const BatchOptions &options) {
  std::vector<GeneratorRequest> requests;
  for (const WorkflowRecord &r : store.records()) {
    if (r.state != WorkflowState::kPending || r.model_round_done) continue;
    requests.push_back(GeneratorRequest{r.mention.id, r.mention.left_context,
                                        r.mention.surface, r.mention.right_context,
                                        options.max_candidates});
  }
  ModelRoundStats stats;
  stats.requested = requests.size();
  if (requests.empty()) return stats;

  BatchResult batch = run_batch(requests, backend, options);
  stats.diagnostics = batch.diagnostics;
  for (auto &[id, candidates] : batch.candidates) {
    if (candidates.empty()) {
      ++stats.no_candidate;
    } else {
      attach_resolution(candidates.front(), resolver);
      if (!candidates.front().resolution) ++stats.unresolved_top;
    }
    if (store.record_model_suggestion(id, std::move(candidates)) ==
        WorkflowState::kModelSuggested) {
      ++stats.suggested;
    }
  }
  return stats;
}

SearchRoundStats run_search_round(Store &store, WikiAccess &search_access,
                                  WikiAccess &resolver,
                                  const std::vector<std::string> &hosts, int limit) {
  std::vector<std::string> ids;
  for (const WorkflowRecord &r : store.records()) {
    if (r.search_round_done) continue;
    const bool waiting = r.state == WorkflowState::kModelAccepted ||
                         r.state == WorkflowState::kModelRejected ||
                         (r.state == WorkflowState::kPending && r.model_round_done);
    if (waiting) ids.push_back(r.mention.id);
  }

  SearchRoundStats stats;
  for (const std::string &id : ids) {
    SearchQuery query;
    query.text = store.record(id).mention.surface;
    query.hosts = hosts;
    query.limit = limit;
    SearchResult result = search(query, search_access);
    for (const auto &[host, status] : result.per_host_status) {
      if (!status.ok()) ++stats.host_failures;
    }
    for (Candidate &c : result.candidates) attach_resolution(c, resolver);
    ++stats.searched;
    const WorkflowState state = store.attach_search_results(id, result);
    if (state == WorkflowState::kSearchSuggested) ++stats.suggested;
    const WorkflowRecord &r = store.record(id);
    if (r.overlap.value_or(false)) ++stats.overlap;
  }
  return stats;
}

}  // namespace elboot
