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

#ifndef ELBOOT_TYPES_HPP_
#define ELBOOT_TYPES_HPP_

#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

namespace elboot {

// The eight NE types of the source corpus.
enum class NeType {
  kPerson,
  kLocation,
  kOrganization,
  kMiscellaneous,
  kDate,
  kTime,
  kMoney,
  kPercent,
};

std::string_view to_string(NeType type);
std::optional<NeType> parse_ne_type(std::string_view name);

// Person, Location, Organization and Miscellaneous are linked; the numeric
// and temporal types are not.
bool is_linkable(NeType type);

// True for identifiers of the form Q<digits>.
bool is_valid_qid(std::string_view qid);

// A wiki page resolved to its Wikidata item.
struct ResolvedEntity {
  std::string qid;
  std::string canonical_title;
  std::string language;
  std::optional<std::string> redirected_from;

  friend bool operator==(const ResolvedEntity &, const ResolvedEntity &) = default;
};

enum class CandidateSource { kModel, kSearch };

std::string_view to_string(CandidateSource source);
std::optional<CandidateSource> parse_candidate_source(std::string_view name);

// A (language, title, score) proposal from the generator or from wiki search.
// The title is kept byte-identical to what the source produced; resolution
// results live in `resolution`.
struct Candidate {
  CandidateSource source = CandidateSource::kModel;
  std::string language;
  std::string title;
  std::optional<double> score;
  std::optional<ResolvedEntity> resolution;

  std::optional<std::string> qid() const {
    if (!resolution) return std::nullopt;
    return resolution->qid;
  }

  friend bool operator==(const Candidate &, const Candidate &) = default;
};

// Throws InputError when a candidate violates its invariants.
void validate(const Candidate &candidate);

void to_json(nlohmann::json &j, const ResolvedEntity &entity);
void from_json(const nlohmann::json &j, ResolvedEntity &entity);
void to_json(nlohmann::json &j, const Candidate &candidate);
void from_json(const nlohmann::json &j, Candidate &candidate);

}  // namespace elboot

#endif  // ELBOOT_TYPES_HPP_
