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

#include "elboot/types.hpp"

#include <array>
#include <utility>

#include "elboot/error.hpp"

namespace elboot {

namespace {

constexpr std::array<std::pair<NeType, std::string_view>, 8> kNeTypeNames = {{
    {NeType::kPerson, "Person"},
    {NeType::kLocation, "Location"},
    {NeType::kOrganization, "Organization"},
    {NeType::kMiscellaneous, "Miscellaneous"},
    {NeType::kDate, "Date"},
    {NeType::kTime, "Time"},
    {NeType::kMoney, "Money"},
    {NeType::kPercent, "Percent"},
}};

}  // namespace

std::string_view to_string(NeType type) {
  for (const auto &[t, name] : kNeTypeNames) {
    if (t == type) return name;
  }
  return "?";
}

std::optional<NeType> parse_ne_type(std::string_view name) {
  for (const auto &[t, n] : kNeTypeNames) {
    if (n == name) return t;
  }
  return std::nullopt;
}

bool is_linkable(NeType type) {
  switch (type) {
    case NeType::kPerson:
    case NeType::kLocation:
    case NeType::kOrganization:
    case NeType::kMiscellaneous:
      return true;
    default:
      return false;
  }
}

bool is_valid_qid(std::string_view qid) {
  if (qid.size() < 2 || qid[0] != 'Q') return false;
  for (std::size_t i = 1; i < qid.size(); ++i) {
    if (qid[i] < '0' || qid[i] > '9') return false;
  }
  return true;
}

std::string_view to_string(CandidateSource source) {
  return source == CandidateSource::kModel ? "MODEL" : "SEARCH";
}

std::optional<CandidateSource> parse_candidate_source(std::string_view name) {
  if (name == "MODEL") return CandidateSource::kModel;
  if (name == "SEARCH") return CandidateSource::kSearch;
  return std::nullopt;
}

void validate(const Candidate &candidate) {
  if (candidate.title.empty()) throw InputError("candidate title is empty");
  if (candidate.language.empty()) {
    throw InputError("candidate language is empty");
  }
  if (candidate.score && !(*candidate.score >= 0.0 && *candidate.score <= 1.0)) {
    throw InputError("candidate score outside [0,1]");
  }
  if (candidate.resolution && !is_valid_qid(candidate.resolution->qid)) {
    throw InputError("malformed QID '" + candidate.resolution->qid + "'");
  }
}

void to_json(nlohmann::json &j, const ResolvedEntity &entity) {
  j = nlohmann::json{{"qid", entity.qid},
                     {"canonical_title", entity.canonical_title},
                     {"language", entity.language}};
  if (entity.redirected_from) j["redirected_from"] = *entity.redirected_from;
}

void from_json(const nlohmann::json &j, ResolvedEntity &entity) {
  entity.qid = j.at("qid").get<std::string>();
  entity.canonical_title = j.at("canonical_title").get<std::string>();
  entity.language = j.at("language").get<std::string>();
  if (auto it = j.find("redirected_from"); it != j.end()) {
    entity.redirected_from = it->get<std::string>();
  } else {
    entity.redirected_from.reset();
  }
}

void to_json(nlohmann::json &j, const Candidate &candidate) {
  j = nlohmann::json{{"source", to_string(candidate.source)},
                     {"lang", candidate.language},
                     {"title", candidate.title}};
  if (candidate.score) j["score"] = *candidate.score;
  if (candidate.resolution) j["resolution"] = *candidate.resolution;
}

void from_json(const nlohmann::json &j, Candidate &candidate) {
  auto source = parse_candidate_source(j.at("source").get<std::string>());
  if (!source) throw InputError("unknown candidate source");
  candidate.source = *source;
  candidate.language = j.at("lang").get<std::string>();
  candidate.title = j.at("title").get<std::string>();
  if (auto it = j.find("score"); it != j.end()) {
    candidate.score = it->get<double>();
  } else {
    candidate.score.reset();
  }
  if (auto it = j.find("resolution"); it != j.end()) {
    candidate.resolution = it->get<ResolvedEntity>();
  } else {
    candidate.resolution.reset();
  }
}

}  // namespace elboot
