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

#ifndef ELBOOT_TESTS_SUPPORT_FIXTURES_HPP_
#define ELBOOT_TESTS_SUPPORT_FIXTURES_HPP_

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "elboot/clock.hpp"
#include "elboot/corpus.hpp"
#include "elboot/workflow.hpp"

namespace elboot::testing {

// Directory holding the checked-in test data.
std::filesystem::path data_dir();

// Fresh empty directory under the system temp dir.
std::filesystem::path make_temp_dir(std::string_view prefix);

// Bodies shaped like real MediaWiki responses (formatversion=2).
std::string page_body(std::string_view title, std::string_view qid);
std::string redirect_body(std::string_view from, std::string_view to, std::string_view qid);
std::string missing_body(std::string_view title);
std::string no_item_body(std::string_view title);
std::string opensearch_body(std::string_view query, const std::vector<std::string> &titles);

// Resolved model/search candidate.
Candidate resolved(CandidateSource source, std::string language, std::string title,
                   std::string qid);

MentionInfo make_info(std::string id, std::string surface = "Jón",
                      NeType type = NeType::kPerson, std::string subcategory = "news");

// Random finalized store: every record is driven through a random legal
// path. Used by property tests.
Store random_finalized_store(std::mt19937_64 &rng, Clock &clock, EventSink *sink = nullptr);

// Finalized store with one labeled record per count, labels taken from the
// given wiki languages (alternating model and search labels).
Store store_with_label_languages(Clock &clock,
                                 const std::vector<std::pair<std::string, std::size_t>> &counts);

// Finalized store of unlabeled records tagged with the given categories.
Store store_with_unlabeled_categories(
    Clock &clock, const std::vector<std::pair<UnlabeledCategory, std::size_t>> &counts);

// Reference mention finder: tests every [begin, end) pair for being a
// maximal run (B or orphan I opening, same-type I continuing). Quadratic in
// the sequence length on purpose.
std::vector<TokenSpan> brute_force_bio_spans(const std::vector<std::string> &tags);

// Single-sentence document "w0 w1 ..." with the given tags.
Document document_from_tags(const std::vector<std::string> &tags);

// Random BIO tag sequence over the eight NE types.
std::vector<std::string> random_bio_tags(std::mt19937_64 &rng, std::size_t max_len);

}  // namespace elboot::testing

#endif  // ELBOOT_TESTS_SUPPORT_FIXTURES_HPP_
