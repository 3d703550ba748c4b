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

#include <gtest/gtest.h>

#include "elboot/error.hpp"

namespace elboot {
namespace {

TEST(NeType, NamesRoundTrip) {
  for (NeType t : {NeType::kPerson, NeType::kLocation, NeType::kOrganization,
                   NeType::kMiscellaneous, NeType::kDate, NeType::kTime, NeType::kMoney,
                   NeType::kPercent}) {
    EXPECT_EQ(parse_ne_type(to_string(t)), t);
  }
  EXPECT_FALSE(parse_ne_type("person").has_value());
  EXPECT_FALSE(parse_ne_type("").has_value());
}

TEST(NeType, OnlyNamedEntitiesAreLinkable) {
  EXPECT_TRUE(is_linkable(NeType::kPerson));
  EXPECT_TRUE(is_linkable(NeType::kLocation));
  EXPECT_TRUE(is_linkable(NeType::kOrganization));
  EXPECT_TRUE(is_linkable(NeType::kMiscellaneous));
  EXPECT_FALSE(is_linkable(NeType::kDate));
  EXPECT_FALSE(is_linkable(NeType::kTime));
  EXPECT_FALSE(is_linkable(NeType::kMoney));
  EXPECT_FALSE(is_linkable(NeType::kPercent));
}

TEST(Qid, Shape) {
  EXPECT_TRUE(is_valid_qid("Q42"));
  EXPECT_TRUE(is_valid_qid("Q1"));
  EXPECT_FALSE(is_valid_qid("Q"));
  EXPECT_FALSE(is_valid_qid("q42"));
  EXPECT_FALSE(is_valid_qid("Q42a"));
  EXPECT_FALSE(is_valid_qid("P31"));
  EXPECT_FALSE(is_valid_qid(""));
}

TEST(Candidate, Validation) {
  Candidate c;
  c.language = "is";
  c.title = "Reykjavík";
  EXPECT_NO_THROW(validate(c));
  c.score = 0.5;
  EXPECT_NO_THROW(validate(c));

  Candidate no_title = c;
  no_title.title = "";
  EXPECT_THROW(validate(no_title), InputError);

  Candidate no_lang = c;
  no_lang.language = "";
  EXPECT_THROW(validate(no_lang), InputError);

  Candidate bad_score = c;
  bad_score.score = 1.5;
  EXPECT_THROW(validate(bad_score), InputError);

  Candidate bad_qid = c;
  bad_qid.resolution = ResolvedEntity{"X1", "Reykjavík", "is", std::nullopt};
  EXPECT_THROW(validate(bad_qid), InputError);
}

TEST(Candidate, JsonRoundTrip) {
  Candidate c;
  c.source = CandidateSource::kSearch;
  c.language = "en";
  c.title = "Barack Obama";
  c.resolution = ResolvedEntity{"Q76", "Barack Obama", "en", std::string("Obama")};
  nlohmann::json j = c;
  EXPECT_EQ(j["source"], "SEARCH");
  EXPECT_EQ(j.get<Candidate>(), c);

  Candidate bare;
  bare.language = "is";
  bare.title = "Björk";
  bare.score = 0.25;
  EXPECT_EQ(nlohmann::json(bare).get<Candidate>(), bare);
  EXPECT_EQ(bare.qid(), std::nullopt);
  EXPECT_EQ(c.qid(), "Q76");
}

}  // namespace
}  // namespace elboot
