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

#include "elboot/generator.hpp"

#include <fstream>
#include <random>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "elboot/error.hpp"
#include "fixtures.hpp"
#include "http_client.hpp"

namespace elboot {
namespace {

using std::chrono::milliseconds;

Candidate cand(std::string lang, std::string title, std::optional<double> score = {}) {
  Candidate c;
  c.language = std::move(lang);
  c.title = std::move(title);
  c.score = score;
  return c;
}

std::vector<GeneratorRequest> requests(int n) {
  std::vector<GeneratorRequest> out;
  for (int i = 0; i < n; ++i) {
    out.push_back({"m" + std::to_string(i), "vinstri", "Nafn " + std::to_string(i), "hægri", 3});
  }
  return out;
}

TEST(Protocol, RequestRoundTrip) {
  GeneratorRequest r{"d:0:1", "Í gær hitti ég", "Jón \"Jónsi\" Jónsson", "á Laugavegi.", 5};
  const std::string line = protocol::encode_request(r);
  EXPECT_EQ(line.find('\n'), std::string::npos);
  auto j = nlohmann::json::parse(line);
  EXPECT_EQ(j["v"], 1);
  EXPECT_EQ(j["k"], 5);
  EXPECT_EQ(j["mention"], "Jón \"Jónsi\" Jónsson");
  EXPECT_EQ(protocol::decode_request(line), r);
}

TEST(Protocol, ResponseRoundTripAndErrors) {
  std::vector<Candidate> list{cand("is", "Jón Jónsson", 0.8), cand("en", "John", std::nullopt)};
  auto r = protocol::decode_response(protocol::encode_response("x", list));
  EXPECT_EQ(r.id, "x");
  EXPECT_EQ(r.candidates, list);
  EXPECT_FALSE(r.error.has_value());

  auto e = protocol::decode_response(protocol::encode_error("y", "model crashed"));
  EXPECT_EQ(e.error, "model crashed");

  EXPECT_THROW(protocol::decode_response("not json"), InputError);
  EXPECT_THROW(protocol::decode_response(R"({"v":2,"id":"a","candidates":[]})"), InputError);
  EXPECT_THROW(protocol::decode_response(R"({"v":1,"candidates":[]})"), InputError);
  EXPECT_THROW(protocol::decode_response(R"({"v":1,"id":"a"})"), InputError);
  EXPECT_THROW(protocol::decode_response(R"({"v":1,"id":"a","candidates":[{"lang":"is"}]})"),
               InputError);
  EXPECT_THROW(
      protocol::decode_response(R"({"v":1,"id":"a","candidates":[{"lang":"is","title":""}]})"),
      InputError);
  EXPECT_THROW(protocol::decode_request(R"({"v":1,"id":"a","left":"","mention":"x","right":"","k":0})"),
               InputError);
}

TEST(EncodeRequest, CopiesContextsAndRejectsNonLinkable) {
  Mention m;
  m.id = "d:0:0";
  m.surface = "Björk";
  m.left_context = "söngkonan";
  m.right_context = "söng";
  auto r = encode_request(m, 4);
  EXPECT_EQ(r.left_context, "söngkonan");
  EXPECT_EQ(r.right_context, "söng");
  EXPECT_EQ(r.max_candidates, 4);
  EXPECT_THROW(encode_request(m, 0), InputError);
  m.ne_type = NeType::kDate;
  EXPECT_THROW(encode_request(m, 4), InputError);
}

TEST(RunBatch, EveryRequestGetsAnEntryInBackendOrder) {
  ScriptedBackend::Fixture f;
  f["m0"] = {cand("is", "A", 0.9), cand("en", "B", 0.1)};
  f["m2"] = {cand("en", "C")};
  ScriptedBackend backend(f);
  auto reqs = requests(5);
  BatchResult r = run_batch(reqs, backend, BatchOptions{});
  ASSERT_EQ(r.candidates.size(), 5u);
  EXPECT_EQ(r.candidates["m0"], f["m0"]);
  EXPECT_EQ(r.candidates["m2"], f["m2"]);
  EXPECT_TRUE(r.candidates["m1"].empty());
  EXPECT_TRUE(r.diagnostics.empty());
  EXPECT_EQ(backend.requests_seen(), 5u);
}

TEST(RunBatch, OutOfOrderResponsesAreMatchedById) {
  ScriptedBackend::Fixture f;
  for (int i = 0; i < 40; ++i) f["m" + std::to_string(i)] = {cand("is", "T" + std::to_string(i))};
  ScriptedBackend backend(f);
  backend.set_reverse_order(true);
  auto reqs = requests(40);
  BatchOptions options;
  options.fan_out = 7;
  BatchResult r = run_batch(reqs, backend, options);
  for (int i = 0; i < 40; ++i) {
    const auto &list = r.candidates.at("m" + std::to_string(i));
    ASSERT_EQ(list.size(), 1u);
    EXPECT_EQ(list[0].title, "T" + std::to_string(i));
  }
}

TEST(RunBatch, SilentRequestsTimeOutWithoutBlockingOthers) {
  ScriptedBackend::Fixture f;
  for (int i = 0; i < 6; ++i) f["m" + std::to_string(i)] = {cand("is", "T")};
  ScriptedBackend backend(f);
  backend.set_silent({"m1", "m4"});
  BatchOptions options;
  options.timeout = milliseconds(50);
  options.fan_out = 2;
  auto reqs = requests(6);
  BatchResult r = run_batch(reqs, backend, options);
  ASSERT_EQ(r.candidates.size(), 6u);
  EXPECT_EQ(r.diagnostics.size(), 2u);
  EXPECT_EQ(r.diagnostics["m1"], "timeout");
  EXPECT_EQ(r.diagnostics["m4"], "timeout");
  EXPECT_TRUE(r.candidates["m1"].empty());
  EXPECT_EQ(r.candidates["m5"].size(), 1u);
}

TEST(RunBatch, MentionOverloadSkipsNothingAndEncodes) {
  Mention m;
  m.id = "a";
  m.surface = "X";
  ScriptedBackend backend({{"a", {cand("is", "X")}}});
  std::vector<Mention> ms{m};
  EXPECT_EQ(run_batch(ms, backend, BatchOptions{}).candidates["a"].size(), 1u);
}

#ifdef ELBOOT_SCRIPTED_BACKEND

std::filesystem::path write_fixture(const ScriptedBackend::Fixture &f) {
  auto dir = testing::make_temp_dir("elboot-gen");
  nlohmann::json j = nlohmann::json::object();
  for (const auto &[id, list] : f) {
    j[id] = nlohmann::json::array();
    for (const Candidate &c : list) {
      nlohmann::json item{{"lang", c.language}, {"title", c.title}};
      if (c.score) item["score"] = *c.score;
      j[id].push_back(item);
    }
  }
  auto path = dir / "fixture.json";
  std::ofstream(path) << j.dump();
  return path;
}

TEST(ProcessBackend, ReplaysThousandEntryFixture) {
  ScriptedBackend::Fixture f;
  std::mt19937_64 rng(5);
  for (int i = 0; i < 1000; ++i) {
    auto &list = f["m" + std::to_string(i)];
    for (int k = static_cast<int>(rng() % 4); k > 0; --k) {
      list.push_back(cand(rng() % 2 ? "is" : "en", "Síða " + std::to_string(rng() % 5000),
                          static_cast<double>(rng() % 100) / 100.0));
    }
  }
  const auto path = write_fixture(f);
  ProcessBackend backend(std::string(ELBOOT_SCRIPTED_BACKEND) + " " + path.string());
  BatchOptions options;
  options.fan_out = 16;
  auto reqs = requests(1000);
  BatchResult r = run_batch(reqs, backend, options);
  EXPECT_TRUE(r.diagnostics.empty());
  EXPECT_TRUE(r.protocol_errors.empty());
  ASSERT_EQ(r.candidates.size(), 1000u);
  for (const auto &[id, list] : f) ASSERT_EQ(r.candidates.at(id), list) << id;
}

TEST(ProcessBackend, FactoryPicksProcessForCommands) {
  auto endpoint = make_generator_endpoint(std::string(ELBOOT_SCRIPTED_BACKEND) + " " +
                                          write_fixture({}).string());
  EXPECT_NE(dynamic_cast<ProcessBackend *>(endpoint.get()), nullptr);
}

#endif

TEST(ProcessBackend, MissingExecutableIsUnavailable) {
  ProcessBackend backend("/nonexistent/elboot-generator --flag");
  auto reqs = requests(1);
  EXPECT_THROW(run_batch(reqs, backend, BatchOptions{}), BackendUnavailable);
}

TEST(ProcessBackend, EarlyExitFailsRemainingRequests) {
  ProcessBackend backend("/bin/sh -c exit");
  BatchOptions options;
  options.timeout = std::chrono::seconds(5);
  auto reqs = requests(3);
  BatchResult r = run_batch(reqs, backend, options);
  ASSERT_EQ(r.candidates.size(), 3u);
  ASSERT_EQ(r.diagnostics.size(), 3u);
  for (const auto &[id, why] : r.diagnostics) EXPECT_EQ(why, "backend closed");
}

TEST(HttpBackend, UnreachableEndpointIsUnavailable) {
  auto endpoint = make_generator_endpoint("http://127.0.0.1:1/generate");
  EXPECT_NE(dynamic_cast<HttpBackend *>(endpoint.get()), nullptr);
  auto reqs = requests(1);
  EXPECT_THROW(run_batch(reqs, *endpoint, BatchOptions{}), BackendUnavailable);
}

TEST(HttpBackend, ServesBatchAndReportsServerErrors) {
  ScriptedBackend::Fixture f;
  for (int i = 0; i < 20; ++i) f["m" + std::to_string(i)] = {cand("is", "T" + std::to_string(i), 0.5)};
  testing::GeneratorHttpServer server(f, {"m3"});
  auto endpoint =
      make_generator_endpoint("http://127.0.0.1:" + std::to_string(server.port()) + "/generate");
  auto reqs = requests(20);
  BatchResult r = run_batch(reqs, *endpoint, BatchOptions{});
  ASSERT_EQ(r.candidates.size(), 20u);
  EXPECT_EQ(r.diagnostics.size(), 1u);
  EXPECT_EQ(r.diagnostics["m3"], "backend error: HTTP 500");
  for (int i = 0; i < 20; ++i) {
    if (i == 3) continue;
    EXPECT_EQ(r.candidates["m" + std::to_string(i)], f["m" + std::to_string(i)]);
  }
}

}  // namespace
}  // namespace elboot
