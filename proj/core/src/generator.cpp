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

#include <algorithm>
#include <thread>

#include <nlohmann/json.hpp>

#include "elboot/error.hpp"

namespace elboot {

using nlohmann::json;

GeneratorRequest encode_request(const Mention &mention, int max_candidates) {
  if (!is_linkable(mention.ne_type)) {
    throw InputError("mention " + mention.id + " is not of a linkable type");
  }
  if (max_candidates < 1) throw InputError("max_candidates must be >= 1");
  if (mention.surface.empty()) throw InputError("empty mention surface");
  return GeneratorRequest{mention.id, mention.left_context, mention.surface,
                          mention.right_context, max_candidates};
}

namespace protocol {

namespace {

json parse_record(std::string_view line) {
  json j = json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (!j.is_object()) throw InputError("protocol record is not a JSON object");
  auto v = j.find("v");
  if (v == j.end() || !v->is_number_integer() || v->get<int>() != kVersion) {
    throw InputError("unsupported protocol version");
  }
  auto id = j.find("id");
  if (id == j.end() || !id->is_string()) {
    throw InputError("protocol record without string id");
  }
  return j;
}

std::string string_field(const json &j, const char *name) {
  auto it = j.find(name);
  if (it == j.end() || !it->is_string()) {
    throw InputError(std::string("missing string field '") + name + "'");
  }
  return it->get<std::string>();
}

}  // namespace

std::string encode_request(const GeneratorRequest &request) {
  json j{{"v", kVersion},
         {"id", request.mention_id},
         {"left", request.left_context},
         {"mention", request.mention},
         {"right", request.right_context},
         {"k", request.max_candidates}};
  return j.dump();
}

GeneratorRequest decode_request(std::string_view line) {
  json j = parse_record(line);
  GeneratorRequest r;
  r.mention_id = j["id"].get<std::string>();
  r.left_context = string_field(j, "left");
  r.mention = string_field(j, "mention");
  r.right_context = string_field(j, "right");
  auto k = j.find("k");
  if (k == j.end() || !k->is_number_integer() || k->get<int>() < 1) {
    throw InputError("field 'k' must be a positive integer");
  }
  r.max_candidates = k->get<int>();
  return r;
}

std::string encode_response(std::string_view id,
                            std::span<const Candidate> candidates) {
  json list = json::array();
  for (const Candidate &c : candidates) {
    json item{{"lang", c.language}, {"title", c.title}};
    if (c.score) item["score"] = *c.score;
    list.push_back(std::move(item));
  }
  json j{{"v", kVersion}, {"id", std::string(id)}, {"candidates", std::move(list)}};
  return j.dump();
}

std::string encode_error(std::string_view id, std::string_view message) {
  json j{{"v", kVersion}, {"id", std::string(id)}, {"error", std::string(message)}};
  return j.dump();
}

Response decode_response(std::string_view line) {
  json j = parse_record(line);
  Response r;
  r.id = j["id"].get<std::string>();
  if (auto err = j.find("error"); err != j.end()) {
    r.error = err->is_string() ? err->get<std::string>() : err->dump();
    return r;
  }
  auto list = j.find("candidates");
  if (list == j.end() || !list->is_array()) {
    throw InputError("response without candidates array");
  }
  for (const json &item : *list) {
    if (!item.is_object()) throw InputError("candidate is not an object");
    Candidate c;
    c.source = CandidateSource::kModel;
    c.language = string_field(item, "lang");
    c.title = string_field(item, "title");
    if (auto s = item.find("score"); s != item.end() && !s->is_null()) {
      if (!s->is_number()) throw InputError("candidate score is not a number");
      c.score = s->get<double>();
    }
    validate(c);
    r.candidates.push_back(std::move(c));
  }
  return r;
}

}  // namespace protocol

ScriptedBackend::ScriptedBackend(Fixture fixture) : fixture_(std::move(fixture)) {}

std::string ScriptedBackend::answer(std::string_view request_line) const {
  GeneratorRequest request = protocol::decode_request(request_line);
  auto it = fixture_.find(request.mention_id);
  if (it == fixture_.end()) return protocol::encode_response(request.mention_id, {});
  return protocol::encode_response(request.mention_id, it->second);
}

void ScriptedBackend::send(const std::string &line) {
  ++requests_seen_;
  std::string id;
  try {
    id = protocol::decode_request(line).mention_id;
  } catch (const InputError &) {
    return;
  }
  if (silent_.count(id)) return;
  queue_.push_back(answer(line));
}

std::optional<std::string> ScriptedBackend::receive(
    std::chrono::milliseconds timeout) {
  if (queue_.empty()) {
    std::this_thread::sleep_for(timeout);
    return std::nullopt;
  }
  std::string line;
  if (reverse_) {
    line = std::move(queue_.back());
    queue_.pop_back();
  } else {
    line = std::move(queue_.front());
    queue_.pop_front();
  }
  return line;
}

std::unique_ptr<GeneratorEndpoint> make_generator_endpoint(const std::string &target) {
  if (target.rfind("http://", 0) == 0 || target.rfind("https://", 0) == 0) {
    return std::make_unique<HttpBackend>(target);
  }
  return std::make_unique<ProcessBackend>(target);
}

BatchResult run_batch(std::span<const GeneratorRequest> requests,
                      GeneratorEndpoint &backend, const BatchOptions &options) {
  using Clock = std::chrono::steady_clock;
  backend.start();

  BatchResult result;
  for (const GeneratorRequest &r : requests) result.candidates[r.mention_id];

  const std::size_t fan_out = static_cast<std::size_t>(std::max(1, options.fan_out));
  std::size_t next = 0;
  std::map<std::string, Clock::time_point> in_flight;

  auto fail_all = [&](const std::string &why) {
    for (auto &[id, deadline] : in_flight) result.diagnostics[id] = why;
    in_flight.clear();
    for (; next < requests.size(); ++next) {
      result.diagnostics[requests[next].mention_id] = why;
    }
  };

  while (next < requests.size() || !in_flight.empty()) {
    while (in_flight.size() < fan_out && next < requests.size()) {
      const GeneratorRequest &r = requests[next++];
      GeneratorRequest sent = r;
      sent.max_candidates = options.max_candidates;
      backend.send(protocol::encode_request(sent));
      in_flight[r.mention_id] = Clock::now() + options.timeout;
    }
    if (backend.closed()) {
      fail_all("backend closed");
      break;
    }

    Clock::time_point earliest = Clock::time_point::max();
    for (const auto &[id, deadline] : in_flight) earliest = std::min(earliest, deadline);
    auto wait = std::chrono::duration_cast<std::chrono::milliseconds>(
        earliest - Clock::now());
    if (wait.count() < 0) wait = std::chrono::milliseconds(0);

    if (auto line = backend.receive(wait)) {
      try {
        protocol::Response response = protocol::decode_response(*line);
        auto it = in_flight.find(response.id);
        if (it != in_flight.end()) {
          in_flight.erase(it);
          if (response.error) {
            result.diagnostics[response.id] = "backend error: " + *response.error;
          } else {
            result.candidates[response.id] = std::move(response.candidates);
          }
        }
      } catch (const std::exception &e) {
        // Without a decodable id the record cannot be attributed; the
        // owning request will time out.
        result.protocol_errors.push_back(std::string("undecodable response: ") + e.what());
      }
    }

    const auto now = Clock::now();
    for (auto it = in_flight.begin(); it != in_flight.end();) {
      if (it->second <= now) {
        result.diagnostics[it->first] = "timeout";
        it = in_flight.erase(it);
      } else {
        ++it;
      }
    }
  }
  return result;
}

BatchResult run_batch(std::span<const Mention> mentions,
                      GeneratorEndpoint &backend, const BatchOptions &options) {
  std::vector<GeneratorRequest> requests;
  requests.reserve(mentions.size());
  for (const Mention &m : mentions) {
    requests.push_back(encode_request(m, options.max_candidates));
  }
  return run_batch(requests, backend, options);
}

}  // namespace elboot
