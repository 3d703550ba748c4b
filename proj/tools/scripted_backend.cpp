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

// Generator-protocol backend that answers from a JSON fixture:
//   {"<mention id>": [{"lang": "is", "title": "...", "score": 0.9}, ...]}
// Reads requests on stdin, writes responses on stdout, one per line.

#include <fstream>
#include <iostream>
#include <string>

#include <nlohmann/json.hpp>

#include "elboot/error.hpp"
#include "elboot/generator.hpp"

int main(int argc, char **argv) {
  if (argc != 2) {
    std::cerr << "usage: " << argv[0] << " <fixture.json>\n";
    return 2;
  }
  elboot::ScriptedBackend::Fixture fixture;
  try {
    std::ifstream in(argv[1]);
    if (!in) throw elboot::InputError(std::string("cannot open ") + argv[1]);
    const auto j = nlohmann::json::parse(in);
    for (const auto &[id, list] : j.items()) {
      auto &out = fixture[id];
      for (const auto &item : list) {
        elboot::Candidate c;
        c.source = elboot::CandidateSource::kModel;
        c.language = item.at("lang").get<std::string>();
        c.title = item.at("title").get<std::string>();
        if (item.contains("score")) c.score = item["score"].get<double>();
        out.push_back(std::move(c));
      }
    }
  } catch (const std::exception &e) {
    std::cerr << "elboot-scripted-backend: " << e.what() << '\n';
    return 1;
  }

  elboot::ScriptedBackend backend(std::move(fixture));
  std::string line;
  while (std::getline(std::cin, line)) {
    if (line.empty()) continue;
    std::string reply;
    try {
      reply = backend.answer(line);
    } catch (const std::exception &e) {
      // Without a parseable id there is nothing to reply to.
      std::cerr << "elboot-scripted-backend: " << e.what() << '\n';
      continue;
    }
    std::cout << reply << '\n' << std::flush;
  }
  return 0;
}
