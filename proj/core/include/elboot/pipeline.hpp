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

#ifndef ELBOOT_PIPELINE_HPP_
#define ELBOOT_PIPELINE_HPP_

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "elboot/generator.hpp"
#include "elboot/net.hpp"
#include "elboot/workflow.hpp"

namespace elboot {

// Drivers that connect the store to the generator, the search client and
// the resolver.

struct ModelRoundStats {
  std::size_t requested = 0;
  std::size_t suggested = 0;   // now ModelSuggested
  std::size_t no_candidate = 0;
  std::size_t unresolved_top = 0;
  std::map<std::string, std::string> diagnostics;
};

// Sends every Pending record that has not been through the model round to
// the generator, resolves the top candidate of each answer and records it.
ModelRoundStats run_model_round(Store &store, GeneratorEndpoint &backend,
                                WikiAccess &resolver, const BatchOptions &options);

struct SearchRoundStats {
  std::size_t searched = 0;
  std::size_t suggested = 0;  // now SearchSuggested
  std::size_t overlap = 0;    // ModelAccepted with the label among results
  std::size_t host_failures = 0;
};

// Runs the search for every record still waiting for it (ModelAccepted,
// ModelRejected and Pending-after-model-round), resolves each candidate and
// attaches the results.
SearchRoundStats run_search_round(Store &store, WikiAccess &search_access,
                                  WikiAccess &resolver,
                                  const std::vector<std::string> &hosts, int limit);

}  // namespace elboot

#endif  // ELBOOT_PIPELINE_HPP_
