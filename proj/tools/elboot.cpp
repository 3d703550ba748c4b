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

// elboot: semi-automatic entity-linking corpus construction.
//
//   elboot ingest <file.conll>...        parse the NER corpus, create records
//   elboot suggest --backend <cmd|url>   model candidates + resolution
//   elboot wapis                         wiki search round
//   elboot serve --addr host:port        review service
//   elboot finalize                      close remaining records as unlabeled
//   elboot stats [--dimension d]         coverage report / breakdowns
//   elboot export [-o file]              corpus TSV

#include <csignal>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>

#include <CLI11.hpp>

#include "elboot/config.hpp"
#include "elboot/corpus.hpp"
#include "elboot/error.hpp"
#include "elboot/generator.hpp"
#include "elboot/journal.hpp"
#include "elboot/net.hpp"
#include "elboot/pipeline.hpp"
#include "elboot/review_service.hpp"
#include "elboot/stats.hpp"

namespace {

using namespace elboot;

struct WikiStack {
  std::unique_ptr<Transport> transport;
  std::unique_ptr<RateLimiter> limiter;
  std::unique_ptr<ResponseCache> search_cache;
  std::unique_ptr<ResponseCache> resolve_cache;
  std::unique_ptr<WikiAccess> search;
  std::unique_ptr<WikiAccess> resolver;
};

WikiStack make_wiki_stack(const Config &config, Clock &clock, const std::string &fixtures) {
  WikiStack s;
  if (!fixtures.empty()) {
    auto t = std::make_unique<FixtureTransport>();
    t->load_json_file(fixtures);
    s.transport = std::move(t);
  } else {
    s.transport = std::make_unique<HttpsTransport>();
  }
  s.limiter = std::make_unique<RateLimiter>(clock, config.rate_limit);
  const auto cache_dir = config.effective_cache_dir();
  s.search_cache = std::make_unique<ResponseCache>(clock, config.cache_ttl, cache_dir / "search");
  s.resolve_cache =
      std::make_unique<ResponseCache>(clock, config.cache_ttl, cache_dir / "resolve");
  RetryPolicy retry;
  retry.max_attempts = config.max_retries + 1;
  s.search = std::make_unique<WikiAccess>(
      WikiAccess{*s.transport, clock, s.search_cache.get(), s.limiter.get(), retry});
  s.resolver = std::make_unique<WikiAccess>(
      WikiAccess{*s.transport, clock, s.resolve_cache.get(), s.limiter.get(), retry});
  return s;
}

std::pair<std::string, int> split_addr(const std::string &addr) {
  const auto colon = addr.rfind(':');
  if (colon == std::string::npos) throw InputError("address must be host:port");
  return {addr.substr(0, colon), std::stoi(addr.substr(colon + 1))};
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Semi-automatic entity-linking corpus builder"};
  app.require_subcommand(1);

  std::string config_path;
  std::string data_dir;
  app.add_option("--config", config_path, "JSON config file (default: $ELBOOT_CONFIG)");
  app.add_option("--data-dir", data_dir, "Journal directory (overrides config)");

  auto *ingest = app.add_subcommand("ingest", "Parse CoNLL files and create review records");
  std::vector<std::string> inputs;
  ingest->add_option("files", inputs, "CoNLL input files")->required()->check(CLI::ExistingFile);

  auto *suggest = app.add_subcommand("suggest", "Run the candidate generator over pending records");
  std::string backend;
  std::string fixtures;
  suggest->add_option("--backend", backend, "Generator command line or http(s) URL")->required();
  suggest->add_option("--fixtures", fixtures, "Serve wiki API calls from a recorded fixture file");

  auto *wapis = app.add_subcommand("wapis", "Run the wiki search round");
  wapis->add_option("--fixtures", fixtures, "Serve wiki API calls from a recorded fixture file");

  auto *serve = app.add_subcommand("serve", "Start the review service");
  std::string addr = "127.0.0.1:8080";
  std::string static_dir;
  serve->add_option("--addr", addr, "host:port to listen on");
  serve->add_option("--static", static_dir, "Directory with the review UI bundle");

  auto *finalize = app.add_subcommand("finalize", "Mark every open record unlabeled");

  auto *stats = app.add_subcommand("stats", "Coverage report or breakdown");
  std::string dimension;
  std::string measure = "composition_share";
  std::string format = "tsv";
  std::string label_source = "any";
  bool collapse = false;
  std::int64_t threshold = 5;
  stats->add_option("--dimension", dimension,
                    "label_language|subcategory|ne_type|morph_tag|unlabeled_category|"
                    "unlabeled_factor (omit for the coverage report)");
  stats->add_option("--measure", measure, "coverage_share|composition_share");
  stats->add_option("--format", format, "tsv|json-lines|plot-data");
  stats->add_option("--label-source", label_source, "any|model|search (label_language only)");
  stats->add_flag("--collapse", collapse, "Fold rows below --threshold into 'other'");
  stats->add_option("--threshold", threshold, "Row count threshold for --collapse");

  auto *exp = app.add_subcommand("export", "Write the corpus TSV");
  std::string output;
  exp->add_option("-o,--output", output, "Output file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    Config config = load_config(config_path.empty()
                                    ? std::nullopt
                                    : std::optional<std::filesystem::path>(config_path));
    if (!data_dir.empty()) config.journal_dir = data_dir;
    SystemClock clock;
    auto ws = Workspace::open(config.journal_dir, clock, config.language_priority);
    Store &store = ws->store();

    if (*ingest) {
      ConllOptions options;
      if (!config.doc_marker.empty()) options.doc_marker = config.doc_marker;
      std::size_t before = store.size();
      std::size_t total_mentions = 0;
      for (const std::string &file : inputs) {
        std::ifstream in(file, std::ios::binary);
        auto docs = parse_conll(in, options);
        std::map<std::string, std::string> subcategories;
        std::vector<Mention> mentions;
        for (const Document &doc : docs) {
          subcategories[doc.id] = doc.subcategory;
          auto found = extract_mentions(doc, config.context_window);
          total_mentions += found.size();
          mentions.insert(mentions.end(), found.begin(), found.end());
        }
        store.init(mentions, subcategories);
      }
      std::cout << "mentions: " << total_mentions << "\nlinkable records added: "
                << store.size() - before << '\n';
    } else if (*suggest) {
      auto wiki = make_wiki_stack(config, clock, fixtures);
      auto endpoint = make_generator_endpoint(backend);
      BatchOptions options;
      options.max_candidates = config.max_candidates;
      options.fan_out = config.fan_out;
      options.timeout = config.request_timeout;
      ModelRoundStats s = run_model_round(store, *endpoint, *wiki.resolver, options);
      for (const auto &[id, why] : s.diagnostics) std::cerr << id << ": " << why << '\n';
      std::cout << "requested: " << s.requested << "\nsuggested: " << s.suggested
                << "\nno candidate: " << s.no_candidate
                << "\nunresolved top candidate: " << s.unresolved_top << '\n';
    } else if (*wapis) {
      auto wiki = make_wiki_stack(config, clock, fixtures);
      SearchRoundStats s =
          run_search_round(store, *wiki.search, *wiki.resolver, config.hosts, config.search_limit);
      std::cout << "searched: " << s.searched << "\nsuggested: " << s.suggested
                << "\noverlap: " << s.overlap << "\nhost failures: " << s.host_failures << '\n';
    } else if (*serve) {
      ServiceOptions options;
      options.lease_ttl = config.lease_ttl;
      options.auth_token = config.auth_token;
      options.static_dir = static_dir;
      ReviewService service(store, clock, options);
      ReviewHttpServer server(service);

      sigset_t signals;
      sigemptyset(&signals);
      sigaddset(&signals, SIGINT);
      sigaddset(&signals, SIGTERM);
      pthread_sigmask(SIG_BLOCK, &signals, nullptr);

      auto [host, port] = split_addr(addr);
      const int bound = server.start(host, port);
      std::cerr << "serving on " << host << ':' << bound << '\n';
      std::uint64_t snapshot_seq = service.last_seq();
      const timespec tick{1, 0};
      while (sigtimedwait(&signals, nullptr, &tick) < 0) {
        const std::uint64_t seq = service.last_seq();
        if (config.snapshot_every > 0 && seq - snapshot_seq >= config.snapshot_every) {
          ws->write_snapshot(service.snapshot());
          snapshot_seq = seq;
        }
      }
      server.stop();
    } else if (*finalize) {
      store.finalize();
      std::cout << "finalized " << store.size() << " records\n";
    } else if (*stats) {
      const RenderFormat fmt = parse_render_format(format);
      if (dimension.empty()) {
        render(coverage(store), fmt, std::cout);
      } else {
        BreakdownOptions options;
        options.collapse_small = collapse;
        options.threshold = threshold;
        options.skew_subcategories = config.skew_subcategories;
        if (label_source == "model") {
          options.label_source = LabelSource::kModel;
        } else if (label_source == "search") {
          options.label_source = LabelSource::kSearch;
        } else if (label_source != "any") {
          throw InputError("unknown label source '" + label_source + "'");
        }
        auto rows = breakdown(store, parse_dimension(dimension), parse_measure(measure), options);
        render(rows, fmt, std::cout);
      }
    } else if (*exp) {
      if (output.empty()) {
        export_tsv(store, std::cout);
      } else {
        std::ofstream out(output, std::ios::binary);
        export_tsv(store, out);
      }
    }

    if (*ingest || *suggest || *wapis || *serve || *finalize) ws->write_snapshot();
  } catch (const std::exception &e) {
    std::cerr << "elboot: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
