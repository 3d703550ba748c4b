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

#ifndef ELBOOT_JOURNAL_HPP_
#define ELBOOT_JOURNAL_HPP_

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <memory>
#include <string_view>
#include <vector>

#include "elboot/clock.hpp"
#include "elboot/workflow.hpp"

namespace elboot {

// Append-only event file, one encoded event per line, flushed per event.
class FileJournal final : public EventSink {
 public:
  explicit FileJournal(const std::filesystem::path &path);
  void append(const Event &event) override;
  const std::filesystem::path &path() const { return path_; }
  std::uint64_t appended() const { return appended_; }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
  std::uint64_t appended_ = 0;
};

// Reads every event in a journal file. A missing file is an empty journal.
// Throws InputError on a malformed line, except a torn final line, which is
// dropped.
std::vector<Event> read_journal(const std::filesystem::path &path);

// A store persisted in a directory:
//   events.jsonl   the journal
//   snapshot.json  the store as of some event (optional)
// Opening loads the snapshot and replays the newer events.
class Workspace {
 public:
  static std::unique_ptr<Workspace> open(const std::filesystem::path &dir, Clock &clock,
                                         std::vector<std::string> language_priority = {"is", "en"});

  Store &store() { return *store_; }
  const Store &store() const { return *store_; }
  const std::filesystem::path &dir() const { return dir_; }
  std::filesystem::path journal_path() const { return dir_ / "events.jsonl"; }
  std::filesystem::path snapshot_path() const { return dir_ / "snapshot.json"; }

  // Writes snapshot.json atomically (temp file + rename).
  void write_snapshot() const;
  // Same, with contents taken elsewhere (e.g. under a service lock).
  void write_snapshot(std::string_view snapshot) const;

 private:
  Workspace() = default;

  std::filesystem::path dir_;
  std::unique_ptr<FileJournal> journal_;
  std::unique_ptr<Store> store_;
};

}  // namespace elboot

#endif  // ELBOOT_JOURNAL_HPP_
