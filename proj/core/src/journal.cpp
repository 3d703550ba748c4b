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

#include "elboot/journal.hpp"

#include <iterator>
#include <sstream>

#include "elboot/error.hpp"

namespace elboot {

FileJournal::FileJournal(const std::filesystem::path &path)
    : path_(path), out_(path, std::ios::app | std::ios::binary) {
  if (!out_) throw Error("cannot open journal " + path.string());
}

void FileJournal::append(const Event &event) {
  out_ << encode_event(event) << '\n';
  out_.flush();
  if (!out_) throw Error("write to journal " + path_.string() + " failed");
  ++appended_;
}

std::vector<Event> read_journal(const std::filesystem::path &path) {
  std::vector<Event> events;
  std::ifstream in(path, std::ios::binary);
  if (!in) return events;
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) lines.push_back(std::move(line));
  }
  for (std::size_t i = 0; i < lines.size(); ++i) {
    try {
      events.push_back(decode_event(lines[i]));
    } catch (const InputError &) {
      if (i + 1 == lines.size()) break;
      throw;
    }
  }
  return events;
}

namespace {

// Cuts an unterminated final line so new events start on a fresh line.
void drop_torn_tail(const std::filesystem::path &path) {
  std::error_code ec;
  const auto size = std::filesystem::file_size(path, ec);
  if (ec || size == 0) return;
  std::ifstream in(path, std::ios::binary);
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (content.back() == '\n') return;
  const auto last_newline = content.rfind('\n');
  in.close();
  std::filesystem::resize_file(path, last_newline == std::string::npos ? 0 : last_newline + 1);
}

}  // namespace

std::unique_ptr<Workspace> Workspace::open(const std::filesystem::path &dir, Clock &clock,
                                           std::vector<std::string> language_priority) {
  std::filesystem::create_directories(dir);
  std::unique_ptr<Workspace> ws(new Workspace());
  ws->dir_ = dir;

  if (std::filesystem::exists(ws->snapshot_path())) {
    std::ifstream in(ws->snapshot_path(), std::ios::binary);
    std::stringstream buffer;
    buffer << in.rdbuf();
    ws->store_ = std::make_unique<Store>(Store::from_snapshot(buffer.str(), clock));
  } else {
    ws->store_ = std::make_unique<Store>(clock, nullptr, std::move(language_priority));
  }
  drop_torn_tail(ws->journal_path());
  for (const Event &e : read_journal(ws->journal_path())) {
    if (e.seq > ws->store_->last_seq()) ws->store_->apply(e);
  }
  ws->journal_ = std::make_unique<FileJournal>(ws->journal_path());
  ws->store_->set_sink(ws->journal_.get());
  return ws;
}

void Workspace::write_snapshot() const { write_snapshot(store_->snapshot()); }

void Workspace::write_snapshot(std::string_view snapshot) const {
  const auto tmp = snapshot_path().string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << snapshot;
    if (!out) throw Error("cannot write snapshot " + tmp);
  }
  std::filesystem::rename(tmp, snapshot_path());
}

}  // namespace elboot
