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

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <future>
#include <list>
#include <mutex>

#include <httplib.h>

#include "elboot/error.hpp"
#include "elboot/generator.hpp"
#include "elboot/text.hpp"

namespace elboot {

ProcessBackend::ProcessBackend(std::string command) : command_(std::move(command)) {}

ProcessBackend::~ProcessBackend() { shutdown(); }

void ProcessBackend::start() {
  if (pid_ > 0) return;
  auto words = text::split_whitespace(command_);
  if (words.empty()) throw BackendUnavailable("empty backend command");
  std::vector<std::string> args(words.begin(), words.end());

  int in_pipe[2], out_pipe[2], err_pipe[2];
  if (pipe2(in_pipe, O_CLOEXEC) != 0 || pipe2(out_pipe, O_CLOEXEC) != 0 ||
      pipe2(err_pipe, O_CLOEXEC) != 0) {
    throw BackendUnavailable(std::string("pipe: ") + std::strerror(errno));
  }
  // Writes to a dead child must surface as EPIPE, not kill us.
  ::signal(SIGPIPE, SIG_IGN);

  const pid_t pid = ::fork();
  if (pid < 0) throw BackendUnavailable(std::string("fork: ") + std::strerror(errno));
  if (pid == 0) {
    ::dup2(in_pipe[0], STDIN_FILENO);
    ::dup2(out_pipe[1], STDOUT_FILENO);
    std::vector<char *> argv;
    for (auto &a : args) argv.push_back(a.data());
    argv.push_back(nullptr);
    ::execvp(argv[0], argv.data());
    const int err = errno;
    [[maybe_unused]] auto n = ::write(err_pipe[1], &err, sizeof(err));
    ::_exit(127);
  }
  ::close(in_pipe[0]);
  ::close(out_pipe[1]);
  ::close(err_pipe[1]);

  // exec success closes the CLOEXEC error pipe without writing to it.
  int child_errno = 0;
  const ssize_t got = ::read(err_pipe[0], &child_errno, sizeof(child_errno));
  ::close(err_pipe[0]);
  pid_ = pid;
  to_child_ = in_pipe[1];
  from_child_ = out_pipe[0];
  if (got == static_cast<ssize_t>(sizeof(child_errno))) {
    shutdown();
    throw BackendUnavailable("cannot execute '" + args[0] +
                             "': " + std::strerror(child_errno));
  }
}

void ProcessBackend::send(const std::string &line) {
  if (closed_ || to_child_ < 0) {
    closed_ = true;
    return;
  }
  std::string data = line + "\n";
  std::size_t off = 0;
  while (off < data.size()) {
    const ssize_t n = ::write(to_child_, data.data() + off, data.size() - off);
    if (n < 0) {
      if (errno == EINTR) continue;
      closed_ = true;
      return;
    }
    off += static_cast<std::size_t>(n);
  }
}

std::optional<std::string> ProcessBackend::receive(std::chrono::milliseconds timeout) {
  const auto deadline = std::chrono::steady_clock::now() + timeout;
  for (;;) {
    if (auto nl = buffer_.find('\n'); nl != std::string::npos) {
      std::string line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      return line;
    }
    if (closed_ || from_child_ < 0) return std::nullopt;
    auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
        deadline - std::chrono::steady_clock::now());
    if (left.count() < 0) return std::nullopt;
    pollfd pfd{from_child_, POLLIN, 0};
    const int rc = ::poll(&pfd, 1, static_cast<int>(left.count()));
    if (rc < 0) {
      if (errno == EINTR) continue;
      closed_ = true;
      return std::nullopt;
    }
    if (rc == 0) return std::nullopt;
    char chunk[4096];
    const ssize_t n = ::read(from_child_, chunk, sizeof(chunk));
    if (n <= 0) {
      if (n < 0 && errno == EINTR) continue;
      closed_ = true;
      continue;  // drain any complete line still buffered
    }
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

void ProcessBackend::shutdown() {
  if (to_child_ >= 0) ::close(to_child_);
  if (from_child_ >= 0) ::close(from_child_);
  to_child_ = from_child_ = -1;
  if (pid_ > 0) {
    int status = 0;
    // Closing stdin asks a well-behaved backend to exit.
    for (int i = 0; i < 50; ++i) {
      if (::waitpid(pid_, &status, WNOHANG) != 0) {
        pid_ = -1;
        break;
      }
      ::usleep(10'000);
    }
    if (pid_ > 0) {
      ::kill(pid_, SIGTERM);
      ::waitpid(pid_, &status, 0);
      pid_ = -1;
    }
  }
  closed_ = true;
}

struct HttpBackend::Impl {
  std::string scheme_host_port;
  std::string path;
  std::chrono::milliseconds timeout;
  std::mutex mu;
  std::list<std::future<std::string>> pending;

  std::unique_ptr<httplib::Client> client() const {
    auto c = std::make_unique<httplib::Client>(scheme_host_port);
    const auto secs = std::chrono::duration_cast<std::chrono::seconds>(timeout);
    c->set_connection_timeout(secs.count() > 0 ? secs.count() : 1, 0);
    c->set_read_timeout(secs.count() > 0 ? secs.count() : 1, 0);
    return c;
  }
};

HttpBackend::HttpBackend(std::string url, std::chrono::milliseconds timeout)
    : impl_(std::make_unique<Impl>()) {
  const auto scheme_end = url.find("://");
  const auto path_start = url.find('/', scheme_end == std::string::npos ? 0 : scheme_end + 3);
  impl_->scheme_host_port = url.substr(0, path_start);
  impl_->path = path_start == std::string::npos ? "/" : url.substr(path_start);
  impl_->timeout = timeout;
}

HttpBackend::~HttpBackend() {
  for (auto &f : impl_->pending) f.wait();
}

void HttpBackend::start() {
  auto c = impl_->client();
  auto res = c->Get("/");
  if (!res) {
    throw BackendUnavailable("cannot reach " + impl_->scheme_host_port + ": " +
                             httplib::to_string(res.error()));
  }
}

void HttpBackend::send(const std::string &line) {
  Impl *impl = impl_.get();
  auto fut = std::async(std::launch::async, [impl, line]() -> std::string {
    auto c = impl->client();
    auto res = c->Post(impl->path, line + "\n", "application/x-ndjson");
    if (!res || res->status != 200) {
      std::string why = res ? "HTTP " + std::to_string(res->status)
                            : httplib::to_string(res.error());
      try {
        return protocol::encode_error(protocol::decode_request(line).mention_id, why);
      } catch (const InputError &) {
        return {};
      }
    }
    std::string body = res->body;
    while (!body.empty() && (body.back() == '\n' || body.back() == '\r')) body.pop_back();
    return body;
  });
  std::lock_guard lock(impl_->mu);
  impl_->pending.push_back(std::move(fut));
}

std::optional<std::string> HttpBackend::receive(std::chrono::milliseconds timeout) {
  const auto deadline = std::chrono::steady_clock::now() + timeout;
  for (;;) {
    {
      std::lock_guard lock(impl_->mu);
      for (auto it = impl_->pending.begin(); it != impl_->pending.end(); ++it) {
        if (it->wait_for(std::chrono::seconds(0)) == std::future_status::ready) {
          std::string line = it->get();
          impl_->pending.erase(it);
          // Unattributable failures produce no line; the request times out.
          if (line.empty()) break;
          return line;
        }
      }
    }
    if (std::chrono::steady_clock::now() >= deadline) return std::nullopt;
    std::this_thread::sleep_for(std::chrono::milliseconds(2));
  }
}

}  // namespace elboot
