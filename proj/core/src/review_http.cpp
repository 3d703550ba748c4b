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

#include <sstream>

#include <httplib.h>

#include "elboot/error.hpp"
#include "elboot/review_service.hpp"
#include "elboot/text.hpp"

namespace elboot {

using nlohmann::json;

namespace {

void send_json(httplib::Response &res, int status, const json &body) {
  res.status = status;
  res.set_content(body.dump(), "application/json; charset=utf-8");
}

void send_error(httplib::Response &res, int status, const std::string &message) {
  send_json(res, status, json{{"error", message}});
}

// Runs a handler, mapping library errors to HTTP statuses.
template <typename Fn>
void guarded(httplib::Response &res, Fn &&fn) {
  try {
    fn();
  } catch (const InputError &e) {
    send_error(res, 400, e.what());
  } catch (const json::exception &e) {
    send_error(res, 400, e.what());
  } catch (const NotFoundError &e) {
    send_error(res, 404, e.what());
  } catch (const ConflictError &e) {
    send_error(res, 409, e.what());
  } catch (const TransitionError &e) {
    send_error(res, 409, e.what());
  } catch (const ExportError &e) {
    send_error(res, 409, e.what());
  } catch (const NotFinalizedError &e) {
    send_error(res, 409, e.what());
  } catch (const std::exception &e) {
    send_error(res, 500, e.what());
  }
}

std::string query_param(const httplib::Request &req, const char *name,
                        const std::string &fallback = "") {
  return req.has_param(name) ? req.get_param_value(name) : fallback;
}

}  // namespace

struct ReviewHttpServer::Impl {
  ReviewService &service;
  httplib::Server server;
  std::thread thread;

  explicit Impl(ReviewService &s) : service(s) { routes(); }

  bool authorized(const httplib::Request &req) const {
    const std::string &token = service.options().auth_token;
    if (token.empty()) return true;
    if (req.get_header_value("X-Elboot-Token") == token) return true;
    return req.get_header_value("Authorization") == "Bearer " + token;
  }

  void routes() {
    server.set_tcp_nodelay(true);
    server.set_keep_alive_timeout(1);
    server.set_pre_routing_handler([this](const httplib::Request &req, httplib::Response &res) {
      if (req.path.rfind("/api/", 0) == 0 && !authorized(req)) {
        send_error(res, 401, "missing or wrong token");
        return httplib::Server::HandlerResponse::Handled;
      }
      return httplib::Server::HandlerResponse::Unhandled;
    });

    server.Get("/api/queue", [this](const httplib::Request &req, httplib::Response &res) {
      guarded(res, [&] {
        const Stage stage = parse_stage(query_param(req, "stage"));
        std::string annotator = query_param(req, "annotator", req.get_header_value("X-Annotator"));
        if (annotator.empty()) throw InputError("annotator id required");
        std::size_t n = 10;
        if (req.has_param("n")) {
          try {
            n = std::stoul(req.get_param_value("n"));
          } catch (const std::exception &) {
            throw InputError("'n' must be a non-negative integer");
          }
        }
        json items = json::array();
        for (const ReviewItem &item : service.get_queue(stage, annotator, n)) items.push_back(item);
        send_json(res, 200, json{{"items", std::move(items)}});
      });
    });

    server.Post("/api/decision", [this](const httplib::Request &req, httplib::Response &res) {
      guarded(res, [&] {
        json body = json::parse(req.body);
        if (!body.is_object() || !body.contains("token")) throw InputError("missing 'token'");
        std::optional<std::string> request_id;
        if (auto it = body.find("request_id"); it != body.end() && it->is_string()) {
          request_id = it->get<std::string>();
        }
        DecisionOutcome out = service.post_decision(body["token"].get<std::string>(),
                                                    decision_from_json(body), request_id);
        send_json(res, 200,
                  json{{"mention_id", out.mention_id},
                       {"state", to_string(out.state)},
                       {"duplicate", out.duplicate}});
      });
    });

    server.Post("/api/lease/renew", [this](const httplib::Request &req, httplib::Response &res) {
      guarded(res, [&] {
        json body = json::parse(req.body);
        const TimePoint t = service.renew(body.at("token").get<std::string>());
        send_json(res, 200, json{{"expires_at", to_epoch_ms(t)}});
      });
    });

    server.Get("/api/progress", [this](const httplib::Request &, httplib::Response &res) {
      guarded(res, [&] { send_json(res, 200, json(service.progress())); });
    });

    server.Get(R"(/api/mention/(.+))", [this](const httplib::Request &req, httplib::Response &res) {
      guarded(res, [&] {
        auto id = text::percent_decode(req.matches[1].str());
        if (!id) throw InputError("malformed mention id");
        send_json(res, 200, service.mention(*id));
      });
    });

    server.Get("/api/export", [this](const httplib::Request &, httplib::Response &res) {
      guarded(res, [&] {
        std::ostringstream out;
        service.export_tsv(out);
        res.status = 200;
        res.set_content(out.str(), "text/tab-separated-values; charset=utf-8");
      });
    });

    const auto &dir = service.options().static_dir;
    if (!dir.empty()) server.set_mount_point("/", dir.string());
  }
};

ReviewHttpServer::ReviewHttpServer(ReviewService &service)
    : impl_(std::make_unique<Impl>(service)) {}

ReviewHttpServer::~ReviewHttpServer() { stop(); }

int ReviewHttpServer::start(const std::string &host, int port) {
  int bound = port;
  if (port == 0) {
    bound = impl_->server.bind_to_any_port(host);
  } else if (!impl_->server.bind_to_port(host, port)) {
    bound = -1;
  }
  if (bound < 0) throw Error("cannot bind " + host + ":" + std::to_string(port));
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return bound;
}

void ReviewHttpServer::listen(const std::string &host, int port) {
  if (!impl_->server.listen(host, port)) {
    throw Error("cannot listen on " + host + ":" + std::to_string(port));
  }
}

void ReviewHttpServer::stop() {
  if (!impl_) return;
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

}  // namespace elboot
