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

#include <httplib.h>

#include "elboot/error.hpp"
#include "elboot/net.hpp"

namespace elboot {

HttpsTransport::HttpsTransport(std::chrono::seconds timeout, std::string user_agent)
    : timeout_(timeout), user_agent_(std::move(user_agent)) {}

HttpResponse HttpsTransport::get(const std::string &url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw InputError("not an absolute URL: " + url);
  const auto path_start = url.find('/', scheme_end + 3);
  const std::string origin = url.substr(0, path_start);
  const std::string path = path_start == std::string::npos ? "/" : url.substr(path_start);

  httplib::Client client(origin);
  client.set_connection_timeout(timeout_.count(), 0);
  client.set_read_timeout(timeout_.count(), 0);
  client.set_follow_location(true);
  httplib::Headers headers{{"User-Agent", user_agent_}};
  auto res = client.Get(path, headers);
  if (!res) {
    const auto err = res.error();
    throw TransportError(url + ": " + httplib::to_string(err),
                         err == httplib::Error::ConnectionTimeout ||
                             err == httplib::Error::Read);
  }
  return HttpResponse{res->status, res->body};
}

}  // namespace elboot
