// Copyright 2026 The bioevents Authors.
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

#include "httplib.h"

#include "bioevents/core/error.h"
#include "bioevents/ingest/http.h"

namespace bioevents::ingest {

LiveTransport::LiveTransport(std::chrono::seconds timeout, std::string user_agent)
    : timeout_(timeout), user_agent_(std::move(user_agent)) {}

HttpResponse LiveTransport::send(const HttpRequest& request) {
  count();
  const auto scheme_end = request.url.find("://");
  if (scheme_end == std::string::npos) {
    throw Error(ErrorCode::kInvalidArgument, "URL without scheme: " + request.url);
  }
  const auto path_start = request.url.find('/', scheme_end + 3);
  const std::string origin = request.url.substr(0, path_start);
  const std::string target = path_start == std::string::npos ? "/" : request.url.substr(path_start);
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
  if (origin.starts_with("https://")) {
    throw Error(ErrorCode::kNetwork, "this build has no TLS support; cannot fetch " + request.url);
  }
#endif

  httplib::Client client(origin);
  client.set_follow_location(true);
  client.set_connection_timeout(timeout_);
  client.set_read_timeout(timeout_);
  httplib::Headers headers{{"User-Agent", user_agent_}};
  for (const auto& [k, v] : request.headers) headers.emplace(k, v);

  httplib::Result result;
  if (request.method == "GET") {
    result = client.Get(target, headers);
  } else if (request.method == "POST") {
    auto type = request.headers.contains("Content-Type") ? request.headers.at("Content-Type")
                                                         : "application/x-www-form-urlencoded";
    result = client.Post(target, headers, request.body, type);
  } else {
    throw Error(ErrorCode::kInvalidArgument, "unsupported method " + request.method);
  }
  if (!result) {
    throw Error(ErrorCode::kNetwork,
                request.url + ": " + httplib::to_string(result.error()));
  }
  HttpResponse response;
  response.status = result->status;
  response.body = result->body;
  for (const auto& [k, v] : result->headers) response.headers[k] = v;
  return response;
}

}  // namespace bioevents::ingest
