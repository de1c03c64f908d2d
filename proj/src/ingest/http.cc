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

#include "bioevents/ingest/http.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <thread>

#include "bioevents/core/error.h"
#include "bioevents/core/io.h"
#include "bioevents/core/random.h"
#include "json.hpp"

namespace bioevents::ingest {

using nlohmann::json;

std::string url_encode(std::string_view s) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : s) {
    if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
      out += static_cast<char>(c);
    } else {
      out += '%';
      out += kHex[c >> 4];
      out += kHex[c & 15];
    }
  }
  return out;
}

std::string query_string(const std::vector<std::pair<std::string, std::string>>& params) {
  std::string out;
  for (const auto& [k, v] : params) {
    if (!out.empty()) out += '&';
    out += url_encode(k) + "=" + url_encode(v);
  }
  return out;
}

std::string recording_key(const HttpRequest& request) {
  return hex_digest(request.method + "\n" + request.url + "\n" + request.body);
}

namespace {

json headers_json(const std::map<std::string, std::string>& headers) {
  json j = json::object();
  for (const auto& [k, v] : headers) j[k] = v;
  return j;
}

}  // namespace

void save_recording(const std::filesystem::path& dir, const HttpRequest& request,
                    const HttpResponse& response) {
  std::filesystem::create_directories(dir);
  json j = {{"request", {{"method", request.method}, {"url", request.url}, {"body", request.body}}},
            {"response",
             {{"status", response.status},
              {"headers", headers_json(response.headers)},
              {"body", response.body}}}};
  write_file_atomic(dir / (recording_key(request) + ".json"), j.dump(2) + "\n");
}

ReplayTransport::ReplayTransport(std::filesystem::path dir) : dir_(std::move(dir)) {}

HttpResponse ReplayTransport::send(const HttpRequest& request) {
  count();
  const auto file = dir_ / (recording_key(request) + ".json");
  if (!std::filesystem::exists(file)) {
    throw Error(ErrorCode::kNetwork, "no recording " + file.string() + " for " + request.method +
                                         " " + request.url);
  }
  try {
    json j = json::parse(read_file(file));
    HttpResponse response;
    response.status = j.at("response").at("status").get<int>();
    response.body = j.at("response").at("body").get<std::string>();
    for (const auto& [k, v] : j.at("response").value("headers", json::object()).items()) {
      response.headers[k] = v.get<std::string>();
    }
    return response;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, "bad recording " + file.string() + ": " + e.what());
  }
}

RecordingTransport::RecordingTransport(HttpTransport& inner, std::filesystem::path dir)
    : inner_(inner), dir_(std::move(dir)) {}

HttpResponse RecordingTransport::send(const HttpRequest& request) {
  count();
  HttpResponse response = inner_.send(request);
  save_recording(dir_, request, response);
  return response;
}

Sleeper real_sleeper() {
  return [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
}

RateLimiter::RateLimiter(double requests_per_second, Sleeper sleeper)
    : interval_(requests_per_second > 0
                    ? std::chrono::nanoseconds(static_cast<std::int64_t>(1e9 / requests_per_second))
                    : std::chrono::nanoseconds(0)),
      sleeper_(std::move(sleeper)),
      next_(std::chrono::steady_clock::now()) {}

void RateLimiter::acquire() {
  if (interval_.count() == 0) return;
  std::chrono::nanoseconds wait{0};
  {
    std::lock_guard lock(mu_);
    const auto now = std::chrono::steady_clock::now();
    const auto slot = std::max(now, next_);
    wait = slot - now;
    next_ = slot + interval_;
  }
  if (wait.count() > 0) {
    sleeper_(std::chrono::ceil<std::chrono::milliseconds>(wait));
  }
}

namespace {

bool retryable(int status) { return status == 429 || status >= 500; }

std::chrono::milliseconds retry_after(const HttpResponse& response) {
  for (const auto& [k, v] : response.headers) {
    std::string key = k;
    std::transform(key.begin(), key.end(), key.begin(), [](unsigned char c) { return std::tolower(c); });
    if (key != "retry-after") continue;
    long seconds = 0;
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), seconds);
    if (ec == std::errc() && seconds > 0) return std::chrono::seconds(seconds);
  }
  return std::chrono::milliseconds(0);
}

}  // namespace

HttpResponse send_with_retry(HttpTransport& transport, const HttpRequest& request,
                             const RetryPolicy& policy, const Sleeper& sleeper,
                             RateLimiter* limiter) {
  std::chrono::milliseconds backoff = policy.initial_backoff;
  std::string last_error;
  for (int attempt = 1; attempt <= std::max(1, policy.max_attempts); ++attempt) {
    if (limiter != nullptr) limiter->acquire();
    std::chrono::milliseconds wait = backoff;
    try {
      HttpResponse response = transport.send(request);
      if (!retryable(response.status)) return response;
      last_error = "HTTP " + std::to_string(response.status);
      wait = std::max(wait, retry_after(response));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kNetwork) throw;
      last_error = e.what();
    }
    if (attempt == policy.max_attempts) break;
    sleeper(std::min(wait, policy.max_backoff));
    backoff = std::chrono::milliseconds(
        static_cast<std::int64_t>(static_cast<double>(backoff.count()) * policy.multiplier));
  }
  throw Error(ErrorCode::kNetwork, request.method + " " + request.url + " failed after " +
                                       std::to_string(policy.max_attempts) +
                                       " attempts: " + last_error);
}

}  // namespace bioevents::ingest
