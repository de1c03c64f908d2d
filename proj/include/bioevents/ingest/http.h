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

// HTTP access with a record/replay layer, retries and rate limiting.

#ifndef BIOEVENTS_INGEST_HTTP_H_
#define BIOEVENTS_INGEST_HTTP_H_

#include <atomic>
#include <chrono>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace bioevents::ingest {

struct HttpRequest {
  std::string method = "GET";
  std::string url;  // scheme://host[:port]/path?query
  std::map<std::string, std::string> headers;
  std::string body;
};

struct HttpResponse {
  int status = 0;
  std::string body;
  std::map<std::string, std::string> headers;
};

// Percent-encodes everything outside the unreserved set.
std::string url_encode(std::string_view s);
// "k=v&k2=v2" with encoded values, keys in the given order.
std::string query_string(const std::vector<std::pair<std::string, std::string>>& params);

class HttpTransport {
 public:
  virtual ~HttpTransport() = default;
  // Throws Error(kNetwork) when no response could be obtained.
  virtual HttpResponse send(const HttpRequest& request) = 0;
  // Number of send() calls that reached this transport.
  std::size_t requests() const { return requests_.load(); }

 protected:
  void count() { ++requests_; }

 private:
  std::atomic<std::size_t> requests_{0};
};

// Real network access. https URLs need a TLS-enabled build.
class LiveTransport : public HttpTransport {
 public:
  explicit LiveTransport(std::chrono::seconds timeout = std::chrono::seconds(60),
                         std::string user_agent = "bioevents/1.0");
  HttpResponse send(const HttpRequest& request) override;

 private:
  std::chrono::seconds timeout_;
  std::string user_agent_;
};

// Recording key: digest of method, URL and body.
std::string recording_key(const HttpRequest& request);

// Serves responses from <dir>/<key>.json. A request without a recording
// throws Error(kNetwork) naming the missing file.
class ReplayTransport : public HttpTransport {
 public:
  explicit ReplayTransport(std::filesystem::path dir);
  HttpResponse send(const HttpRequest& request) override;

 private:
  std::filesystem::path dir_;
};

// Forwards to `inner` and stores every exchange for later replay.
class RecordingTransport : public HttpTransport {
 public:
  RecordingTransport(HttpTransport& inner, std::filesystem::path dir);
  HttpResponse send(const HttpRequest& request) override;

 private:
  HttpTransport& inner_;
  std::filesystem::path dir_;
};

// Writes one recording file (used by tests to build fixtures).
void save_recording(const std::filesystem::path& dir, const HttpRequest& request,
                    const HttpResponse& response);

using Sleeper = std::function<void(std::chrono::milliseconds)>;
Sleeper real_sleeper();

// Minimum spacing between requests, shared by all threads.
class RateLimiter {
 public:
  // requests_per_second <= 0 disables limiting.
  explicit RateLimiter(double requests_per_second, Sleeper sleeper = real_sleeper());
  void acquire();

 private:
  std::chrono::nanoseconds interval_;
  Sleeper sleeper_;
  std::mutex mu_;
  std::chrono::steady_clock::time_point next_;
};

struct RetryPolicy {
  int max_attempts = 5;
  std::chrono::milliseconds initial_backoff{500};
  double multiplier = 2.0;
  std::chrono::milliseconds max_backoff{30000};
};

// Retries network errors, 429 and 5xx with exponential backoff (or the
// server's Retry-After seconds when larger). Other statuses are returned.
// Throws Error(kNetwork) once attempts are exhausted.
HttpResponse send_with_retry(HttpTransport& transport, const HttpRequest& request,
                             const RetryPolicy& policy, const Sleeper& sleeper,
                             RateLimiter* limiter = nullptr);

}  // namespace bioevents::ingest

#endif  // BIOEVENTS_INGEST_HTTP_H_
