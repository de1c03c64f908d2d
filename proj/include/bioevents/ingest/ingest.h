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

// Writers' metadata from a SPARQL endpoint, article text from the MediaWiki
// API, and assignment to the four origin x gender groups.

#ifndef BIOEVENTS_INGEST_INGEST_H_
#define BIOEVENTS_INGEST_INGEST_H_

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "bioevents/core/types.h"
#include "bioevents/ingest/http.h"
#include "json.hpp"

namespace bioevents::ingest {

struct EndpointConfig {
  std::string sparql_url = "https://query.wikidata.org/sparql";
  std::string article_api_url = "https://en.wikipedia.org/w/api.php";
  std::filesystem::path cache_dir = "cache";
  std::chrono::seconds timeout{60};
  double requests_per_second = 1.0;
  std::size_t page_size = 5000;
  unsigned parallelism = 2;
  std::string user_agent = "bioevents/1.0 (research toolkit)";
};

// BIOEVENTS_SPARQL_URL, BIOEVENTS_ARTICLE_API_URL and BIOEVENTS_CACHE_DIR
// replace the corresponding fields when set.
void apply_environment(EndpointConfig& config);

inline constexpr std::string_view kWriterOccupation = "Q36180";
inline constexpr std::string_view kGenderMan = "Q6581097";
inline constexpr std::string_view kGenderWoman = "Q6581072";

struct PersonRecord {
  std::string person_id;  // e.g. Q42
  std::string name;
  std::optional<std::string> gender;  // knowledge-base identifier
  std::optional<int> year_of_birth;
  // Countries of the birthplace; historical places may have several.
  std::vector<std::string> countries_of_birth;
  std::vector<std::string> ethnic_groups;
  std::vector<std::string> occupations;
  std::optional<std::string> article_title;
  std::optional<std::string> biography_text;
  // e.g. "MISSING_FIELD:gender"
  std::vector<std::string> flags;

  bool has_flag(std::string_view flag) const;
};

nlohmann::json to_json(const PersonRecord& record);
PersonRecord person_from_json(const nlohmann::json& j);

struct GroupingConfig {
  std::set<std::string> western_countries;
  std::set<std::string> minority_ethnic_groups;
  int birth_year_min = 1808;
  std::string western_version;
  std::string minority_version;
};

// Reads "<QID>\t<label>" lines; "# version: X" sets the list version and
// other '#' lines are comments. Throws kValidation on an empty list.
GroupingConfig load_grouping_config(const std::filesystem::path& western_countries,
                                    const std::filesystem::path& minority_ethnic_groups,
                                    int birth_year_min = 1808);

// SPARQL for one page of writers born in or after birth_year_min, with an
// English article, ordered by person.
std::string writers_query(const GroupingConfig& config, std::size_t limit, std::size_t offset);

struct FetchOptions {
  // Resume state; written after every page when set.
  std::filesystem::path cursor_path;
  std::optional<std::size_t> max_pages;
  RetryPolicy retry;
  Sleeper sleeper = real_sleeper();
  RateLimiter* limiter = nullptr;
};

struct FetchStats {
  std::size_t pages = 0;
  std::size_t rows = 0;
  std::size_t emitted = 0;
  std::size_t below_birth_year = 0;
  bool finished = false;
};

// Streams aggregated records to `sink`. Rows for one person may span pages;
// a record is emitted once its last row has been seen. Throws kSchemaChange
// when the response lacks the expected variables or shape, kNetwork when
// retries are exhausted.
FetchStats fetch_writers(HttpTransport& transport, const EndpointConfig& endpoint,
                         const GroupingConfig& config, const FetchOptions& options,
                         const std::function<void(PersonRecord)>& sink);

std::vector<PersonRecord> fetch_writers(HttpTransport& transport, const EndpointConfig& endpoint,
                                        const GroupingConfig& config,
                                        const FetchOptions& options = {});

// Removes templates, tables, references, comments, HTML tags, files and
// categories, and link/emphasis/heading markup, keeping the visible text.
std::string strip_wikitext(std::string_view wikitext);

struct Biography {
  std::string text;
  std::uint64_t revision = 0;
  bool from_cache = false;
};

// Plain text of the article `title`, cached as
// <cache_dir>/<person_id>__<revision>.txt with <person_id>.rev naming the
// revision. A cached person costs no request. Throws kNotFound when the
// article does not exist and kSchemaChange on an unexpected response.
Biography fetch_biography(HttpTransport& transport, const EndpointConfig& endpoint,
                          const std::string& person_id, const std::string& title,
                          const RetryPolicy& retry = {}, const Sleeper& sleeper = real_sleeper(),
                          RateLimiter* limiter = nullptr);

struct GroupDecision {
  std::optional<GroupLabel> group;
  std::string exclusion_reason;  // empty when grouped
};

// TRANSNATIONAL iff no birth country is Western or some ethnic group is a
// minority. Exclusion reasons: "out_of_scope:birth_year",
// "missing_field:<field>", "unmapped_gender:<id>".
GroupDecision decide_group(const PersonRecord& record, const GroupingConfig& config);

// Throws kMissingField for missing data and kValidation for other exclusions.
GroupLabel classify_group(const PersonRecord& record, const GroupingConfig& config);

struct Partition {
  std::map<std::string, std::vector<PersonRecord>> groups;  // by group code
  std::map<std::string, std::size_t> excluded;              // reason -> count
  std::vector<std::pair<std::string, std::string>> exclusions;  // (person, reason)
  std::size_t total = 0;

  std::size_t grouped() const;
  bool reconciles() const;  // grouped + excluded == total
};

Partition partition_records(const std::vector<PersonRecord>& records, const GroupingConfig& config);

struct IngestOptions {
  std::filesystem::path out_dir;
  FetchOptions fetch;
  std::optional<std::size_t> max_biographies;
};

struct IngestReport {
  Partition partition;
  // Dropped by fetch_writers before partitioning.
  std::size_t below_birth_year = 0;
  std::size_t biographies = 0;
  std::size_t biographies_from_cache = 0;
  std::vector<std::pair<std::string, std::string>> failures;  // (person, error)
  std::filesystem::path manifest_path;
  std::filesystem::path report_path;
};

// fetch_writers + partition + fetch_biography for grouped records; writes
// <out_dir>/manifest.jsonl (pipeline input), records.jsonl and
// ingest_report.json (counts, exclusions and list versions).
IngestReport run_ingest(HttpTransport& transport, const EndpointConfig& endpoint,
                        const GroupingConfig& config, const IngestOptions& options);

}  // namespace bioevents::ingest

#endif  // BIOEVENTS_INGEST_INGEST_H_
