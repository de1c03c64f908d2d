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

#include <set>

#include <gtest/gtest.h>

#include "bioevents/core/error.h"
#include "bioevents/core/io.h"
#include "bioevents/ingest/ingest.h"
#include "bioevents/pipeline/pipeline.h"
#include "fake_wiki.h"
#include "support.h"

namespace bioevents::ingest {
namespace {

namespace fs = std::filesystem;
using testing::FakeWiki;
using testing::TempDir;

Sleeper no_sleep() {
  return [](std::chrono::milliseconds) {};
}

FetchOptions quick() {
  FetchOptions o;
  o.sleeper = no_sleep();
  o.retry.initial_backoff = std::chrono::milliseconds(1);
  return o;
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kInvalidArgument;
}

const PersonRecord& by_name(const std::vector<PersonRecord>& records, const std::string& name) {
  for (const auto& r : records) {
    if (r.name == name) return r;
  }
  throw std::runtime_error("no record " + name);
}

TEST(Fetch, WriterBornBeforeTheCutoffIsDropped) {
  TempDir dir("ingest");
  auto wiki = testing::three_writers();
  auto records = fetch_writers(wiki, wiki.endpoint(dir / "cache"), testing::test_grouping(), quick());
  ASSERT_EQ(records.size(), 2u);
  EXPECT_EQ(records[0].person_id, "Q101");
  EXPECT_EQ(records[1].person_id, "Q103");
  EXPECT_EQ(records[0].year_of_birth, 1931);
  EXPECT_EQ(records[0].article_title, "Ada Obi");
}

TEST(Fetch, MissingGenderIsFlaggedAndExcluded) {
  TempDir dir("ingest");
  auto wiki = testing::writer_population();
  const auto config = testing::test_grouping();
  auto records = fetch_writers(wiki, wiki.endpoint(dir / "cache"), config, quick());
  const auto& r = by_name(records, "No Gender");
  EXPECT_TRUE(r.has_flag("MISSING_FIELD:gender"));
  EXPECT_EQ(decide_group(r, config).exclusion_reason, "missing_field:gender");
  EXPECT_EQ(code_of([&] { classify_group(r, config); }), ErrorCode::kMissingField);
  EXPECT_TRUE(by_name(records, "Two Genders").has_flag("MULTIPLE_VALUES:gender"));
  EXPECT_EQ(by_name(records, "Two Dates").year_of_birth, 1880);
  EXPECT_EQ(by_name(records, "Border Man").countries_of_birth.size(), 2u);
}

TEST(Fetch, PageSizeDoesNotChangeTheRecords) {
  TempDir dir("ingest");
  auto wiki = testing::writer_population();
  const auto config = testing::test_grouping();
  auto dump = [](const std::vector<PersonRecord>& rs) {
    std::string s;
    for (const auto& r : rs) s += to_json(r).dump() + "\n";
    return s;
  };
  const std::string whole = dump(fetch_writers(wiki, wiki.endpoint(dir / "c"), config, quick()));
  for (std::size_t page : {1u, 2u, 3u, 7u}) {
    EXPECT_EQ(dump(fetch_writers(wiki, wiki.endpoint(dir / "c", page), config, quick())), whole)
        << "page size " << page;
  }
}

TEST(Fetch, CursorResumesWithoutLossOrDuplicates) {
  TempDir dir("ingest");
  auto wiki = testing::writer_population();
  const auto config = testing::test_grouping();
  auto full = fetch_writers(wiki, wiki.endpoint(dir / "c"), config, quick());

  auto opts = quick();
  opts.cursor_path = dir / "cursor.json";
  opts.max_pages = 3;
  std::vector<PersonRecord> seen;
  auto endpoint = wiki.endpoint(dir / "c", 4);
  auto first = fetch_writers(wiki, endpoint, config, opts, [&](PersonRecord r) { seen.push_back(r); });
  EXPECT_FALSE(first.finished);
  opts.max_pages.reset();
  auto second = fetch_writers(wiki, endpoint, config, opts, [&](PersonRecord r) { seen.push_back(r); });
  EXPECT_TRUE(second.finished);
  ASSERT_EQ(seen.size(), full.size());
  for (std::size_t i = 0; i < full.size(); ++i) EXPECT_EQ(to_json(seen[i]), to_json(full[i]));
  EXPECT_EQ(second.below_birth_year, 1u);

  // A finished cursor short-circuits.
  const std::size_t before = wiki.requests();
  auto third = fetch_writers(wiki, endpoint, config, opts, [&](PersonRecord) { FAIL(); });
  EXPECT_TRUE(third.finished);
  EXPECT_EQ(wiki.requests(), before);
}

TEST(Fetch, RenamedVariableIsASchemaChange) {
  TempDir dir("ingest");
  auto wiki = testing::three_writers();
  wiki.renamed_schema = true;
  try {
    fetch_writers(wiki, wiki.endpoint(dir / "c"), testing::test_grouping(), quick());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kSchemaChange);
    EXPECT_NE(std::string(e.what()).find("ethnic"), std::string::npos) << e.what();
  }
}

TEST(Retry, BacksOffOnRateLimitAndHonoursRetryAfter) {
  TempDir dir("ingest");
  auto wiki = testing::three_writers();
  wiki.throttle_first = 2;
  std::vector<std::chrono::milliseconds> sleeps;
  auto opts = quick();
  opts.sleeper = [&](std::chrono::milliseconds d) { sleeps.push_back(d); };
  auto records = fetch_writers(wiki, wiki.endpoint(dir / "c"), testing::test_grouping(), opts);
  EXPECT_EQ(records.size(), 2u);
  ASSERT_GE(sleeps.size(), 2u);
  for (auto d : sleeps) EXPECT_GE(d.count(), 1000);
  EXPECT_EQ(wiki.requests(), 3u);
}

TEST(Retry, ExhaustedAttemptsAreANetworkError) {
  TempDir dir("ingest");
  auto wiki = testing::three_writers();
  wiki.throttle_first = 100;
  auto opts = quick();
  opts.retry.max_attempts = 3;
  EXPECT_EQ(code_of([&] { fetch_writers(wiki, wiki.endpoint(dir / "c"), testing::test_grouping(), opts); }),
            ErrorCode::kNetwork);
  EXPECT_EQ(wiki.requests(), 3u);
}

TEST(Biography, SecondRequestIsServedFromCache) {
  TempDir dir("ingest");
  auto wiki = testing::three_writers();
  auto endpoint = wiki.endpoint(dir / "cache");
  auto first = fetch_biography(wiki, endpoint, "Q101", "Ada Obi", {}, no_sleep());
  EXPECT_FALSE(first.from_cache);
  EXPECT_EQ(wiki.requests(), 1u);
  auto second = fetch_biography(wiki, endpoint, "Q101", "Ada Obi", {}, no_sleep());
  EXPECT_TRUE(second.from_cache);
  EXPECT_EQ(wiki.requests(), 1u);
  EXPECT_EQ(second.text, first.text);
  EXPECT_TRUE(fs::exists(dir / "cache" / ("Q101__" + std::to_string(first.revision) + ".txt")));
}

TEST(Biography, MissingArticleIsNotFound) {
  TempDir dir("ingest");
  auto wiki = testing::three_writers();
  EXPECT_EQ(code_of([&] {
              fetch_biography(wiki, wiki.endpoint(dir / "c"), "Q999", "Nobody Here", {}, no_sleep());
            }),
            ErrorCode::kNotFound);
}

TEST(Biography, StrippedTextHasNoMarkupDelimiters) {
  TempDir dir("ingest");
  auto wiki = testing::three_writers();
  auto b = fetch_biography(wiki, wiki.endpoint(dir / "c"), "Q101", "Ada Obi", {}, no_sleep());
  for (const char* delim : {"[[", "]]", "{{", "}}", "{|", "|}", "<ref", "</ref>", "'''", "''", "==",
                            "<!--", "-->", "Category:"}) {
    EXPECT_EQ(b.text.find(delim), std::string::npos) << delim << " in:\n" << b.text;
  }
  EXPECT_NE(b.text.find("She was born in Q1033."), std::string::npos) << b.text;
  EXPECT_NE(b.text.find("Ada Obi was a local writer."), std::string::npos) << b.text;
  EXPECT_EQ(b.text.find("reflist"), std::string::npos);
}

TEST(Strip, NestedTemplatesAndLinks) {
  EXPECT_EQ(strip_wikitext("A {{a|{{b}}}} [[x|y]] [[z]] [http://e.org label] &amp; B"),
            "A y z label & B\n");
  EXPECT_EQ(strip_wikitext("x [[File:a.jpg|thumb|[[nested]] caption]] y"), "x y\n");
}

TEST(Groups, DefinitionBranches) {
  const auto config = testing::test_grouping();
  PersonRecord r;
  r.person_id = "Q1";
  r.gender = std::string(kGenderWoman);
  r.year_of_birth = 1900;
  r.countries_of_birth = {"Q30"};
  EXPECT_EQ(classify_group(r, config), (GroupLabel{Origin::kWestern, Gender::kWoman}));
  r.ethnic_groups = {"Q49085"};
  EXPECT_EQ(classify_group(r, config).origin, Origin::kTransnational);
  r.ethnic_groups.clear();
  r.countries_of_birth = {"Q1033"};
  EXPECT_EQ(classify_group(r, config).origin, Origin::kTransnational);
  r.gender = "Q1097630";
  EXPECT_EQ(decide_group(r, config).exclusion_reason, "unmapped_gender:Q1097630");
  EXPECT_EQ(code_of([&] { classify_group(r, config); }), ErrorCode::kValidation);
}

TEST(Groups, OnlyTheConfigChangesTheCounts) {
  TempDir dir("ingest");
  auto wiki = testing::writer_population();
  auto config = testing::test_grouping();
  auto records = fetch_writers(wiki, wiki.endpoint(dir / "c"), config, quick());
  auto p = partition_records(records, config);
  auto again = partition_records(records, config);
  EXPECT_EQ(p.exclusions, again.exclusions);
  config.western_countries.erase("Q30");
  auto shifted = partition_records(records, config);
  EXPECT_NE(p.groups.at("WM").size() + p.groups.at("WW").size(),
            shifted.groups.at("WM").size() + shifted.groups.at("WW").size());
  EXPECT_TRUE(shifted.reconciles());
}

TEST(Groups, PartitionReconciles) {
  TempDir dir("ingest");
  auto wiki = testing::writer_population();
  const auto config = testing::test_grouping();
  auto records = fetch_writers(wiki, wiki.endpoint(dir / "c"), config, quick());
  auto p = partition_records(records, config);
  EXPECT_TRUE(p.reconciles());
  EXPECT_EQ(p.total, 41u);
  EXPECT_EQ(p.groups.at("WM").size(), 9u);
  EXPECT_EQ(p.groups.at("WW").size(), 8u);
  EXPECT_EQ(p.groups.at("TM").size(), 9u);
  EXPECT_EQ(p.groups.at("TW").size(), 10u);
  EXPECT_EQ(p.excluded.at("missing_field:gender"), 1u);
  EXPECT_EQ(p.excluded.at("missing_field:year_of_birth"), 1u);
  EXPECT_EQ(p.excluded.at("missing_field:country_of_birth"), 1u);
  EXPECT_EQ(p.excluded.at("ambiguous:gender"), 1u);
  EXPECT_EQ(p.excluded.at("unmapped_gender:Q1097630"), 1u);
  std::set<std::string> seen;
  for (const auto& [code, members] : p.groups) {
    for (const auto& r : members) EXPECT_TRUE(seen.insert(r.person_id).second);
  }
  for (const auto& [id, reason] : p.exclusions) EXPECT_TRUE(seen.insert(id).second);
}

TEST(Config, ShippedListsLoadWithVersions) {
  const fs::path root = BIOEVENTS_SOURCE_DIR;
  auto g = load_grouping_config(root / "config/western_countries.tsv",
                                root / "config/minority_ethnic_groups.tsv");
  EXPECT_FALSE(g.western_countries.empty());
  EXPECT_FALSE(g.minority_ethnic_groups.empty());
  EXPECT_FALSE(g.western_version.empty());
  EXPECT_EQ(g.birth_year_min, 1808);
  TempDir dir("ingest");
  write_file_atomic(dir / "empty.tsv", "# version: 0\n");
  EXPECT_EQ(code_of([&] {
              load_grouping_config(dir / "empty.tsv", root / "config/minority_ethnic_groups.tsv");
            }),
            ErrorCode::kValidation);
}

TEST(Run, WritesManifestReportAndIsIdempotent) {
  TempDir dir("ingest");
  auto wiki = testing::writer_population();
  const auto config = testing::test_grouping();
  auto endpoint = wiki.endpoint(dir / "cache", 6);
  IngestOptions opts{.out_dir = dir / "out", .fetch = quick()};
  auto report = run_ingest(wiki, endpoint, config, opts);
  EXPECT_TRUE(report.partition.reconciles());
  EXPECT_EQ(report.below_birth_year, 1u);
  EXPECT_EQ(report.biographies, 35u);
  ASSERT_EQ(report.failures.size(), 1u);
  auto manifest = pipeline::read_manifest(report.manifest_path);
  ASSERT_EQ(manifest.size(), 35u);
  for (std::size_t i = 1; i < manifest.size(); ++i) EXPECT_LT(manifest[i - 1].id, manifest[i].id);
  for (const auto& e : manifest) {
    EXPECT_TRUE(fs::exists(e.text_path)) << e.text_path;
    EXPECT_TRUE(e.group.has_value());
  }
  const std::string first_manifest = read_file(report.manifest_path);
  auto json_report = nlohmann::json::parse(read_file(report.report_path));
  EXPECT_EQ(json_report["grouping"]["western_countries_version"], "test-w");
  EXPECT_TRUE(json_report["reconciles"].get<bool>());

  // Unchanged upstream: only the failed article is asked for again.
  const std::size_t before = wiki.requests();
  auto second = run_ingest(wiki, endpoint, config, opts);
  EXPECT_EQ(wiki.requests(), before + 1);
  EXPECT_EQ(second.biographies_from_cache, 35u);
  EXPECT_EQ(read_file(second.manifest_path), first_manifest);
}

TEST(Run, RecordedExchangesReplayOffline) {
  TempDir dir("ingest");
  auto wiki = testing::writer_population();
  const auto config = testing::test_grouping();
  RecordingTransport recorder(wiki, dir / "rec");
  auto live = run_ingest(recorder, wiki.endpoint(dir / "cache1", 10), config,
                         {.out_dir = dir / "live", .fetch = quick()});
  ReplayTransport replay(dir / "rec");
  auto offline = run_ingest(replay, wiki.endpoint(dir / "cache2", 10), config,
                            {.out_dir = dir / "offline", .fetch = quick()});
  EXPECT_EQ(read_file(dir / "live" / "records.jsonl"), read_file(dir / "offline" / "records.jsonl"));
  auto a = pipeline::read_manifest(live.manifest_path);
  auto b = pipeline::read_manifest(offline.manifest_path);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].id, b[i].id);
    EXPECT_EQ(read_file(a[i].text_path), read_file(b[i].text_path));
  }
  // An unrecorded request fails loudly.
  EXPECT_EQ(code_of([&] {
              fetch_biography(replay, wiki.endpoint(dir / "cache3"), "Q1", "Unrecorded", {}, no_sleep());
            }),
            ErrorCode::kNetwork);
}

TEST(Http, UrlEncoding) {
  EXPECT_EQ(url_encode("a b&c=d/é"), "a%20b%26c%3Dd%2F%C3%A9");
  EXPECT_EQ(query_string({{"q", "x y"}, {"f", "json"}}), "q=x%20y&f=json");
}

}  // namespace
}  // namespace bioevents::ingest
