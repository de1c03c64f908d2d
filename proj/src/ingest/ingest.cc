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

#include "bioevents/ingest/ingest.h"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <thread>

#include "bioevents/core/error.h"
#include "bioevents/core/io.h"
#include "bioevents/core/text.h"
#include "bioevents/pipeline/pipeline.h"

namespace bioevents::ingest {

using nlohmann::json;
namespace fs = std::filesystem;

void apply_environment(EndpointConfig& config) {
  if (const char* v = std::getenv("BIOEVENTS_SPARQL_URL"); v != nullptr && *v != '\0') {
    config.sparql_url = v;
  }
  if (const char* v = std::getenv("BIOEVENTS_ARTICLE_API_URL"); v != nullptr && *v != '\0') {
    config.article_api_url = v;
  }
  if (const char* v = std::getenv("BIOEVENTS_CACHE_DIR"); v != nullptr && *v != '\0') {
    config.cache_dir = v;
  }
}

bool PersonRecord::has_flag(std::string_view flag) const {
  return std::find(flags.begin(), flags.end(), flag) != flags.end();
}

json to_json(const PersonRecord& r) {
  auto opt = [](const auto& o) -> json {
    if (o) return *o;
    return nullptr;
  };
  return {{"person_id", r.person_id},
          {"name", r.name},
          {"gender", opt(r.gender)},
          {"year_of_birth", opt(r.year_of_birth)},
          {"countries_of_birth", r.countries_of_birth},
          {"ethnic_groups", r.ethnic_groups},
          {"occupations", r.occupations},
          {"article_title", opt(r.article_title)},
          {"flags", r.flags}};
}

PersonRecord person_from_json(const json& j) {
  PersonRecord r;
  r.person_id = j.at("person_id").get<std::string>();
  r.name = j.value("name", std::string());
  if (j.contains("gender") && !j["gender"].is_null()) r.gender = j["gender"].get<std::string>();
  if (j.contains("year_of_birth") && !j["year_of_birth"].is_null()) {
    r.year_of_birth = j["year_of_birth"].get<int>();
  }
  r.countries_of_birth = j.value("countries_of_birth", std::vector<std::string>());
  r.ethnic_groups = j.value("ethnic_groups", std::vector<std::string>());
  r.occupations = j.value("occupations", std::vector<std::string>());
  if (j.contains("article_title") && !j["article_title"].is_null()) {
    r.article_title = j["article_title"].get<std::string>();
  }
  r.flags = j.value("flags", std::vector<std::string>());
  return r;
}

// ---------------------------------------------------------------------------
// Grouping lists

namespace {

std::set<std::string> read_id_list(const fs::path& path, std::string* version) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::set<std::string> ids;
  std::string line;
  while (std::getline(in, line)) {
    std::string t = text::trim(line);
    if (t.empty()) continue;
    if (t.starts_with("#")) {
      std::string body = text::trim(t.substr(1));
      if (body.starts_with("version:")) *version = text::trim(body.substr(8));
      continue;
    }
    ids.insert(text::trim(t.substr(0, t.find('\t'))));
  }
  if (ids.empty()) throw Error(ErrorCode::kValidation, path.string() + " lists no identifiers");
  if (version->empty()) *version = "unversioned";
  return ids;
}

}  // namespace

GroupingConfig load_grouping_config(const fs::path& western_countries,
                                    const fs::path& minority_ethnic_groups, int birth_year_min) {
  GroupingConfig config;
  config.western_countries = read_id_list(western_countries, &config.western_version);
  config.minority_ethnic_groups = read_id_list(minority_ethnic_groups, &config.minority_version);
  config.birth_year_min = birth_year_min;
  return config;
}

// ---------------------------------------------------------------------------
// Writers query

std::string writers_query(const GroupingConfig& config, std::size_t limit, std::size_t offset) {
  std::string q;
  q += "SELECT ?person ?personLabel ?gender ?birth ?country ?ethnic ?article WHERE {\n";
  q += "  ?person wdt:P106 wd:" + std::string(kWriterOccupation) + " ;\n";
  q += "          wdt:P569 ?birth .\n";
  q += "  FILTER(YEAR(?birth) >= " + std::to_string(config.birth_year_min) + ")\n";
  q += "  ?article schema:about ?person ;\n";
  q += "           schema:isPartOf <https://en.wikipedia.org/> .\n";
  q += "  OPTIONAL { ?person wdt:P21 ?gender . }\n";
  q += "  OPTIONAL { ?person wdt:P19 ?place . ?place wdt:P17 ?country . }\n";
  q += "  OPTIONAL { ?person wdt:P172 ?ethnic . }\n";
  q += "  SERVICE wikibase:label { bd:serviceParam wikibase:language \"en\" . }\n";
  q += "}\nORDER BY ?person ?gender ?birth ?country ?ethnic ?article\n";
  q += "LIMIT " + std::to_string(limit) + " OFFSET " + std::to_string(offset) + "\n";
  return q;
}

namespace {

std::string entity_id(const std::string& uri) {
  auto slash = uri.find_last_of('/');
  return slash == std::string::npos ? uri : uri.substr(slash + 1);
}

std::string url_decode(std::string_view s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '%' && i + 2 < s.size()) {
      int v = 0;
      auto [p, ec] = std::from_chars(s.data() + i + 1, s.data() + i + 3, v, 16);
      if (ec == std::errc() && p == s.data() + i + 3) {
        out += static_cast<char>(v);
        i += 2;
        continue;
      }
    }
    out += s[i] == '_' ? ' ' : s[i];
  }
  return out;
}

std::optional<int> year_of(const std::string& date) {
  // xsd:dateTime, possibly signed: "1850-03-01T00:00:00Z", "-0100-01-01T..."
  std::size_t start = (date.starts_with("-") || date.starts_with("+")) ? 1 : 0;
  auto dash = date.find('-', start);
  int year = 0;
  auto [p, ec] = std::from_chars(date.data() + start, date.data() + dash, year);
  if (ec != std::errc() || dash == std::string::npos) return std::nullopt;
  return date.starts_with("-") ? -year : year;
}

void add_unique(std::vector<std::string>& v, std::string value) {
  if (std::find(v.begin(), v.end(), value) == v.end()) v.push_back(std::move(value));
}

struct Aggregate {
  PersonRecord record;
  std::vector<std::string> genders;
  std::optional<int> year;
};

std::string binding(const json& row, const char* var) {
  if (!row.contains(var)) return {};
  return row[var].value("value", std::string());
}

PersonRecord finish(Aggregate a) {
  PersonRecord r = std::move(a.record);
  std::sort(a.genders.begin(), a.genders.end());
  if (!a.genders.empty()) r.gender = a.genders.front();
  if (a.genders.size() > 1) r.flags.push_back("MULTIPLE_VALUES:gender");
  r.year_of_birth = a.year;
  std::sort(r.countries_of_birth.begin(), r.countries_of_birth.end());
  std::sort(r.ethnic_groups.begin(), r.ethnic_groups.end());
  if (!r.gender) r.flags.push_back("MISSING_FIELD:gender");
  if (!r.year_of_birth) r.flags.push_back("MISSING_FIELD:year_of_birth");
  if (r.countries_of_birth.empty()) r.flags.push_back("MISSING_FIELD:country_of_birth");
  return r;
}

void check_schema(const json& j) {
  if (!j.is_object() || !j.contains("head") || !j["head"].contains("vars") ||
      !j.contains("results") || !j["results"].contains("bindings") ||
      !j["results"]["bindings"].is_array()) {
    throw Error(ErrorCode::kSchemaChange, "SPARQL response lacks head.vars or results.bindings");
  }
  const auto& vars = j["head"]["vars"];
  for (const char* required : {"person", "birth", "gender", "country", "ethnic", "article"}) {
    if (std::find(vars.begin(), vars.end(), required) == vars.end()) {
      throw Error(ErrorCode::kSchemaChange,
                  std::string("SPARQL response no longer has variable '") + required + "'");
    }
  }
}

}  // namespace

FetchStats fetch_writers(HttpTransport& transport, const EndpointConfig& endpoint,
                         const GroupingConfig& config, const FetchOptions& options,
                         const std::function<void(PersonRecord)>& sink) {
  if (endpoint.page_size == 0) throw Error(ErrorCode::kInvalidArgument, "page size must be positive");
  FetchStats stats;
  std::size_t offset = 0;
  if (!options.cursor_path.empty() && fs::exists(options.cursor_path)) {
    json cursor = json::parse(read_file(options.cursor_path));
    offset = cursor.at("offset").get<std::size_t>();
    stats.below_birth_year = cursor.value("below_birth_year", std::size_t{0});
    if (cursor.value("finished", false)) {
      stats.finished = true;
      return stats;
    }
  }

  std::optional<Aggregate> pending;
  std::size_t pending_start = offset;
  auto emit = [&](Aggregate a) {
    PersonRecord r = finish(std::move(a));
    if (r.year_of_birth && *r.year_of_birth < config.birth_year_min) {
      ++stats.below_birth_year;
      return;
    }
    ++stats.emitted;
    sink(std::move(r));
  };
  auto save_cursor = [&](std::size_t at, bool finished) {
    if (options.cursor_path.empty()) return;
    if (options.cursor_path.has_parent_path()) fs::create_directories(options.cursor_path.parent_path());
    write_file_atomic(options.cursor_path,
                      json{{"offset", at},
                           {"finished", finished},
                           {"below_birth_year", stats.below_birth_year}}
                              .dump() +
                          "\n");
  };

  while (!options.max_pages || stats.pages < *options.max_pages) {
    HttpRequest request;
    request.url = endpoint.sparql_url + "?" +
                  query_string({{"query", writers_query(config, endpoint.page_size, offset)},
                                {"format", "json"}});
    request.headers["Accept"] = "application/sparql-results+json";
    HttpResponse response =
        send_with_retry(transport, request, options.retry, options.sleeper, options.limiter);
    if (response.status != 200) {
      throw Error(ErrorCode::kNetwork,
                  "SPARQL endpoint returned HTTP " + std::to_string(response.status));
    }
    json page;
    try {
      page = json::parse(response.body);
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kSchemaChange, std::string("SPARQL response is not JSON: ") + e.what());
    }
    check_schema(page);
    const auto& rows = page["results"]["bindings"];
    ++stats.pages;
    stats.rows += rows.size();

    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& row = rows[i];
      std::string person = entity_id(binding(row, "person"));
      if (person.empty()) throw Error(ErrorCode::kSchemaChange, "row without ?person binding");
      if (!pending || pending->record.person_id != person) {
        if (pending) emit(std::move(*pending));
        pending = Aggregate{};
        pending->record.person_id = person;
        pending->record.occupations = {std::string(kWriterOccupation)};
        pending_start = offset + i;
      }
      Aggregate& a = *pending;
      if (auto name = binding(row, "personLabel"); !name.empty()) a.record.name = name;
      if (auto g = binding(row, "gender"); !g.empty()) add_unique(a.genders, entity_id(g));
      if (auto y = year_of(binding(row, "birth")); y && (!a.year || *y < *a.year)) a.year = y;
      if (auto c = binding(row, "country"); !c.empty()) add_unique(a.record.countries_of_birth, entity_id(c));
      if (auto e = binding(row, "ethnic"); !e.empty()) add_unique(a.record.ethnic_groups, entity_id(e));
      if (auto art = binding(row, "article"); !art.empty() && !a.record.article_title) {
        auto wiki = art.find("/wiki/");
        a.record.article_title = url_decode(wiki == std::string::npos ? art : art.substr(wiki + 6));
      }
    }
    const std::size_t page_end = offset + rows.size();
    if (rows.size() < endpoint.page_size) {
      if (pending) emit(std::move(*pending));
      pending.reset();
      save_cursor(page_end, true);
      stats.finished = true;
      return stats;
    }
    // The pending person may continue on the next page; resume re-reads it.
    const bool spans_whole_page = pending && pending_start == offset;
    save_cursor(pending && !spans_whole_page ? pending_start : page_end, false);
    offset = page_end;
  }
  return stats;
}

std::vector<PersonRecord> fetch_writers(HttpTransport& transport, const EndpointConfig& endpoint,
                                        const GroupingConfig& config, const FetchOptions& options) {
  std::vector<PersonRecord> out;
  fetch_writers(transport, endpoint, config, options,
                [&](PersonRecord r) { out.push_back(std::move(r)); });
  return out;
}

// ---------------------------------------------------------------------------
// Article text

namespace {

// Removes balanced open...close regions (nesting allowed).
std::string drop_balanced(std::string_view s, std::string_view open, std::string_view close) {
  std::string out;
  int depth = 0;
  for (std::size_t i = 0; i < s.size();) {
    if (s.substr(i, open.size()) == open) {
      ++depth;
      i += open.size();
    } else if (depth > 0 && s.substr(i, close.size()) == close) {
      --depth;
      i += close.size();
    } else {
      if (depth == 0) out += s[i];
      ++i;
    }
  }
  return out;
}

std::string drop_between(std::string_view s, std::string_view open, std::string_view close) {
  std::string out;
  std::size_t i = 0;
  while (i < s.size()) {
    auto start = s.find(open, i);
    if (start == std::string_view::npos) break;
    auto end = s.find(close, start + open.size());
    out.append(s.substr(i, start - i));
    if (end == std::string_view::npos) {
      i = s.size();
      break;
    }
    i = end + close.size();
  }
  out.append(s.substr(std::min(i, s.size())));
  return out;
}

// <ref>...</ref> and <ref .../>, case-insensitive on the tag name.
std::string drop_refs(std::string_view s) {
  std::string out;
  std::string lower = text::to_lower(s);
  std::size_t i = 0;
  while (i < s.size()) {
    auto start = lower.find("<ref", i);
    if (start == std::string::npos) break;
    char after = start + 4 < lower.size() ? lower[start + 4] : '>';
    if (after != '>' && after != ' ' && after != '/') {
      out.append(s.substr(i, start + 4 - i));
      i = start + 4;
      continue;
    }
    out.append(s.substr(i, start - i));
    auto tag_end = lower.find('>', start);
    if (tag_end == std::string::npos) {
      i = s.size();
      break;
    }
    if (lower[tag_end - 1] == '/') {
      i = tag_end + 1;
      continue;
    }
    auto close = lower.find("</ref>", tag_end);
    i = close == std::string::npos ? s.size() : close + 6;
  }
  out.append(s.substr(std::min(i, s.size())));
  return out;
}

std::string rewrite_links(std::string_view s) {
  std::string out;
  for (std::size_t i = 0; i < s.size();) {
    if (s.substr(i, 2) == "[[") {
      // Find the matching close, allowing nested links in captions.
      int depth = 0;
      std::size_t j = i;
      for (; j + 1 < s.size(); ++j) {
        if (s.substr(j, 2) == "[[") {
          ++depth;
          ++j;
        } else if (s.substr(j, 2) == "]]") {
          if (--depth == 0) break;
          ++j;
        }
      }
      if (j + 1 >= s.size()) {
        i += 2;
        continue;
      }
      std::string_view inner = s.substr(i + 2, j - i - 2);
      std::string lower = text::to_lower(inner.substr(0, inner.find(':') + 1));
      const bool media = lower == "file:" || lower == "image:" || lower == "category:" ||
                         lower == "media:";
      if (!media) {
        auto bar = inner.rfind('|');
        std::string_view label = bar == std::string_view::npos ? inner : inner.substr(bar + 1);
        out += rewrite_links(label);
      }
      i = j + 2;
      continue;
    }
    if (s[i] == '[') {
      auto close = s.find(']', i);
      std::string_view inner = s.substr(i + 1, close == std::string_view::npos ? 0 : close - i - 1);
      if (close != std::string_view::npos &&
          (inner.starts_with("http://") || inner.starts_with("https://") || inner.starts_with("//"))) {
        auto space = inner.find(' ');
        if (space != std::string_view::npos) out += inner.substr(space + 1);
        i = close + 1;
        continue;
      }
    }
    out += s[i++];
  }
  return out;
}

std::string drop_tags(std::string_view s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '<') {
      auto close = s.find('>', i);
      bool looks_like_tag = close != std::string_view::npos && i + 1 < s.size() &&
                            (std::isalpha(static_cast<unsigned char>(s[i + 1])) || s[i + 1] == '/' ||
                             s[i + 1] == '!');
      if (looks_like_tag) {
        i = close;
        continue;
      }
    }
    out += s[i];
  }
  return out;
}

std::string replace_all(std::string s, std::string_view from, std::string_view to) {
  for (std::size_t pos = 0; (pos = s.find(from, pos)) != std::string::npos; pos += to.size()) {
    s.replace(pos, from.size(), to);
  }
  return s;
}

bool trailing_section(std::string_view heading) {
  static const char* kSections[] = {"references", "external links", "see also", "notes",
                                    "further reading", "sources", "citations", "footnotes"};
  std::string h = text::to_lower(heading);
  return std::any_of(std::begin(kSections), std::end(kSections),
                     [&](const char* name) { return h == name; });
}

}  // namespace

std::string strip_wikitext(std::string_view wikitext) {
  std::string s = drop_between(wikitext, "<!--", "-->");
  s = drop_refs(s);
  s = drop_balanced(s, "{{", "}}");
  s = drop_balanced(s, "{|", "|}");
  s = rewrite_links(s);
  s = drop_tags(s);
  for (auto [from, to] : {std::pair<std::string_view, std::string_view>{"&nbsp;", " "},
                          {"&ndash;", "-"}, {"&mdash;", "-"}, {"&amp;", "&"},
                          {"&quot;", "\""}, {"&lt;", "<"}, {"&gt;", ">"}}) {
    s = replace_all(std::move(s), from, to);
  }

  std::string out;
  bool blank = true;
  for (const auto& raw : text::split(s, '\n')) {
    std::string line = text::trim(raw);
    if (line.starts_with("__") && line.ends_with("__")) continue;
    if (line.size() >= 2 && line.front() == '=' && line.back() == '=') {
      std::string heading = text::trim(std::string_view(line).substr(
          line.find_first_not_of('='), line.find_last_not_of('=') - line.find_first_not_of('=') + 1));
      if (trailing_section(heading)) break;
      line = heading;
    }
    line.erase(0, std::min(line.find_first_not_of("*#:;"), line.size()));
    // Bold and italic quote runs.
    std::string cleaned;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '\'' && i + 1 < line.size() && line[i + 1] == '\'') {
        while (i + 1 < line.size() && line[i + 1] == '\'') ++i;
        continue;
      }
      // Removed markup leaves space runs behind.
      if ((line[i] == ' ' || line[i] == '\t') && !cleaned.empty() && cleaned.back() == ' ') continue;
      cleaned += line[i] == '\t' ? ' ' : line[i];
    }
    line = text::trim(cleaned);
    if (line.empty()) {
      if (!blank) out += '\n';
      blank = true;
      continue;
    }
    out += line + '\n';
    blank = false;
  }
  while (!out.empty() && out.back() == '\n' && out.size() >= 2 && out[out.size() - 2] == '\n') {
    out.pop_back();
  }
  return out;
}

Biography fetch_biography(HttpTransport& transport, const EndpointConfig& endpoint,
                          const std::string& person_id, const std::string& title,
                          const RetryPolicy& retry, const Sleeper& sleeper, RateLimiter* limiter) {
  const fs::path index = endpoint.cache_dir / (person_id + ".rev");
  if (fs::exists(index)) {
    std::string rev = text::trim(read_file(index));
    const fs::path cached = endpoint.cache_dir / (person_id + "__" + rev + ".txt");
    if (fs::exists(cached)) {
      Biography b;
      b.text = read_file(cached);
      std::from_chars(rev.data(), rev.data() + rev.size(), b.revision);
      b.from_cache = true;
      return b;
    }
  }
  if (title.empty()) throw Error(ErrorCode::kNotFound, person_id + " has no article title");

  HttpRequest request;
  request.url = endpoint.article_api_url + "?" +
                query_string({{"action", "query"},
                              {"prop", "revisions"},
                              {"rvprop", "ids|content"},
                              {"rvslots", "main"},
                              {"redirects", "1"},
                              {"format", "json"},
                              {"formatversion", "2"},
                              {"titles", title}});
  HttpResponse response = send_with_retry(transport, request, retry, sleeper, limiter);
  if (response.status == 404) throw Error(ErrorCode::kNotFound, "no article '" + title + "'");
  if (response.status != 200) {
    throw Error(ErrorCode::kNetwork, "article API returned HTTP " + std::to_string(response.status));
  }
  Biography b;
  try {
    json j = json::parse(response.body);
    const json& pages = j.at("query").at("pages");
    if (!pages.is_array() || pages.empty()) throw Error(ErrorCode::kSchemaChange, "no pages array");
    const json& page = pages[0];
    if (page.value("missing", false) || page.value("invalid", false)) {
      throw Error(ErrorCode::kNotFound, "no article '" + title + "' for " + person_id);
    }
    const json& rev = page.at("revisions").at(0);
    b.revision = rev.at("revid").get<std::uint64_t>();
    b.text = strip_wikitext(rev.at("slots").at("main").at("content").get<std::string>());
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kSchemaChange, std::string("unexpected article API response: ") + e.what());
  }
  fs::create_directories(endpoint.cache_dir);
  write_file_atomic(endpoint.cache_dir / (person_id + "__" + std::to_string(b.revision) + ".txt"),
                    b.text);
  write_file_atomic(index, std::to_string(b.revision) + "\n");
  return b;
}

// ---------------------------------------------------------------------------
// Groups

GroupDecision decide_group(const PersonRecord& r, const GroupingConfig& config) {
  GroupDecision d;
  if (!r.year_of_birth) {
    d.exclusion_reason = "missing_field:year_of_birth";
    return d;
  }
  if (*r.year_of_birth < config.birth_year_min) {
    d.exclusion_reason = "out_of_scope:birth_year";
    return d;
  }
  if (!r.gender) {
    d.exclusion_reason = "missing_field:gender";
    return d;
  }
  if (r.has_flag("MULTIPLE_VALUES:gender")) {
    d.exclusion_reason = "ambiguous:gender";
    return d;
  }
  Gender gender;
  if (*r.gender == kGenderMan) {
    gender = Gender::kMan;
  } else if (*r.gender == kGenderWoman) {
    gender = Gender::kWoman;
  } else {
    d.exclusion_reason = "unmapped_gender:" + *r.gender;
    return d;
  }
  if (r.countries_of_birth.empty()) {
    d.exclusion_reason = "missing_field:country_of_birth";
    return d;
  }
  const bool western_birth =
      std::any_of(r.countries_of_birth.begin(), r.countries_of_birth.end(),
                  [&](const std::string& c) { return config.western_countries.contains(c); });
  const bool minority =
      std::any_of(r.ethnic_groups.begin(), r.ethnic_groups.end(),
                  [&](const std::string& e) { return config.minority_ethnic_groups.contains(e); });
  d.group = GroupLabel{western_birth && !minority ? Origin::kWestern : Origin::kTransnational, gender};
  return d;
}

GroupLabel classify_group(const PersonRecord& record, const GroupingConfig& config) {
  GroupDecision d = decide_group(record, config);
  if (d.group) return *d.group;
  if (d.exclusion_reason.starts_with("missing_field:")) {
    throw Error(ErrorCode::kMissingField, record.person_id + ": " + d.exclusion_reason);
  }
  throw Error(ErrorCode::kValidation, record.person_id + ": " + d.exclusion_reason);
}

std::size_t Partition::grouped() const {
  std::size_t n = 0;
  for (const auto& [code, records] : groups) n += records.size();
  return n;
}

bool Partition::reconciles() const {
  std::size_t excluded_total = 0;
  for (const auto& [reason, count] : excluded) excluded_total += count;
  return grouped() + excluded_total == total && exclusions.size() == excluded_total;
}

Partition partition_records(const std::vector<PersonRecord>& records, const GroupingConfig& config) {
  Partition p;
  for (const auto& g : all_groups()) p.groups[group_code(g)];
  for (const auto& r : records) {
    ++p.total;
    GroupDecision d = decide_group(r, config);
    if (d.group) {
      p.groups[group_code(*d.group)].push_back(r);
    } else {
      ++p.excluded[d.exclusion_reason];
      p.exclusions.emplace_back(r.person_id, d.exclusion_reason);
    }
  }
  return p;
}

// ---------------------------------------------------------------------------
// Orchestration

IngestReport run_ingest(HttpTransport& transport, const EndpointConfig& endpoint,
                        const GroupingConfig& config, const IngestOptions& options) {
  if (options.out_dir.empty()) throw Error(ErrorCode::kInvalidArgument, "no output directory");
  fs::create_directories(options.out_dir);
  const fs::path records_path = options.out_dir / "records.jsonl";

  std::map<std::string, PersonRecord> by_id;
  if (fs::exists(records_path)) {
    std::ifstream in(records_path);
    std::string line;
    while (std::getline(in, line)) {
      if (text::trim(line).empty()) continue;
      try {
        PersonRecord r = person_from_json(json::parse(line));
        by_id[r.person_id] = std::move(r);
      } catch (const json::exception&) {
        // A torn final line from an interrupted append; the cursor re-reads it.
      }
    }
  }

  FetchOptions fetch = options.fetch;
  if (fetch.cursor_path.empty()) fetch.cursor_path = options.out_dir / "cursor.json";
  std::optional<RateLimiter> own_limiter;
  if (fetch.limiter == nullptr) {
    own_limiter.emplace(endpoint.requests_per_second, fetch.sleeper);
    fetch.limiter = &*own_limiter;
  }
  FetchStats stats;
  {
    std::ofstream append(records_path, std::ios::app);
    stats = fetch_writers(transport, endpoint, config, fetch, [&](PersonRecord r) {
      append << to_json(r).dump() << '\n';
      append.flush();
      by_id[r.person_id] = std::move(r);
    });
  }

  std::vector<PersonRecord> records;
  for (auto& [id, r] : by_id) records.push_back(r);
  IngestReport report;
  report.partition = partition_records(records, config);
  report.below_birth_year = stats.below_birth_year;

  std::vector<std::pair<const PersonRecord*, GroupLabel>> grouped;
  for (const auto& [code, members] : report.partition.groups) {
    for (const auto& r : members) grouped.emplace_back(&r, *parse_group_code(code));
  }
  std::sort(grouped.begin(), grouped.end(),
            [](const auto& a, const auto& b) { return a.first->person_id < b.first->person_id; });
  if (options.max_biographies && grouped.size() > *options.max_biographies) {
    grouped.resize(*options.max_biographies);
  }

  std::vector<std::optional<pipeline::ManifestEntry>> entries(grouped.size());
  std::vector<std::string> errors(grouped.size());
  std::vector<bool> cached(grouped.size(), false);
  if (stats.finished) {
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t k = next++; k < grouped.size(); k = next++) {
        const PersonRecord& r = *grouped[k].first;
        try {
          Biography b = fetch_biography(transport, endpoint, r.person_id,
                                        r.article_title.value_or(""), fetch.retry, fetch.sleeper,
                                        fetch.limiter);
          cached[k] = b.from_cache;
          pipeline::ManifestEntry e;
          e.id = r.person_id;
          e.title = r.name;
          e.group = grouped[k].second;
          e.text_path = fs::absolute(endpoint.cache_dir /
                                     (r.person_id + "__" + std::to_string(b.revision) + ".txt"));
          entries[k] = std::move(e);
        } catch (const Error& e) {
          errors[k] = e.what();
        }
      }
    };
    const unsigned n = std::max(1u, endpoint.parallelism);
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
    worker();
  }

  std::vector<pipeline::ManifestEntry> manifest;
  for (std::size_t k = 0; k < grouped.size(); ++k) {
    if (entries[k]) {
      ++report.biographies;
      if (cached[k]) ++report.biographies_from_cache;
      manifest.push_back(std::move(*entries[k]));
    } else if (!errors[k].empty()) {
      report.failures.emplace_back(grouped[k].first->person_id, errors[k]);
    }
  }

  json groups = json::object();
  for (const auto& [code, members] : report.partition.groups) groups[code] = members.size();
  json failures = json::array();
  for (const auto& [id, err] : report.failures) failures.push_back({{"person_id", id}, {"error", err}});
  json doc = {
      {"finished", stats.finished},
      {"records", report.partition.total},
      {"below_birth_year", stats.below_birth_year},
      {"grouped", report.partition.grouped()},
      {"groups", groups},
      {"excluded", report.partition.excluded},
      {"reconciles", report.partition.reconciles()},
      {"biographies", report.biographies},
      {"biographies_from_cache", report.biographies_from_cache},
      {"failures", failures},
      {"grouping",
       {{"birth_year_min", config.birth_year_min},
        {"western_countries_version", config.western_version},
        {"minority_ethnic_groups_version", config.minority_version}}},
      {"endpoints", {{"sparql", endpoint.sparql_url}, {"articles", endpoint.article_api_url}}},
  };
  if (stats.finished) {
    report.manifest_path = options.out_dir / "manifest.jsonl";
    pipeline::write_manifest(report.manifest_path, manifest);
  }
  report.report_path = options.out_dir / "ingest_report.json";
  write_file_atomic(report.report_path, doc.dump(2) + "\n");
  return report;
}

}  // namespace bioevents::ingest
