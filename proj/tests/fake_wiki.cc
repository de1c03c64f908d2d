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

#include "fake_wiki.h"

#include <regex>

#include "json.hpp"

namespace bioevents::testing {

namespace {

using nlohmann::json;

std::string decode(std::string_view s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '%' && i + 2 < s.size()) {
      out += static_cast<char>(std::stoi(std::string(s.substr(i + 1, 2)), nullptr, 16));
      i += 2;
    } else {
      out += s[i] == '+' ? ' ' : s[i];
    }
  }
  return out;
}

std::map<std::string, std::string> params_of(const std::string& url) {
  std::map<std::string, std::string> out;
  auto q = url.find('?');
  if (q == std::string::npos) return out;
  std::string rest = url.substr(q + 1);
  std::size_t pos = 0;
  while (pos <= rest.size()) {
    auto amp = rest.find('&', pos);
    std::string pair = rest.substr(pos, amp == std::string::npos ? std::string::npos : amp - pos);
    auto eq = pair.find('=');
    if (eq != std::string::npos) out[decode(pair.substr(0, eq))] = decode(pair.substr(eq + 1));
    if (amp == std::string::npos) break;
    pos = amp + 1;
  }
  return out;
}

json uri(const std::string& value) { return {{"type", "uri"}, {"value", value}}; }

json row_json(const WriterRow& r) {
  const std::string entity = "http://www.wikidata.org/entity/";
  json row = json::object();
  row["person"] = uri(entity + r.person);
  row["personLabel"] = {{"type", "literal"}, {"value", r.label}, {"xml:lang", "en"}};
  if (!r.gender.empty()) row["gender"] = uri(entity + r.gender);
  if (!r.birth.empty()) {
    row["birth"] = {{"type", "literal"},
                    {"datatype", "http://www.w3.org/2001/XMLSchema#dateTime"},
                    {"value", r.birth}};
  }
  if (!r.country.empty()) row["country"] = uri(entity + r.country);
  if (!r.ethnic.empty()) row["ethnic"] = uri(entity + r.ethnic);
  if (!r.article_title.empty()) {
    std::string t = r.article_title;
    for (auto& c : t) {
      if (c == ' ') c = '_';
    }
    row["article"] = uri("https://en.wikipedia.org/wiki/" + t);
  }
  return row;
}

std::string article_for(const std::string& name, bool woman, const std::string& place, int n) {
  const std::string pron = woman ? "She" : "He";
  const std::string poss = woman ? "her" : "his";
  std::string w;
  w += "{{Infobox writer\n| name = " + name + "\n| birth_place = [[" + place + "]]\n}}\n";
  w += "'''" + name + "''' was a [[" + place + "|local]] writer.<ref>{{cite web|title=x}}</ref>\n\n";
  w += "== Life ==\n" + pron + " was born in [[" + place + "]]. " + pron + " wrote ''" +
       std::to_string(n) + " novels'' and " + poss + " essays appeared widely.<!-- unsourced -->\n";
  w += pron + " married in " + std::to_string(1900 + n) + " and moved to [[Paris]].\n";
  w += "{| class=\"wikitable\"\n| cell || cell\n|}\n";
  w += "* " + pron + " received a prize.\n";
  w += "== References ==\n{{reflist}}\n[[Category:Writers]]\n";
  return w;
}

}  // namespace

ingest::HttpResponse FakeWiki::send(const ingest::HttpRequest& request) {
  count();
  ingest::HttpResponse response;
  if (throttle_first > 0) {
    --throttle_first;
    response.status = 429;
    response.headers["Retry-After"] = "1";
    return response;
  }
  auto params = params_of(request.url);
  if (request.url.starts_with(kSparqlUrl)) {
    static const std::regex paging(R"(LIMIT (\d+) OFFSET (\d+))");
    std::smatch m;
    const std::string query = params["query"];
    if (!std::regex_search(query, m, paging)) {
      response.status = 400;
      return response;
    }
    const std::size_t limit = std::stoul(m[1]);
    const std::size_t offset = std::stoul(m[2]);
    json vars = {"person", "personLabel", "gender", "birth", "country", "ethnic", "article"};
    if (renamed_schema) vars = {"person", "personLabel", "gender", "birth", "country", "ethnicity", "article"};
    json bindings = json::array();
    for (std::size_t i = offset; i < rows.size() && i < offset + limit; ++i) {
      bindings.push_back(row_json(rows[i]));
    }
    response.status = 200;
    response.body = json{{"head", {{"vars", vars}}}, {"results", {{"bindings", bindings}}}}.dump();
    return response;
  }
  if (request.url.starts_with(kArticleUrl)) {
    const std::string title = params["titles"];
    json page;
    if (auto it = articles.find(title); it != articles.end()) {
      page = {{"pageid", 1000 + it->second.first},
              {"title", title},
              {"revisions",
               {{{"revid", it->second.first},
                 {"slots", {{"main", {{"contentmodel", "wikitext"}, {"content", it->second.second}}}}}}}}};
    } else {
      page = {{"title", title}, {"missing", true}};
    }
    response.status = 200;
    response.body = json{{"batchcomplete", true}, {"query", {{"pages", {page}}}}}.dump();
    return response;
  }
  response.status = 404;
  return response;
}

ingest::EndpointConfig FakeWiki::endpoint(const std::filesystem::path& cache_dir,
                                          std::size_t page_size) const {
  ingest::EndpointConfig e;
  e.sparql_url = kSparqlUrl;
  e.article_api_url = kArticleUrl;
  e.cache_dir = cache_dir;
  e.page_size = page_size;
  e.requests_per_second = 0;
  e.parallelism = 2;
  return e;
}

ingest::GroupingConfig test_grouping() {
  ingest::GroupingConfig g;
  g.western_countries = {"Q30", "Q142", "Q145", "Q183"};
  g.minority_ethnic_groups = {"Q49085"};
  g.birth_year_min = 1808;
  g.western_version = "test-w";
  g.minority_version = "test-m";
  return g;
}

namespace {

constexpr const char* kMan = "Q6581097";
constexpr const char* kWoman = "Q6581072";

void add_writer(WikiContent& wiki, WriterRow row, bool with_article = true) {
  if (with_article && !row.article_title.empty()) {
    const int n = static_cast<int>(wiki.articles.size()) + 2;
    wiki.articles[row.article_title] = {
        static_cast<std::uint64_t>(5000 + n),
        article_for(row.label, row.gender == kWoman, row.country.empty() ? "Somewhere" : row.country, n)};
  }
  wiki.rows.push_back(std::move(row));
}

}  // namespace

FakeWiki three_writers() {
  WikiContent wiki;
  add_writer(wiki, {"Q101", "Ada Obi", kWoman, "1931-05-02T00:00:00Z", "Q1033", "", "Ada Obi"});
  add_writer(wiki, {"Q102", "Early Author", kMan, "1790-01-01T00:00:00Z", "Q145", "", "Early Author"});
  add_writer(wiki, {"Q103", "Bert Lang", kMan, "1850-07-09T00:00:00Z", "Q183", "", "Bert Lang"});
  return FakeWiki(std::move(wiki));
}

FakeWiki writer_population() {
  WikiContent wiki;
  const char* western[] = {"Q30", "Q142", "Q145", "Q183"};
  const char* other[] = {"Q1033", "Q668", "Q17", "Q115"};
  int id = 200;
  auto qid = [&] { return "Q" + std::to_string(id++); };
  auto year = [](int y) { return std::to_string(y) + "-03-04T00:00:00Z"; };
  // Eight per group, alternating countries.
  for (int i = 0; i < 8; ++i) {
    std::string q = qid();
    add_writer(wiki, {q, "Western Man " + std::to_string(i), kMan, year(1820 + 10 * i), western[i % 4], "",
                      "Western Man " + std::to_string(i)});
    q = qid();
    add_writer(wiki, {q, "Western Woman " + std::to_string(i), kWoman, year(1825 + 10 * i),
                      western[(i + 1) % 4], "", "Western Woman " + std::to_string(i)});
    q = qid();
    add_writer(wiki, {q, "Other Man " + std::to_string(i), kMan, year(1830 + 10 * i), other[i % 4], "",
                      "Other Man " + std::to_string(i)});
    q = qid();
    add_writer(wiki, {q, "Other Woman " + std::to_string(i), kWoman, year(1835 + 10 * i),
                      other[(i + 3) % 4], "", "Other Woman " + std::to_string(i)});
  }
  // Western birthplace with a minority ethnicity: transnational.
  std::string q = qid();
  add_writer(wiki, {q, "Minority Woman", kWoman, year(1901), "Q30", "Q49085", "Minority Woman"});
  // Historical birthplace in two countries, one Western: Western.
  q = qid();
  add_writer(wiki, {q, "Border Man", kMan, year(1870), "Q142", "", "Border Man"});
  add_writer(wiki, {q, "Border Man", kMan, year(1870), "Q1033", "", "Border Man"}, false);
  // Two birth dates on record: the earlier year wins.
  q = qid();
  add_writer(wiki, {q, "Two Dates", kWoman, year(1880), "Q17", "", "Two Dates"});
  add_writer(wiki, {q, "Two Dates", kWoman, year(1881), "Q17", "", "Two Dates"}, false);
  // Exclusions.
  q = qid();
  add_writer(wiki, {q, "No Gender", "", year(1900), "Q30", "", "No Gender"});
  q = qid();
  add_writer(wiki, {q, "Other Gender", "Q1097630", year(1910), "Q30", "", "Other Gender"});
  q = qid();
  add_writer(wiki, {q, "Two Genders", kMan, year(1920), "Q145", "", "Two Genders"});
  add_writer(wiki, {q, "Two Genders", kWoman, year(1920), "Q145", "", "Two Genders"}, false);
  q = qid();
  add_writer(wiki, {q, "No Country", kWoman, year(1930), "", "", "No Country"});
  q = qid();
  add_writer(wiki, {q, "No Birth", kMan, "", "Q30", "", "No Birth"});
  q = qid();
  add_writer(wiki, {q, "Too Early", kWoman, year(1801), "Q30", "", "Too Early"});
  // Grouped, but the article has gone missing.
  q = qid();
  add_writer(wiki, {q, "Vanished Page", kMan, year(1950), "Q17", "", "Vanished Page"}, false);
  return FakeWiki(std::move(wiki));
}

}  // namespace bioevents::testing
