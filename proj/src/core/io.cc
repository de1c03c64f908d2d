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

#include "bioevents/core/io.h"

#include <algorithm>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>

#include "bioevents/core/error.h"
#include "bioevents/core/labels.h"
#include "bioevents/core/text.h"

namespace bioevents {

using nlohmann::json;

namespace {

json span_json(const TokenSpan& span) { return json::array({span.start, span.end}); }

template <typename T>
T required(const json& j, const char* key) {
  if (!j.contains(key)) {
    throw Error(ErrorCode::kParse, std::string("missing field '") + key + "'");
  }
  return j.at(key).get<T>();
}

const json& required_array(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_array()) {
    throw Error(ErrorCode::kParse, std::string("missing array '") + key + "'");
  }
  return j.at(key);
}

Corpus read_jsonl(const std::filesystem::path& path, const LoadOptions&);

std::map<std::string, CorpusReader>& reader_registry() {
  static std::map<std::string, CorpusReader> registry{{"jsonl", read_jsonl}};
  return registry;
}

std::mutex& registry_mutex() {
  static std::mutex mu;
  return mu;
}

Corpus read_jsonl(const std::filesystem::path& path, const LoadOptions&) {
  std::vector<std::filesystem::path> files;
  if (std::filesystem::is_directory(path)) {
    for (const auto& entry : std::filesystem::directory_iterator(path)) {
      if (entry.is_regular_file() && entry.path().extension() == ".jsonl") {
        files.push_back(entry.path());
      }
    }
    std::sort(files.begin(), files.end());
  } else {
    files.push_back(path);
  }

  Corpus corpus;
  for (const auto& file : files) {
    std::ifstream in(file);
    if (!in) throw Error(ErrorCode::kIo, "cannot open " + file.string());
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (text::trim(line).empty()) continue;
      try {
        corpus.documents.push_back(document_from_json(json::parse(line)));
      } catch (const json::exception& e) {
        throw Error(ErrorCode::kParse,
                    file.string() + ":" + std::to_string(line_no) + ": " + e.what());
      } catch (const Error& e) {
        throw Error(ErrorCode::kParse,
                    file.string() + ":" + std::to_string(line_no) + ": " + e.what());
      }
    }
  }
  return corpus;
}

}  // namespace

json to_json(const AnnotatedDocument& doc) {
  json j;
  j["doc_id"] = doc.doc_id;
  j["target_entity_name"] = doc.target_entity_name;

  json tokens = json::array();
  for (const auto& t : doc.tokens) {
    json tj = {{"index", t.index}, {"text", t.text}, {"sentence_index", t.sentence_index}};
    if (t.lemma) tj["lemma"] = *t.lemma;
    if (t.pos) tj["pos"] = *t.pos;
    tokens.push_back(std::move(tj));
  }
  j["tokens"] = std::move(tokens);

  json mentions = json::array();
  for (const auto& m : doc.entity_mentions) {
    mentions.push_back({{"token_span", span_json(m.token_span)},
                        {"kind", std::string(to_string(m.kind))}});
  }
  j["entity_mentions"] = std::move(mentions);

  json events = json::array();
  for (const auto& e : doc.events) {
    events.push_back({{"token_index", e.token_index},
                      {"uncertainty", std::string(to_string(e.uncertainty))}});
  }
  j["events"] = std::move(events);

  json links = json::array();
  for (const auto& l : doc.links) {
    links.push_back({{"source_token", l.source_token}, {"target_token", l.target_token}});
  }
  j["links"] = std::move(links);

  json cont_mods = json::array();
  for (const auto& c : doc.cont_mods) {
    cont_mods.push_back({{"source_token", c.source_token},
                         {"target_token", c.target_token},
                         {"value", std::string(to_string(c.value))}});
  }
  j["cont_mods"] = std::move(cont_mods);

  if (doc.group) {
    j["group"] = {{"origin", std::string(to_string(doc.group->origin))},
                  {"gender", std::string(to_string(doc.group->gender))}};
  } else {
    j["group"] = nullptr;
  }
  return j;
}

AnnotatedDocument document_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::kParse, "record is not an object");
  AnnotatedDocument doc;
  doc.doc_id = required<std::string>(j, "doc_id");
  doc.target_entity_name = j.value("target_entity_name", std::string());

  for (const auto& tj : required_array(j, "tokens")) {
    Token t;
    t.index = required<int>(tj, "index");
    t.text = required<std::string>(tj, "text");
    t.sentence_index = required<int>(tj, "sentence_index");
    if (tj.contains("lemma") && !tj["lemma"].is_null()) t.lemma = tj["lemma"].get<std::string>();
    if (tj.contains("pos") && !tj["pos"].is_null()) t.pos = tj["pos"].get<std::string>();
    doc.tokens.push_back(std::move(t));
  }
  auto span = [](const json& s) {
    if (!s.is_array() || s.size() != 2) {
      throw Error(ErrorCode::kParse, "token_span must be a [start, end] pair");
    }
    return TokenSpan{s[0].get<int>(), s[1].get<int>()};
  };
  for (const auto& mj : j.value("entity_mentions", json::array())) {
    doc.entity_mentions.push_back(
        {span(mj.at("token_span")),
         parse_mention_kind(mj.value("kind", std::string("DIRECT")))});
  }
  for (const auto& ej : j.value("events", json::array())) {
    doc.events.push_back({required<int>(ej, "token_index"),
                          parse_uncertainty(ej.value("uncertainty", std::string("FACTUAL")))});
  }
  for (const auto& lj : j.value("links", json::array())) {
    doc.links.push_back({required<int>(lj, "source_token"), required<int>(lj, "target_token")});
  }
  for (const auto& cj : j.value("cont_mods", json::array())) {
    doc.cont_mods.push_back({required<int>(cj, "source_token"),
                             required<int>(cj, "target_token"),
                             parse_uncertainty(required<std::string>(cj, "value"))});
  }
  if (j.contains("group") && !j["group"].is_null()) {
    const json& g = j["group"];
    doc.group = GroupLabel{parse_origin(required<std::string>(g, "origin")),
                           parse_gender(required<std::string>(g, "gender"))};
  }
  return doc;
}

std::string serialize_document(const AnnotatedDocument& doc) {
  return to_json(doc).dump();
}

std::string serialize_corpus(const Corpus& corpus) {
  std::string out;
  for (const auto& doc : corpus.documents) {
    out += serialize_document(doc);
    out += '\n';
  }
  return out;
}

void register_reader(const std::string& format, CorpusReader reader) {
  std::lock_guard lock(registry_mutex());
  reader_registry()[format] = std::move(reader);
}

std::vector<std::string> registered_formats() {
  std::lock_guard lock(registry_mutex());
  std::vector<std::string> names;
  for (const auto& [name, reader] : reader_registry()) names.push_back(name);
  return names;
}

Provenance guess_provenance(std::string_view name) {
  std::string lower = text::to_lower(name);
  const std::pair<std::string_view, Provenance> prefixes[] = {
      {"wikibio", Provenance::kWikiBio},   {"gum", Provenance::kGum},
      {"onto", Provenance::kOntoNotes},    {"timebank", Provenance::kTimeBank},
      {"litbank", Provenance::kLitBank},   {"newsreader", Provenance::kNewsReader},
  };
  for (const auto& [prefix, provenance] : prefixes) {
    if (lower.starts_with(prefix)) return provenance;
  }
  return Provenance::kSynthetic;
}

Corpus load_corpus(const std::filesystem::path& path, const std::string& format,
                   const LoadOptions& options) {
  if (!std::filesystem::exists(path)) {
    throw Error(ErrorCode::kIo, "no such file or directory: " + path.string());
  }
  CorpusReader reader;
  {
    std::lock_guard lock(registry_mutex());
    auto it = reader_registry().find(format);
    if (it == reader_registry().end()) {
      throw Error(ErrorCode::kInvalidArgument, "no reader registered for format '" + format + "'");
    }
    reader = it->second;
  }
  Corpus corpus = reader(path, options);
  std::string stem = path.filename().empty() ? path.parent_path().filename().string()
                                             : path.stem().string();
  if (!options.name.empty()) {
    corpus.name = options.name;
  } else if (corpus.name.empty()) {
    corpus.name = stem;
  }
  corpus.provenance = options.provenance.value_or(guess_provenance(corpus.name));

  if (options.validate) {
    auto reports = validate_corpus(corpus, options.validation);
    if (!reports.empty()) {
      std::string message = path.string() + " failed validation";
      for (const auto& r : reports) message += "\n" + r.summary();
      throw Error(ErrorCode::kValidation, message);
    }
  }
  return corpus;
}

std::string tsv_view(const Corpus& corpus) {
  std::ostringstream out;
  out << "doc_id\tsent_idx\ttok_idx\ttext\tentity_bio\tevent\tlink_src_of\tcontmod_value\n";
  for (const auto& doc : corpus.documents) {
    LabelSequence entity = to_token_labels(doc, Layer::kEntity);
    LabelSequence event = to_token_labels(doc, Layer::kEvent);
    std::map<int, int> link_of;
    for (const auto& l : doc.links) link_of[l.source_token] = l.target_token;
    for (const auto& t : doc.tokens) {
      const EventMention* ev = doc.event_at(t.index);
      out << doc.doc_id << '\t' << t.sentence_index << '\t' << t.index << '\t' << t.text
          << '\t' << entity[t.index] << '\t' << event[t.index] << '\t';
      if (auto it = link_of.find(t.index); it != link_of.end()) {
        out << it->second;
      } else {
        out << '_';
      }
      out << '\t';
      if (ev != nullptr && ev->uncertainty != Uncertainty::kFactual) {
        out << to_string(ev->uncertainty);
      } else {
        out << '_';
      }
      out << '\n';
    }
  }
  return out.str();
}

void save_corpus(const Corpus& corpus, const std::filesystem::path& path,
                 const std::string& format) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  if (format == "jsonl") {
    write_file_atomic(path, serialize_corpus(corpus));
  } else if (format == "tsv") {
    write_file_atomic(path, tsv_view(corpus));
  } else {
    throw Error(ErrorCode::kInvalidArgument, "cannot write format '" + format + "'");
  }
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw Error(ErrorCode::kIo, "write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot rename into " + path.string() + ": " + ec.message());
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace bioevents
