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

#include "bioevents/pipeline/pipeline.h"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <mutex>
#include <set>
#include <thread>

#include "bioevents/core/error.h"
#include "bioevents/core/io.h"
#include "bioevents/core/labels.h"
#include "bioevents/core/random.h"
#include "bioevents/core/slice.h"
#include "bioevents/core/text.h"
#include "json.hpp"

namespace bioevents::pipeline {

using nlohmann::json;
namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// Manifest

namespace {

json group_json(const std::optional<GroupLabel>& group) {
  if (!group) return nullptr;
  return {{"origin", std::string(to_string(group->origin))},
          {"gender", std::string(to_string(group->gender))}};
}

std::optional<GroupLabel> group_from_json(const json& j) {
  if (j.is_null()) return std::nullopt;
  if (j.is_string()) {
    auto g = parse_group_code(j.get<std::string>());
    if (!g) throw Error(ErrorCode::kParse, "unknown group code '" + j.get<std::string>() + "'");
    return g;
  }
  return GroupLabel{parse_origin(j.at("origin").get<std::string>()),
                    parse_gender(j.at("gender").get<std::string>())};
}

}  // namespace

std::vector<ManifestEntry> read_manifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open manifest " + path.string());
  const fs::path base = path.parent_path();
  std::vector<ManifestEntry> entries;
  std::set<std::string> seen;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    auto where = [&] { return path.string() + ":" + std::to_string(line_no) + ": "; };
    try {
      json j = json::parse(line);
      ManifestEntry e;
      e.id = j.at("id").get<std::string>();
      e.title = j.value("title", std::string());
      if (j.contains("group")) e.group = group_from_json(j["group"]);
      auto resolve = [&](const std::string& p) { return fs::path(p).is_absolute() ? fs::path(p) : base / p; };
      if (j.contains("text_path") && !j["text_path"].is_null()) {
        e.text_path = resolve(j["text_path"].get<std::string>());
      }
      if (j.contains("doc_path") && !j["doc_path"].is_null()) {
        e.doc_path = resolve(j["doc_path"].get<std::string>());
      }
      if (e.text_path.empty() == e.doc_path.empty()) {
        throw Error(ErrorCode::kParse, "exactly one of text_path and doc_path is required");
      }
      if (!seen.insert(e.id).second) throw Error(ErrorCode::kParse, "duplicate id '" + e.id + "'");
      entries.push_back(std::move(e));
    } catch (const json::exception& e) {
      throw Error(ErrorCode::kParse, where() + e.what());
    } catch (const Error& e) {
      throw Error(ErrorCode::kParse, where() + e.what());
    }
  }
  return entries;
}

void write_manifest(const fs::path& path, std::span<const ManifestEntry> entries) {
  std::string out;
  for (const auto& e : entries) {
    json j = {{"id", e.id}, {"title", e.title}, {"group", group_json(e.group)}};
    if (!e.text_path.empty()) j["text_path"] = e.text_path.string();
    if (!e.doc_path.empty()) j["doc_path"] = e.doc_path.string();
    out += j.dump() + "\n";
  }
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  write_file_atomic(path, out);
}

// ---------------------------------------------------------------------------
// Stages

double FilterResult::retention() const {
  return total_sentences == 0 ? 1.0
                              : static_cast<double>(retained.size()) /
                                    static_cast<double>(total_sentences);
}

FilterResult filter_sentences(const AnnotatedDocument& doc, const tagger::TokenClassifier& model,
                              const tagger::ChunkingSpec& chunking) {
  FilterResult result;
  const auto ranges = doc.sentence_ranges();
  result.total_sentences = ranges.size();
  if (doc.tokens.empty()) return result;

  auto windows = tagger::chunk_document(doc, chunking, tagger::Task::kEntity);
  std::vector<tagger::Sequence> inputs;
  for (auto& w : windows) inputs.push_back(std::move(w.sequence));
  LabelSequence labels;
  for (auto& row : tagger::predict_labels(model, inputs)) {
    labels.insert(labels.end(), row.begin(), row.end());
  }
  // Mentions never cross sentence boundaries.
  for (std::size_t s = 0; s < ranges.size(); ++s) {
    auto [begin, end] = ranges[s];
    std::span<const std::string> slice(labels.data() + begin, static_cast<std::size_t>(end - begin));
    bool positive = std::any_of(slice.begin(), slice.end(),
                                [](const std::string& l) { return is_positive(l); });
    if (!positive) continue;
    result.retained.push_back(static_cast<int>(s));
    auto mentions = mentions_from_labels(slice, begin);
    result.mentions.insert(result.mentions.end(), mentions.begin(), mentions.end());
  }
  return result;
}

std::vector<EventMention> detect_events(const AnnotatedDocument& doc,
                                        std::span<const int> sentences,
                                        const tagger::TokenClassifier& model) {
  if (sentences.empty()) return {};
  const auto ranges = doc.sentence_ranges();
  std::vector<tagger::Sequence> inputs;
  for (int s : sentences) {
    if (s < 0 || s >= static_cast<int>(ranges.size())) {
      throw Error(ErrorCode::kInvalidArgument, "sentence ordinal " + std::to_string(s) +
                                                   " out of range in '" + doc.doc_id + "'");
    }
    inputs.push_back(tagger::to_sequence(doc, ranges[s].first, ranges[s].second));
  }
  std::vector<EventMention> events;
  auto predicted = tagger::predict_labels(model, inputs);
  for (std::size_t k = 0; k < inputs.size(); ++k) {
    auto found = events_from_labels(predicted[k], inputs[k].offset);
    events.insert(events.end(), found.begin(), found.end());
  }
  std::sort(events.begin(), events.end(),
            [](const EventMention& a, const EventMention& b) { return a.token_index < b.token_index; });
  return events;
}

StageCounts& StageCounts::operator+=(const StageCounts& o) {
  documents += o.documents;
  sentences_before += o.sentences_before;
  sentences_after += o.sentences_after;
  mentions += o.mentions;
  events += o.events;
  return *this;
}

// ---------------------------------------------------------------------------
// Checkpoint log

namespace {

json counts_json(const StageCounts& c) {
  return {{"documents", c.documents},
          {"sentences_before", c.sentences_before},
          {"sentences_after", c.sentences_after},
          {"mentions", c.mentions},
          {"events", c.events}};
}

StageCounts counts_from_json(const json& j) {
  StageCounts c;
  c.documents = j.at("documents").get<std::size_t>();
  c.sentences_before = j.at("sentences_before").get<std::size_t>();
  c.sentences_after = j.at("sentences_after").get<std::size_t>();
  c.mentions = j.at("mentions").get<std::size_t>();
  c.events = j.at("events").get<std::size_t>();
  return c;
}

// Result of one document, exactly as stored in the log.
struct DocOutcome {
  std::string doc_id;
  bool ok = false;
  std::string reason;
  StageCounts counts;
  json record;  // canonical document when ok
  json gold;    // gold comparison, null when the input had no gold
};

json outcome_payload(const DocOutcome& o) {
  return {{"doc_id", o.doc_id}, {"status", o.ok ? "ok" : "quarantined"},
          {"reason", o.reason}, {"counts", counts_json(o.counts)},
          {"record", o.record}, {"gold", o.gold}};
}

std::string checksum_line(const json& payload) {
  const std::string body = payload.dump();
  json line = {{"entry", payload}, {"checksum", hex_digest(body)}};
  return line.dump() + "\n";
}

class CheckpointLog {
 public:
  CheckpointLog(fs::path path, std::string fingerprint)
      : path_(std::move(path)), fingerprint_(std::move(fingerprint)) {}

  // Reads completed outcomes; creates the log with its header when missing.
  std::map<std::string, DocOutcome> open(const std::set<std::string>& manifest_ids) {
    std::map<std::string, DocOutcome> done;
    if (path_.has_parent_path()) fs::create_directories(path_.parent_path());
    if (!fs::exists(path_)) {
      std::ofstream out(path_, std::ios::binary);
      out << checksum_line({{"fingerprint", fingerprint_}});
      if (!out) throw Error(ErrorCode::kIo, "cannot create checkpoint " + path_.string());
      return done;
    }
    std::string contents = read_file(path_);
    // An unterminated last line is an append cut short by a kill; drop it.
    if (!contents.empty() && contents.back() != '\n') {
      auto cut = contents.find_last_of('\n');
      contents.resize(cut == std::string::npos ? 0 : cut + 1);
      write_file_atomic(path_, contents);
    }
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < contents.size()) {
      auto nl = contents.find('\n', pos);
      std::string line = contents.substr(pos, nl - pos);
      pos = nl + 1;
      ++line_no;
      auto corrupt = [&](const std::string& why) {
        return Error(ErrorCode::kRebuildRequired, "checkpoint " + path_.string() + " line " +
                                                      std::to_string(line_no) + ": " + why +
                                                      "; delete it to rebuild");
      };
      json parsed;
      try {
        parsed = json::parse(line);
      } catch (const json::exception&) {
        throw corrupt("not valid JSON");
      }
      if (!parsed.is_object() || !parsed.contains("entry") || !parsed.contains("checksum") ||
          parsed["checksum"] != hex_digest(parsed["entry"].dump())) {
        throw corrupt("checksum mismatch");
      }
      const json& entry = parsed["entry"];
      if (line_no == 1) {
        if (entry.value("fingerprint", std::string()) != fingerprint_) {
          throw corrupt("written for a different manifest, model pair or splitter");
        }
        continue;
      }
      try {
        DocOutcome o;
        o.doc_id = entry.at("doc_id").get<std::string>();
        o.ok = entry.at("status").get<std::string>() == "ok";
        o.reason = entry.at("reason").get<std::string>();
        o.counts = counts_from_json(entry.at("counts"));
        o.record = entry.at("record");
        o.gold = entry.at("gold");
        if (!manifest_ids.contains(o.doc_id)) throw corrupt("unknown document '" + o.doc_id + "'");
        done[o.doc_id] = std::move(o);
      } catch (const json::exception& e) {
        throw corrupt(e.what());
      }
    }
    if (line_no == 0) throw Error(ErrorCode::kRebuildRequired, "checkpoint has no header");
    return done;
  }

  void append(const DocOutcome& outcome) {
    const std::string line = checksum_line(outcome_payload(outcome));
    std::lock_guard lock(mu_);
    std::ofstream out(path_, std::ios::binary | std::ios::app);
    out << line;
    out.flush();
    if (!out) throw Error(ErrorCode::kIo, "cannot append to checkpoint " + path_.string());
  }

 private:
  fs::path path_;
  std::string fingerprint_;
  std::mutex mu_;
};

// Serializes predict() for classifiers that are not reentrant.
class GuardedModel : public tagger::TokenClassifier {
 public:
  explicit GuardedModel(const tagger::TokenClassifier& inner) : inner_(inner) {}
  void train(std::span<const tagger::Batch>, const tagger::TrainConfig&) override {
    throw Error(ErrorCode::kClassifier, "pipeline models are read-only");
  }
  std::vector<std::vector<tagger::LabelDistribution>> predict(
      std::span<const tagger::Sequence> sequences) const override {
    if (inner_.reentrant()) return inner_.predict(sequences);
    std::lock_guard lock(mu_);
    return inner_.predict(sequences);
  }
  std::string name() const override { return inner_.name(); }
  bool reentrant() const override { return true; }

 private:
  const tagger::TokenClassifier& inner_;
  mutable std::mutex mu_;
};

AnnotatedDocument load_input(const ManifestEntry& entry, std::optional<AnnotatedDocument>* gold) {
  if (!entry.doc_path.empty()) {
    LoadOptions options;
    options.validate = false;
    Corpus c = load_corpus(entry.doc_path, "jsonl", options);
    if (c.documents.empty()) throw Error(ErrorCode::kParse, "no document in " + entry.doc_path.string());
    AnnotatedDocument doc = c.documents.front();
    doc.doc_id = entry.id;
    *gold = doc;
    return strip_annotations(doc);
  }
  return text::document_from_text(entry.id, entry.title, read_file(entry.text_path));
}

json compare_with_gold(const AnnotatedDocument& gold, const AnnotatedDocument& predicted) {
  std::set<int> gold_events;
  for (const auto& e : gold.events) gold_events.insert(e.token_index);
  std::size_t matched = 0;
  for (const auto& e : predicted.events) matched += gold_events.count(e.token_index);
  std::vector<bool> found(predicted.tokens.size(), false);
  for (const auto& m : predicted.entity_mentions) {
    for (int t = m.token_span.start; t <= m.token_span.end; ++t) found[t] = true;
  }
  json kinds = json::object();
  for (const auto& m : gold.entity_mentions) {
    std::string kind(to_string(m.kind));
    if (!kinds.contains(kind)) kinds[kind] = {0, 0};
    for (int t = m.token_span.start; t <= m.token_span.end; ++t) {
      if (t >= 0 && t < static_cast<int>(found.size()) && found[t]) {
        kinds[kind][0] = kinds[kind][0].get<std::size_t>() + 1;
      }
      kinds[kind][1] = kinds[kind][1].get<std::size_t>() + 1;
    }
  }
  return {{"gold_events", gold.events.size()},
          {"predicted_events", predicted.events.size()},
          {"matched_events", matched},
          {"mention_tokens", kinds}};
}

DocOutcome process(const ManifestEntry& entry, const tagger::TokenClassifier& entity,
                   const tagger::TokenClassifier& event, const tagger::ChunkingSpec& chunking) {
  DocOutcome o;
  o.doc_id = entry.id;
  o.gold = nullptr;
  try {
    std::optional<AnnotatedDocument> gold;
    AnnotatedDocument doc = load_input(entry, &gold);
    doc.group = entry.group;
    if (doc.target_entity_name.empty()) doc.target_entity_name = entry.title;
    FilterResult filtered = filter_sentences(doc, entity, chunking);
    doc.entity_mentions = filtered.mentions;
    doc.events = detect_events(doc, filtered.retained, event);
    o.counts.documents = 1;
    o.counts.sentences_before = filtered.total_sentences;
    o.counts.sentences_after = filtered.retained.size();
    o.counts.mentions = doc.entity_mentions.size();
    o.counts.events = doc.events.size();
    if (gold) o.gold = compare_with_gold(*gold, doc);
    o.record = to_json(doc);
    o.ok = true;
  } catch (const std::exception& e) {
    o = DocOutcome{};
    o.doc_id = entry.id;
    o.reason = e.what();
    o.record = nullptr;
    o.gold = nullptr;
  }
  return o;
}

std::string group_key(const std::optional<GroupLabel>& g) {
  return g ? group_code(*g) : std::string("UNGROUPED");
}

}  // namespace

PipelineRun run_corpus_pipeline(std::span<const ManifestEntry> manifest,
                                const PipelineModels& models, const PipelineOptions& options) {
  if (models.entity == nullptr || models.event == nullptr) {
    throw Error(ErrorCode::kInvalidArgument, "pipeline needs both an entity and an event model");
  }
  if (options.out_dir.empty()) throw Error(ErrorCode::kInvalidArgument, "no output directory");
  fs::create_directories(options.out_dir);

  PipelineRun run;
  run.checkpoint_path =
      options.checkpoint_path.empty() ? options.out_dir / "checkpoint.log" : options.checkpoint_path;
  std::set<std::string> ids;
  std::string manifest_digest_input;
  for (const auto& e : manifest) {
    run.manifest_ids.push_back(e.id);
    ids.insert(e.id);
    manifest_digest_input += e.id + "\t" + e.text_path.string() + "\t" + e.doc_path.string() + "\n";
  }
  const std::string manifest_digest = hex_digest(manifest_digest_input);
  const std::string fingerprint = manifest_digest + "|" + models.entity->name() + "|" +
                                  models.event->name() + "|" + std::string(text::kSplitterVersion) +
                                  "|" + std::to_string(options.chunking.max_sequence_length);

  CheckpointLog log(run.checkpoint_path, fingerprint);
  std::map<std::string, DocOutcome> done = log.open(ids);
  run.resumed = done.size();

  std::vector<const ManifestEntry*> pending;
  for (const auto& e : manifest) {
    if (!done.contains(e.id)) pending.push_back(&e);
  }
  const std::size_t budget =
      options.stop_after ? std::min(*options.stop_after, pending.size()) : pending.size();

  GuardedModel entity(*models.entity);
  GuardedModel event(*models.event);
  std::mutex done_mu;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < budget; k = next++) {
      DocOutcome o = process(*pending[k], entity, event, options.chunking);
      log.append(o);
      std::lock_guard lock(done_mu);
      done[o.doc_id] = std::move(o);
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(options.threads, budget == 0 ? 1 : budget));
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
  }
  run.processed_now = budget;
  if (budget < pending.size()) return run;

  // Every document has an outcome: assemble outputs in manifest order.
  std::string annotated;
  json groups = json::object();
  json quarantine = json::array();
  GoldComparison gold;
  bool any_gold = false;
  for (const auto& e : manifest) {
    const DocOutcome& o = done.at(e.id);
    if (!o.ok) {
      run.quarantine.push_back({o.doc_id, o.reason});
      quarantine.push_back({{"doc_id", o.doc_id}, {"reason", o.reason}});
      continue;
    }
    annotated += o.record.dump() + "\n";
    run.totals += o.counts;
    run.per_group[group_key(e.group)] += o.counts;
    if (!o.gold.is_null()) {
      any_gold = true;
      ++gold.documents;
      gold.gold_events += o.gold.at("gold_events").get<std::size_t>();
      gold.predicted_events += o.gold.at("predicted_events").get<std::size_t>();
      gold.matched_events += o.gold.at("matched_events").get<std::size_t>();
      for (const auto& [kind, pair] : o.gold.at("mention_tokens").items()) {
        auto& slot = gold.mention_tokens_found_of_gold[kind];
        slot.first += pair[0].get<std::size_t>();
        slot.second += pair[1].get<std::size_t>();
      }
    }
  }
  if (any_gold) run.gold = gold;

  for (const auto& [key, counts] : run.per_group) groups[key] = counts_json(counts);
  json report = {
      {"manifest_digest", manifest_digest},
      {"documents", manifest.size()},
      {"splitter_version", std::string(text::kSplitterVersion)},
      {"models", {{"entity", models.entity->name()}, {"event", models.event->name()}}},
      {"max_sequence_length", options.chunking.max_sequence_length},
      {"totals", counts_json(run.totals)},
      {"retention", run.totals.sentences_before == 0
                        ? 1.0
                        : static_cast<double>(run.totals.sentences_after) /
                              static_cast<double>(run.totals.sentences_before)},
      {"per_group", groups},
      {"quarantine", quarantine},
  };
  if (run.gold) {
    json kinds = json::object();
    for (const auto& [kind, pair] : run.gold->mention_tokens_found_of_gold) {
      kinds[kind] = {{"found", pair.first},
                     {"gold", pair.second},
                     {"recall", pair.second == 0 ? 1.0
                                                 : static_cast<double>(pair.first) /
                                                       static_cast<double>(pair.second)}};
    }
    report["gold_comparison"] = {{"documents", run.gold->documents},
                                 {"gold_events", run.gold->gold_events},
                                 {"predicted_events", run.gold->predicted_events},
                                 {"matched_events", run.gold->matched_events},
                                 {"mention_token_recall", kinds}};
  }
  run.annotated_path = options.out_dir / kAnnotatedFile;
  run.report_path = options.out_dir / kReportFile;
  write_file_atomic(run.annotated_path, annotated);
  write_file_atomic(run.report_path, report.dump(2) + "\n");
  run.complete = true;
  return run;
}

}  // namespace bioevents::pipeline
