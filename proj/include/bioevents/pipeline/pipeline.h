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

// Two-stage annotation of raw biographies: target-entity mentions first,
// then events in the sentences that mention the target.

#ifndef BIOEVENTS_PIPELINE_PIPELINE_H_
#define BIOEVENTS_PIPELINE_PIPELINE_H_

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bioevents/core/types.h"
#include "bioevents/tagger/classifier.h"
#include "bioevents/tagger/harness.h"

namespace bioevents::pipeline {

// One biography. Exactly one of text_path (raw text, split with the built-in
// tokenizer) or doc_path (canonical JSONL, first record, annotations ignored
// for prediction but kept for gold comparison) is set.
struct ManifestEntry {
  std::string id;
  std::string title;
  std::optional<GroupLabel> group;
  std::filesystem::path text_path;
  std::filesystem::path doc_path;
};

// JSONL with fields id, title, group ({origin, gender} or a code such as
// "TW"), and text_path or doc_path. Relative paths resolve against the
// manifest's directory. Throws kParse with file:line.
std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path);
void write_manifest(const std::filesystem::path& path, std::span<const ManifestEntry> entries);

struct FilterResult {
  std::vector<int> retained;  // sentence ordinals, ascending
  std::size_t total_sentences = 0;
  std::vector<EntityMention> mentions;

  double retention() const;
};

// Keeps exactly the sentences with at least one token predicted positive.
FilterResult filter_sentences(const AnnotatedDocument& doc, const tagger::TokenClassifier& model,
                              const tagger::ChunkingSpec& chunking = {});

// One FACTUAL event per token predicted EVENT, in the given sentences only.
std::vector<EventMention> detect_events(const AnnotatedDocument& doc,
                                        std::span<const int> sentences,
                                        const tagger::TokenClassifier& model);

struct StageCounts {
  std::size_t documents = 0;
  std::size_t sentences_before = 0;
  std::size_t sentences_after = 0;
  std::size_t mentions = 0;
  std::size_t events = 0;

  StageCounts& operator+=(const StageCounts& other);
};

// Agreement with gold annotations, filled only for doc_path inputs.
struct GoldComparison {
  std::size_t documents = 0;
  std::size_t gold_events = 0;
  std::size_t predicted_events = 0;
  std::size_t matched_events = 0;
  // Mention-token recall per mention kind (DIRECT / INDIRECT).
  std::map<std::string, std::pair<std::size_t, std::size_t>> mention_tokens_found_of_gold;
};

struct PipelineModels {
  const tagger::TokenClassifier* entity = nullptr;
  const tagger::TokenClassifier* event = nullptr;
};

struct PipelineOptions {
  std::filesystem::path out_dir;
  // Defaults to <out_dir>/checkpoint.log.
  std::filesystem::path checkpoint_path;
  unsigned threads = 1;
  // Stop after this many newly processed documents without writing final
  // outputs, as if the process had been killed.
  std::optional<std::size_t> stop_after;
  tagger::ChunkingSpec chunking;
};

struct QuarantineEntry {
  std::string doc_id;
  std::string reason;
};

struct PipelineRun {
  std::vector<std::string> manifest_ids;
  StageCounts totals;
  std::map<std::string, StageCounts> per_group;  // group code or "UNGROUPED"
  std::vector<QuarantineEntry> quarantine;
  std::optional<GoldComparison> gold;
  std::size_t processed_now = 0;
  std::size_t resumed = 0;
  bool complete = false;
  std::filesystem::path annotated_path;
  std::filesystem::path report_path;
  std::filesystem::path checkpoint_path;
};

inline constexpr std::string_view kAnnotatedFile = "annotated.jsonl";
inline constexpr std::string_view kReportFile = "run_report.json";

// Processes every manifest entry not already in the checkpoint, then writes
// annotated.jsonl (manifest order, quarantined documents omitted) and
// run_report.json. Per-document failures are quarantined. Throws
// kRebuildRequired when the checkpoint is corrupt or belongs to another
// manifest or model pair.
PipelineRun run_corpus_pipeline(std::span<const ManifestEntry> manifest,
                                const PipelineModels& models, const PipelineOptions& options);

}  // namespace bioevents::pipeline

#endif  // BIOEVENTS_PIPELINE_PIPELINE_H_
