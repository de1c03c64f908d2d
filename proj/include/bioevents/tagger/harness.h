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

// Training and evaluation protocol: windowing, splits, scoring, run logs.

#ifndef BIOEVENTS_TAGGER_HARNESS_H_
#define BIOEVENTS_TAGGER_HARNESS_H_

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "bioevents/core/types.h"
#include "bioevents/tagger/classifier.h"
#include "json.hpp"

namespace bioevents::tagger {

enum class Batching { kOneBatchPerDocument, kFixed };

struct ChunkingSpec {
  int max_sequence_length = 128;
  Batching batching = Batching::kOneBatchPerDocument;
  // Sequences per batch in kFixed mode (not a replication setting).
  int fixed_batch_size = 8;
};

Sequence to_sequence(const AnnotatedDocument& doc, int begin, int end);

// Consecutive, non-overlapping windows of at most max_sequence_length tokens.
// Throws kInvalidArgument when max_sequence_length < 2.
std::vector<LabeledSequence> chunk_document(const AnnotatedDocument& doc, const ChunkingSpec& spec,
                                            Task task);

// Concatenates window labels back into document order.
LabelSequence unchunk(std::span<const LabeledSequence> windows);

std::vector<Batch> make_batches(const Corpus& corpus, const ChunkingSpec& spec, Task task);

enum class SplitUnit { kDocuments, kSentences };

struct SplitSpec {
  SplitUnit unit = SplitUnit::kSentences;
  std::size_t train = 0;
  std::size_t dev = 0;
  std::size_t test = 0;
  // Sentence units draw only from sentences with at least one event.
  bool event_bearing_only = true;
};

SplitSpec entity_split_preset();  // 5 / 5 / 10 documents
SplitSpec event_split_preset();   // 564 / 563 / 564 event-bearing sentences

struct Splits {
  Corpus train;
  Corpus dev;
  Corpus test;
};

// Deterministic under `seed`; the three parts are disjoint. Sentence splits
// hold one-sentence documents with ids "<doc_id>#s<k>".
// Throws kInsufficientData when the corpus is too small.
Splits build_splits(const Corpus& corpus, const SplitSpec& spec, std::uint64_t seed);

struct LabelScores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;
};

struct F1Report {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::map<std::string, LabelScores> per_label;
};

// Token-level micro F1 on the positive class: every non-"O" label is positive
// and entity B/I tags are merged. With no positives in gold or prediction the
// scores are 1. Throws kLengthMismatch on misaligned input.
F1Report evaluate_f1(std::span<const LabelSequence> gold, std::span<const LabelSequence> predicted,
                     Task task);

struct EvalReport {
  double f_train = 0.0;
  double f_dev = 0.0;
  double f_test = 0.0;
  std::array<F1Report, 3> details;  // train, dev, test
  std::size_t n_runs = 1;
  std::vector<std::array<double, 3>> run_scores;
  std::string classifier;
  TrainConfig config;
  std::vector<std::string> training_ids;
  std::map<std::string, std::size_t> training_composition;  // id prefix -> count
};

// Trains `classifier` on `training` and scores all three splits.
// Classifier exceptions are rethrown as kClassifier with the run context.
EvalReport run_experiment(const Corpus& training, const Corpus& dev, const Corpus& test,
                          const TrainConfig& config, TokenClassifier& classifier,
                          const ChunkingSpec& chunking = {});

// Gold and predicted labels for every document, windows joined.
F1Report score_corpus(const Corpus& corpus, const TokenClassifier& classifier, Task task,
                      const ChunkingSpec& chunking = {});

nlohmann::json run_log(const EvalReport& report);

}  // namespace bioevents::tagger

#endif  // BIOEVENTS_TAGGER_HARNESS_H_
