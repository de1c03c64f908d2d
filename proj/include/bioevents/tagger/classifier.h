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

// Token classifier contract and the two in-tree implementations.
//
// Classifiers see whole tokens. An implementation backed by a sub-word
// encoder must score only the first sub-token of each token so that F1 stays
// comparable across implementations.

#ifndef BIOEVENTS_TAGGER_CLASSIFIER_H_
#define BIOEVENTS_TAGGER_CLASSIFIER_H_

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "bioevents/core/labels.h"

namespace bioevents::tagger {

enum class Task { kEntity, kEvent };
std::string_view to_string(Task task);
Task parse_task(std::string_view text);
Layer task_layer(Task task);

// A window of a document. `offset` is the document index of tokens[0].
struct Sequence {
  std::string doc_id;
  int offset = 0;
  std::vector<std::string> tokens;
  std::vector<std::string> pos;  // empty, or one tag per token
};

struct LabeledSequence {
  Sequence sequence;
  LabelSequence labels;
};

// All sequences trained together in one optimizer step.
using Batch = std::vector<LabeledSequence>;

// Label -> probability for one token.
using LabelDistribution = std::map<std::string, double>;

// Highest-probability label; ties go to the label that sorts first.
std::string argmax(const LabelDistribution& dist);

struct TrainConfig {
  int epochs = 5;
  std::uint64_t seed = 13;
  Task task = Task::kEvent;
};

class TokenClassifier {
 public:
  virtual ~TokenClassifier() = default;

  virtual void train(std::span<const Batch> batches, const TrainConfig& config) = 0;

  // One distribution per token of every input sequence. Deterministic after
  // train() for identical input.
  virtual std::vector<std::vector<LabelDistribution>> predict(
      std::span<const Sequence> sequences) const = 0;

  virtual std::string name() const = 0;

  // True when predict() may be called concurrently from several threads.
  virtual bool reentrant() const = 0;
};

std::vector<LabelSequence> predict_labels(const TokenClassifier& classifier,
                                          std::span<const Sequence> sequences);

// Replays training labels keyed by (doc_id, document token index). Unseen
// positions fall back to the label most often seen with the lowercased word
// form, then to "O". With noise_rate > 0 each prediction is swapped for a
// different label with that probability, decided by a hash of
// (seed, doc_id, index) so repeated calls agree.
class MemorizingClassifier : public TokenClassifier {
 public:
  explicit MemorizingClassifier(double noise_rate = 0.0, std::uint64_t seed = 0);

  void train(std::span<const Batch> batches, const TrainConfig& config) override;
  std::vector<std::vector<LabelDistribution>> predict(
      std::span<const Sequence> sequences) const override;
  std::string name() const override;
  bool reentrant() const override { return true; }

 private:
  double noise_rate_;
  std::uint64_t seed_;
  std::map<std::pair<std::string, int>, std::string> by_position_;
  std::unordered_map<std::string, std::string> by_form_;
  std::vector<std::string> alphabet_;
};

// Greedy left-to-right averaged perceptron over sparse lexical features
// (word form, affixes, shape, neighbouring words, POS when present, previous
// label). CPU-only and dependency-free; the reference trainable
// implementation of the contract.
class PerceptronTagger : public TokenClassifier {
 public:
  PerceptronTagger() = default;

  void train(std::span<const Batch> batches, const TrainConfig& config) override;
  std::vector<std::vector<LabelDistribution>> predict(
      std::span<const Sequence> sequences) const override;
  std::string name() const override { return "averaged-perceptron"; }
  bool reentrant() const override { return true; }

 private:
  std::vector<std::uint64_t> features(const Sequence& seq, std::size_t i,
                                      std::string_view previous_label) const;
  std::vector<double> scores(const std::vector<std::uint64_t>& feats) const;

  std::vector<std::string> labels_;
  std::unordered_map<std::uint64_t, std::vector<double>> weights_;
};

std::unique_ptr<TokenClassifier> make_classifier(std::string_view name, double noise_rate = 0.0,
                                                 std::uint64_t seed = 0);

}  // namespace bioevents::tagger

#endif  // BIOEVENTS_TAGGER_CLASSIFIER_H_
