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

#include "bioevents/tagger/harness.h"

#include <algorithm>

#include "bioevents/core/error.h"
#include "bioevents/core/labels.h"
#include "bioevents/core/random.h"
#include "bioevents/core/slice.h"

namespace bioevents::tagger {

using nlohmann::json;

Sequence to_sequence(const AnnotatedDocument& doc, int begin, int end) {
  Sequence seq;
  seq.doc_id = doc.doc_id;
  seq.offset = begin;
  bool all_pos = true;
  for (int t = begin; t < end; ++t) {
    seq.tokens.push_back(doc.tokens[t].text);
    all_pos = all_pos && doc.tokens[t].pos.has_value();
  }
  if (all_pos && end > begin) {
    for (int t = begin; t < end; ++t) seq.pos.push_back(*doc.tokens[t].pos);
  }
  return seq;
}

std::vector<LabeledSequence> chunk_document(const AnnotatedDocument& doc, const ChunkingSpec& spec,
                                            Task task) {
  if (spec.max_sequence_length < 2) {
    throw Error(ErrorCode::kInvalidArgument, "max_sequence_length must be at least 2");
  }
  const LabelSequence labels = to_token_labels(doc, task_layer(task));
  const int n = static_cast<int>(doc.tokens.size());
  std::vector<LabeledSequence> windows;
  for (int begin = 0; begin < n; begin += spec.max_sequence_length) {
    const int end = std::min(n, begin + spec.max_sequence_length);
    windows.push_back({to_sequence(doc, begin, end),
                       LabelSequence(labels.begin() + begin, labels.begin() + end)});
  }
  return windows;
}

LabelSequence unchunk(std::span<const LabeledSequence> windows) {
  LabelSequence out;
  for (const auto& w : windows) out.insert(out.end(), w.labels.begin(), w.labels.end());
  return out;
}

std::vector<Batch> make_batches(const Corpus& corpus, const ChunkingSpec& spec, Task task) {
  std::vector<Batch> batches;
  if (spec.batching == Batching::kOneBatchPerDocument) {
    for (const auto& doc : corpus.documents) {
      auto windows = chunk_document(doc, spec, task);
      if (!windows.empty()) batches.push_back(std::move(windows));
    }
    return batches;
  }
  if (spec.fixed_batch_size < 1) {
    throw Error(ErrorCode::kInvalidArgument, "fixed_batch_size must be positive");
  }
  Batch current;
  for (const auto& doc : corpus.documents) {
    for (auto& w : chunk_document(doc, spec, task)) {
      current.push_back(std::move(w));
      if (static_cast<int>(current.size()) == spec.fixed_batch_size) {
        batches.push_back(std::move(current));
        current.clear();
      }
    }
  }
  if (!current.empty()) batches.push_back(std::move(current));
  return batches;
}

SplitSpec entity_split_preset() { return {SplitUnit::kDocuments, 5, 5, 10, false}; }

SplitSpec event_split_preset() { return {SplitUnit::kSentences, 564, 563, 564, true}; }

Splits build_splits(const Corpus& corpus, const SplitSpec& spec, std::uint64_t seed) {
  const std::size_t wanted = spec.train + spec.dev + spec.test;
  Splits splits;
  splits.train.name = corpus.name + "-train";
  splits.dev.name = corpus.name + "-dev";
  splits.test.name = corpus.name + "-test";
  for (Corpus* c : {&splits.train, &splits.dev, &splits.test}) c->provenance = corpus.provenance;
  DeterministicRng rng(seed, "splits/" + corpus.name);

  auto target = [&](std::size_t rank) -> Corpus& {
    if (rank < spec.train) return splits.train;
    if (rank < spec.train + spec.dev) return splits.dev;
    return splits.test;
  };

  if (spec.unit == SplitUnit::kDocuments) {
    if (corpus.documents.size() < wanted) {
      throw Error(ErrorCode::kInsufficientData,
                  "corpus '" + corpus.name + "' has " + std::to_string(corpus.documents.size()) +
                      " documents; split needs " + std::to_string(wanted));
    }
    auto picks = rng.sample_indices(corpus.documents.size(), wanted);
    for (std::size_t rank = 0; rank < picks.size(); ++rank) {
      target(rank).documents.push_back(corpus.documents[picks[rank]]);
    }
    return splits;
  }

  auto pool = spec.event_bearing_only ? event_bearing_sentences(corpus) : all_sentences(corpus);
  if (pool.size() < wanted) {
    throw Error(ErrorCode::kInsufficientData,
                "corpus '" + corpus.name + "' has " + std::to_string(pool.size()) +
                    (spec.event_bearing_only ? " event-bearing" : "") +
                    " sentences; split needs " + std::to_string(wanted));
  }
  auto picks = rng.sample_indices(pool.size(), wanted);
  for (std::size_t rank = 0; rank < picks.size(); ++rank) {
    const auto& ref = pool[picks[rank]];
    const auto& doc = corpus.documents[ref.document];
    AnnotatedDocument piece = extract_sentence(doc, ref.sentence);
    piece.doc_id = sentence_id(doc, ref.sentence);
    target(rank).documents.push_back(std::move(piece));
  }
  return splits;
}

namespace {

double safe_ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

void fill_scores(std::size_t tp, std::size_t fp, std::size_t fn, double& p, double& r,
                 double& f) {
  if (tp + fp + fn == 0) {
    p = r = f = 1.0;
    return;
  }
  p = safe_ratio(tp, tp + fp);
  r = safe_ratio(tp, tp + fn);
  f = (p + r) > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
}

}  // namespace

F1Report evaluate_f1(std::span<const LabelSequence> gold, std::span<const LabelSequence> predicted,
                     Task) {
  if (gold.size() != predicted.size()) {
    throw Error(ErrorCode::kLengthMismatch, std::to_string(gold.size()) + " gold and " +
                                                std::to_string(predicted.size()) +
                                                " predicted sequences");
  }
  F1Report report;
  struct Counts {
    std::size_t tp = 0, fp = 0, fn = 0, support = 0;
  };
  std::map<std::string, Counts> per_label;
  for (std::size_t s = 0; s < gold.size(); ++s) {
    if (gold[s].size() != predicted[s].size()) {
      throw Error(ErrorCode::kLengthMismatch,
                  "sequence " + std::to_string(s) + ": " + std::to_string(gold[s].size()) +
                      " gold and " + std::to_string(predicted[s].size()) + " predicted labels");
    }
    for (std::size_t i = 0; i < gold[s].size(); ++i) {
      const std::string& g = gold[s][i];
      const std::string& p = predicted[s][i];
      const bool gp = is_positive(g);
      const bool pp = is_positive(p);
      if (gp && pp) ++report.tp;
      if (!gp && pp) ++report.fp;
      if (gp && !pp) ++report.fn;
      if (gp) {
        ++per_label[g].support;
        if (g == p) {
          ++per_label[g].tp;
        } else {
          ++per_label[g].fn;
        }
      }
      if (pp && g != p) ++per_label[p].fp;
    }
  }
  fill_scores(report.tp, report.fp, report.fn, report.precision, report.recall, report.f1);
  for (const auto& [label, c] : per_label) {
    LabelScores ls;
    ls.support = c.support;
    fill_scores(c.tp, c.fp, c.fn, ls.precision, ls.recall, ls.f1);
    report.per_label[label] = ls;
  }
  return report;
}

F1Report score_corpus(const Corpus& corpus, const TokenClassifier& classifier, Task task,
                      const ChunkingSpec& chunking) {
  std::vector<Sequence> inputs;
  std::vector<std::size_t> windows_per_doc;
  std::vector<LabelSequence> gold;
  for (const auto& doc : corpus.documents) {
    auto windows = chunk_document(doc, chunking, task);
    windows_per_doc.push_back(windows.size());
    gold.push_back(unchunk(windows));
    for (auto& w : windows) inputs.push_back(std::move(w.sequence));
  }
  auto predicted_windows = predict_labels(classifier, inputs);
  std::vector<LabelSequence> predicted;
  std::size_t next = 0;
  for (std::size_t count : windows_per_doc) {
    LabelSequence joined;
    for (std::size_t k = 0; k < count; ++k, ++next) {
      joined.insert(joined.end(), predicted_windows[next].begin(), predicted_windows[next].end());
    }
    predicted.push_back(std::move(joined));
  }
  return evaluate_f1(gold, predicted, task);
}

EvalReport run_experiment(const Corpus& training, const Corpus& dev, const Corpus& test,
                          const TrainConfig& config, TokenClassifier& classifier,
                          const ChunkingSpec& chunking) {
  EvalReport report;
  report.classifier = classifier.name();
  report.config = config;
  for (const auto& doc : training.documents) {
    report.training_ids.push_back(doc.doc_id);
    auto slash = doc.doc_id.find('/');
    ++report.training_composition[slash == std::string::npos ? training.name
                                                             : doc.doc_id.substr(0, slash)];
  }
  const std::string context = classifier.name() + " (" + std::string(to_string(config.task)) +
                              ", " + std::to_string(config.epochs) + " epochs, seed " +
                              std::to_string(config.seed) + ", " +
                              std::to_string(training.documents.size()) + " training units)";
  try {
    auto batches = make_batches(training, chunking, config.task);
    classifier.train(batches, config);
    report.details[0] = score_corpus(training, classifier, config.task, chunking);
    report.details[1] = score_corpus(dev, classifier, config.task, chunking);
    report.details[2] = score_corpus(test, classifier, config.task, chunking);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kClassifier) throw;
    throw Error(ErrorCode::kClassifier, context + ": " + e.what());
  } catch (const std::exception& e) {
    throw Error(ErrorCode::kClassifier, context + ": " + e.what());
  }
  report.f_train = report.details[0].f1;
  report.f_dev = report.details[1].f1;
  report.f_test = report.details[2].f1;
  report.run_scores.push_back({report.f_train, report.f_dev, report.f_test});
  report.n_runs = report.run_scores.size();
  return report;
}

json run_log(const EvalReport& report) {
  auto split_json = [](const F1Report& r) {
    json per_label = json::object();
    for (const auto& [label, s] : r.per_label) {
      per_label[label] = {{"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1},
                          {"support", s.support}};
    }
    return json{{"tp", r.tp},         {"fp", r.fp},     {"fn", r.fn},
                {"precision", r.precision}, {"recall", r.recall}, {"f1", r.f1},
                {"per_label", per_label}};
  };
  json runs = json::array();
  for (const auto& r : report.run_scores) runs.push_back({r[0], r[1], r[2]});
  return {
      {"classifier", report.classifier},
      {"config",
       {{"task", std::string(to_string(report.config.task))},
        {"epochs", report.config.epochs},
        {"seed", report.config.seed}}},
      {"scores", {{"f_train", report.f_train}, {"f_dev", report.f_dev}, {"f_test", report.f_test}}},
      {"splits",
       {{"train", split_json(report.details[0])},
        {"dev", split_json(report.details[1])},
        {"test", split_json(report.details[2])}}},
      {"n_runs", report.n_runs},
      {"run_scores", runs},
      {"training",
       {{"size", report.training_ids.size()},
        {"composition", report.training_composition},
        {"ids", report.training_ids}}},
  };
}

}  // namespace bioevents::tagger
