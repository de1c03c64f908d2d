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

#include "bioevents/tagger/classifier.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "bioevents/core/error.h"
#include "bioevents/core/random.h"
#include "bioevents/core/text.h"

namespace bioevents::tagger {

std::string_view to_string(Task task) { return task == Task::kEntity ? "ENTITY" : "EVENT"; }

Task parse_task(std::string_view s) {
  std::string lower = text::to_lower(s);
  if (lower == "entity") return Task::kEntity;
  if (lower == "event") return Task::kEvent;
  throw Error(ErrorCode::kParse, "unknown task '" + std::string(s) + "'");
}

Layer task_layer(Task task) { return task == Task::kEntity ? Layer::kEntity : Layer::kEvent; }

std::string argmax(const LabelDistribution& dist) {
  std::string best(kOutside);
  double best_p = -std::numeric_limits<double>::infinity();
  for (const auto& [label, p] : dist) {
    if (p > best_p) {
      best = label;
      best_p = p;
    }
  }
  return best;
}

std::vector<LabelSequence> predict_labels(const TokenClassifier& classifier,
                                          std::span<const Sequence> sequences) {
  auto dists = classifier.predict(sequences);
  if (dists.size() != sequences.size()) {
    throw Error(ErrorCode::kClassifier, classifier.name() + " returned " +
                                            std::to_string(dists.size()) + " outputs for " +
                                            std::to_string(sequences.size()) + " sequences");
  }
  std::vector<LabelSequence> out;
  out.reserve(dists.size());
  for (std::size_t s = 0; s < dists.size(); ++s) {
    if (dists[s].size() != sequences[s].tokens.size()) {
      throw Error(ErrorCode::kClassifier,
                  classifier.name() + " returned " + std::to_string(dists[s].size()) +
                      " labels for a " + std::to_string(sequences[s].tokens.size()) +
                      "-token sequence");
    }
    LabelSequence labels;
    labels.reserve(dists[s].size());
    for (const auto& d : dists[s]) labels.push_back(argmax(d));
    out.push_back(std::move(labels));
  }
  return out;
}

// ---------------------------------------------------------------------------

MemorizingClassifier::MemorizingClassifier(double noise_rate, std::uint64_t seed)
    : noise_rate_(noise_rate), seed_(seed) {
  if (noise_rate < 0.0 || noise_rate > 1.0) {
    throw Error(ErrorCode::kInvalidArgument, "noise rate must lie in [0, 1]");
  }
}

void MemorizingClassifier::train(std::span<const Batch> batches, const TrainConfig&) {
  by_position_.clear();
  by_form_.clear();
  std::map<std::string, std::map<std::string, std::size_t>> form_counts;
  std::set<std::string> alphabet{std::string(kOutside)};
  for (const auto& batch : batches) {
    for (const auto& item : batch) {
      const auto& seq = item.sequence;
      for (std::size_t i = 0; i < seq.tokens.size() && i < item.labels.size(); ++i) {
        by_position_[{seq.doc_id, seq.offset + static_cast<int>(i)}] = item.labels[i];
        ++form_counts[text::to_lower(seq.tokens[i])][item.labels[i]];
        alphabet.insert(item.labels[i]);
      }
    }
  }
  for (const auto& [form, counts] : form_counts) {
    auto best = std::max_element(counts.begin(), counts.end(), [](const auto& a, const auto& b) {
      return a.second < b.second;
    });
    by_form_[form] = best->first;
  }
  alphabet_.assign(alphabet.begin(), alphabet.end());
}

std::vector<std::vector<LabelDistribution>> MemorizingClassifier::predict(
    std::span<const Sequence> sequences) const {
  std::vector<std::vector<LabelDistribution>> out;
  out.reserve(sequences.size());
  for (const auto& seq : sequences) {
    std::vector<LabelDistribution> row;
    row.reserve(seq.tokens.size());
    for (std::size_t i = 0; i < seq.tokens.size(); ++i) {
      const int index = seq.offset + static_cast<int>(i);
      std::string label(kOutside);
      if (auto it = by_position_.find({seq.doc_id, index}); it != by_position_.end()) {
        label = it->second;
      } else if (auto f = by_form_.find(text::to_lower(seq.tokens[i])); f != by_form_.end()) {
        label = f->second;
      }
      if (noise_rate_ > 0.0 && alphabet_.size() > 1) {
        std::uint64_t h = fnv1a(seq.doc_id + "#" + std::to_string(index), seed_);
        double u = static_cast<double>(h >> 11) * 0x1.0p-53;
        if (u < noise_rate_) {
          auto pos = std::find(alphabet_.begin(), alphabet_.end(), label) - alphabet_.begin();
          std::size_t shift = 1 + static_cast<std::size_t>((h >> 3) % (alphabet_.size() - 1));
          label = alphabet_[(static_cast<std::size_t>(pos) + shift) % alphabet_.size()];
        }
      }
      row.push_back({{label, 1.0}});
    }
    out.push_back(std::move(row));
  }
  return out;
}

std::string MemorizingClassifier::name() const {
  if (noise_rate_ == 0.0) return "memorizing-mock";
  return "memorizing-mock(noise=" + std::to_string(noise_rate_) + ")";
}

// ---------------------------------------------------------------------------

namespace {

std::string word_shape(std::string_view w) {
  std::string shape;
  for (unsigned char c : w) {
    char k = std::isupper(c) ? 'X' : std::islower(c) ? 'x' : std::isdigit(c) ? 'd' : static_cast<char>(c);
    if (shape.empty() || shape.back() != k) shape += k;
  }
  return shape;
}

std::uint64_t feature(std::string_view name, std::string_view value) {
  return fnv1a(value, fnv1a(name));
}

std::size_t best_index(const std::vector<double>& scores) {
  return static_cast<std::size_t>(std::max_element(scores.begin(), scores.end()) - scores.begin());
}

}  // namespace

std::vector<std::uint64_t> PerceptronTagger::features(const Sequence& seq, std::size_t i,
                                                      std::string_view previous_label) const {
  auto word = [&](std::ptrdiff_t k) -> std::string {
    std::ptrdiff_t j = static_cast<std::ptrdiff_t>(i) + k;
    if (j < 0) return "<s>";
    if (j >= static_cast<std::ptrdiff_t>(seq.tokens.size())) return "</s>";
    return text::to_lower(seq.tokens[static_cast<std::size_t>(j)]);
  };
  auto tag = [&](std::ptrdiff_t k) -> std::string {
    std::ptrdiff_t j = static_cast<std::ptrdiff_t>(i) + k;
    if (seq.pos.size() != seq.tokens.size()) return "";
    if (j < 0) return "<s>";
    if (j >= static_cast<std::ptrdiff_t>(seq.pos.size())) return "</s>";
    return seq.pos[static_cast<std::size_t>(j)];
  };
  const std::string& raw = seq.tokens[i];
  const std::string w = word(0);
  std::vector<std::uint64_t> f = {
      feature("bias", ""),
      feature("w", w),
      feature("lemma", text::lemmatize(w)),
      feature("suf3", w.size() >= 3 ? w.substr(w.size() - 3) : w),
      feature("suf2", w.size() >= 2 ? w.substr(w.size() - 2) : w),
      feature("pre3", w.substr(0, 3)),
      feature("shape", word_shape(raw)),
      feature("w-1", word(-1)),
      feature("w+1", word(1)),
      feature("w-2", word(-2)),
      feature("w+2", word(2)),
      feature("w-1,w", word(-1) + "|" + w),
      feature("prev", previous_label),
      feature("prev,w", std::string(previous_label) + "|" + w),
  };
  if (std::string t = tag(0); !t.empty()) {
    f.push_back(feature("pos", t));
    f.push_back(feature("pos-1", tag(-1)));
    f.push_back(feature("pos+1", tag(1)));
    f.push_back(feature("pos-1,pos", tag(-1) + "|" + t));
  }
  return f;
}

std::vector<double> PerceptronTagger::scores(const std::vector<std::uint64_t>& feats) const {
  std::vector<double> s(labels_.size(), 0.0);
  for (auto f : feats) {
    auto it = weights_.find(f);
    if (it == weights_.end()) continue;
    for (std::size_t k = 0; k < s.size(); ++k) s[k] += it->second[k];
  }
  return s;
}

void PerceptronTagger::train(std::span<const Batch> batches, const TrainConfig& config) {
  std::set<std::string> alphabet{std::string(kOutside)};
  for (const auto& batch : batches) {
    for (const auto& item : batch) alphabet.insert(item.labels.begin(), item.labels.end());
  }
  labels_.assign(alphabet.begin(), alphabet.end());
  const std::size_t n_labels = labels_.size();
  std::map<std::string, std::size_t> label_id;
  for (std::size_t k = 0; k < n_labels; ++k) label_id[labels_[k]] = k;

  // Lazy averaging: totals accumulate weight * time between updates.
  struct Param {
    std::vector<double> total;
    std::vector<std::uint64_t> stamp;
  };
  weights_.clear();
  std::unordered_map<std::uint64_t, Param> acc;
  std::uint64_t clock = 0;
  auto update = [&](std::uint64_t f, std::size_t k, double delta) {
    auto& w = weights_[f];
    auto& p = acc[f];
    if (w.empty()) {
      w.assign(n_labels, 0.0);
      p.total.assign(n_labels, 0.0);
      p.stamp.assign(n_labels, 0);
    }
    p.total[k] += static_cast<double>(clock - p.stamp[k]) * w[k];
    p.stamp[k] = clock;
    w[k] += delta;
  };

  std::vector<std::size_t> order(batches.size());
  std::iota(order.begin(), order.end(), 0);
  DeterministicRng rng(config.seed, "perceptron");
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    rng.shuffle(order);
    for (std::size_t b : order) {
      for (const auto& item : batches[b]) {
        const auto& seq = item.sequence;
        std::string previous = "<s>";
        for (std::size_t i = 0; i < seq.tokens.size() && i < item.labels.size(); ++i) {
          ++clock;
          auto feats = features(seq, i, previous);
          std::size_t guess = best_index(scores(feats));
          std::size_t gold = label_id.at(item.labels[i]);
          if (guess != gold) {
            for (auto f : feats) {
              update(f, gold, 1.0);
              update(f, guess, -1.0);
            }
          }
          previous = labels_[guess];
        }
      }
    }
  }
  if (clock == 0) return;
  for (auto& [f, w] : weights_) {
    auto& p = acc[f];
    for (std::size_t k = 0; k < n_labels; ++k) {
      p.total[k] += static_cast<double>(clock - p.stamp[k]) * w[k];
      w[k] = p.total[k] / static_cast<double>(clock);
    }
  }
}

std::vector<std::vector<LabelDistribution>> PerceptronTagger::predict(
    std::span<const Sequence> sequences) const {
  std::vector<std::vector<LabelDistribution>> out;
  out.reserve(sequences.size());
  for (const auto& seq : sequences) {
    std::vector<LabelDistribution> row;
    row.reserve(seq.tokens.size());
    std::string previous = "<s>";
    for (std::size_t i = 0; i < seq.tokens.size(); ++i) {
      if (labels_.empty()) {
        row.push_back({{std::string(kOutside), 1.0}});
        continue;
      }
      auto s = scores(features(seq, i, previous));
      const double top = *std::max_element(s.begin(), s.end());
      double z = 0.0;
      for (double& v : s) z += (v = std::exp(v - top));
      LabelDistribution dist;
      for (std::size_t k = 0; k < s.size(); ++k) dist[labels_[k]] = s[k] / z;
      previous = labels_[best_index(s)];
      row.push_back(std::move(dist));
    }
    out.push_back(std::move(row));
  }
  return out;
}

std::unique_ptr<TokenClassifier> make_classifier(std::string_view name, double noise_rate,
                                                 std::uint64_t seed) {
  if (name == "mock" || name == "memorizing" || name == "memorizing-mock") {
    return std::make_unique<MemorizingClassifier>(noise_rate, seed);
  }
  if (name == "perceptron" || name == "averaged-perceptron") {
    return std::make_unique<PerceptronTagger>();
  }
  throw Error(ErrorCode::kInvalidArgument,
              "unknown classifier '" + std::string(name) + "' (expected mock or perceptron)");
}

}  // namespace bioevents::tagger
