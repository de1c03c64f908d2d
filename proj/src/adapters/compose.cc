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

#include <algorithm>
#include <numeric>

#include "bioevents/adapters/adapters.h"
#include "bioevents/core/error.h"
#include "bioevents/core/random.h"
#include "bioevents/core/slice.h"

namespace bioevents::adapters {

std::size_t TrainingSetSpec::total() const {
  std::size_t sum = 0;
  for (const auto& c : components) sum += c.count;
  return sum;
}

std::vector<std::size_t> equal_split(std::size_t total, const std::vector<std::string>& names) {
  std::vector<std::size_t> out(names.size(), 0);
  if (names.empty()) return out;
  const std::size_t base = total / names.size();
  std::size_t remainder = total % names.size();
  std::vector<std::size_t> order(names.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return names[a] < names[b]; });
  for (std::size_t i : order) {
    out[i] = base + (remainder > 0 ? 1 : 0);
    if (remainder > 0) --remainder;
  }
  return out;
}

TrainingSetSpec misc_spec(int variant, std::size_t cap, std::size_t wikibio_units,
                          SampleUnit unit) {
  std::vector<std::string> names;
  switch (variant) {
    case 1:
      names = {"gum", "litbank", "newsreader", "ontonotes", "timebank"};
      break;
    case 2:
      names = {"gum", "litbank", "ontonotes", "timebank"};
      break;
    case 3:
      names = {"litbank", "ontonotes"};
      break;
    default:
      throw Error(ErrorCode::kInvalidArgument,
                  "misc variant must be 1, 2 or 3, got " + std::to_string(variant));
  }
  if (wikibio_units > cap) {
    throw Error(ErrorCode::kInvalidArgument, "WikiBio slice larger than the cap");
  }
  TrainingSetSpec spec;
  spec.name = "misc_0" + std::to_string(variant) + (wikibio_units > 0 ? "+wikibio" : "");
  spec.cap = cap;
  spec.unit = unit;
  auto counts = equal_split(cap - wikibio_units, names);
  for (std::size_t i = 0; i < names.size(); ++i) spec.components.push_back({names[i], counts[i]});
  if (wikibio_units > 0) spec.components.push_back({"wikibio", wikibio_units});
  return spec;
}

Corpus compose_training_set(const TrainingSetSpec& spec, std::span<const Corpus> corpora,
                            std::uint64_t seed) {
  if (spec.total() > spec.cap) {
    throw Error(ErrorCode::kInvalidArgument,
                "training set '" + spec.name + "' requests " + std::to_string(spec.total()) +
                    " units, above its cap of " + std::to_string(spec.cap));
  }
  Corpus out;
  out.name = spec.name;
  out.provenance = Provenance::kSynthetic;

  for (const auto& component : spec.components) {
    auto it = std::find_if(corpora.begin(), corpora.end(),
                           [&](const Corpus& c) { return c.name == component.corpus; });
    if (it == corpora.end()) {
      throw Error(ErrorCode::kInsufficientData, "corpus '" + component.corpus + "' not loaded");
    }
    const Corpus& source = *it;
    DeterministicRng rng(seed, component.corpus);
    const std::string prefix = component.corpus + "/";

    if (spec.unit == SampleUnit::kDocuments) {
      if (source.documents.size() < component.count) {
        throw Error(ErrorCode::kInsufficientData,
                    "corpus '" + component.corpus + "' has " +
                        std::to_string(source.documents.size()) + " documents, " +
                        std::to_string(component.count) + " requested");
      }
      for (std::size_t i : rng.sample_indices(source.documents.size(), component.count)) {
        AnnotatedDocument doc = source.documents[i];
        doc.doc_id = prefix + doc.doc_id;
        out.documents.push_back(std::move(doc));
      }
      continue;
    }

    std::vector<SentenceRef> pool = all_sentences(source);
    if (pool.size() < component.count) {
      throw Error(ErrorCode::kInsufficientData,
                  "corpus '" + component.corpus + "' has " + std::to_string(pool.size()) +
                      " sentences, " + std::to_string(component.count) + " requested");
    }
    for (std::size_t i : rng.sample_indices(pool.size(), component.count)) {
      const auto& doc = source.documents[pool[i].document];
      AnnotatedDocument piece = extract_sentence(doc, pool[i].sentence);
      // Single-sentence sources already carry a sentence id.
      piece.doc_id = prefix + (doc.sentence_count() == 1 ? doc.doc_id : sentence_id(doc, pool[i].sentence));
      out.documents.push_back(std::move(piece));
    }
  }
  return out;
}

}  // namespace bioevents::adapters
