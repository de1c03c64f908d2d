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

#include "bioevents/tagger/presets.h"

#include <algorithm>

#include "bioevents/adapters/adapters.h"
#include "bioevents/core/error.h"
#include "bioevents/core/slice.h"

namespace bioevents::tagger {

namespace {

using adapters::SampleUnit;
using adapters::TrainingSetSpec;

std::vector<Preset> make_presets() {
  std::vector<Preset> p;
  auto entity = [&](std::string row, std::vector<std::string> sources, bool wiki,
                    std::array<double, 3> reported) {
    p.push_back({"table4:" + row, Task::kEntity, 30, std::move(sources), wiki, reported});
  };
  entity("gum", {"gum"}, false, {0.820, 0.728, 0.752});
  entity("gum+wikibio", {"gum"}, true, {0.819, 0.728, 0.753});
  entity("onto", {"ontonotes"}, false, {0.896, 0.782, 0.808});
  entity("onto+wikibio", {"ontonotes"}, true, {0.846, 0.774, 0.800});
  entity("misc", {"gum", "ontonotes"}, false, {0.824, 0.766, 0.792});
  entity("misc+wikibio", {"gum", "ontonotes"}, true, {0.828, 0.764, 0.789});

  auto event = [&](std::string row, std::vector<std::string> sources, bool wiki, int epochs,
                   std::array<double, 3> reported) {
    std::string name = "table5:" + row + (epochs == 15 ? "@15" : "");
    p.push_back({name, Task::kEvent, epochs, std::move(sources), wiki, reported});
  };
  event("wikibio", {}, true, 5, {0.479, 0.479, 0.479});
  event("litbank", {"litbank"}, false, 5, {0.847, 0.640, 0.622});
  event("litbank+wikibio", {"litbank"}, true, 5, {0.835, 0.814, 0.813});
  event("misc_01", {"misc_01"}, false, 5, {0.885, 0.863, 0.801});
  event("misc_01+wikibio", {"misc_01"}, true, 5, {0.871, 0.831, 0.827});
  event("misc_02", {"misc_02"}, false, 5, {0.866, 0.816, 0.819});
  event("misc_02+wikibio", {"misc_02"}, true, 5, {0.861, 0.837, 0.832});
  event("misc_03", {"misc_03"}, false, 5, {0.850, 0.811, 0.817});
  event("misc_03+wikibio", {"misc_03"}, true, 5, {0.844, 0.839, 0.831});
  event("onto", {"ontonotes"}, false, 5, {0.950, 0.800, 0.790});
  event("onto+wikibio", {"ontonotes"}, true, 5, {0.936, 0.873, 0.809});
  event("onto_mod", {"ontonotes_mod"}, false, 5, {0.997, 0.823, 0.814});
  event("onto_mod+wikibio", {"ontonotes_mod"}, true, 5, {0.888, 0.869, 0.829});
  event("timebank", {"timebank"}, false, 5, {0.890, 0.801, 0.790});
  event("timebank+wikibio", {"timebank"}, true, 5, {0.865, 0.856, 0.821});
  event("newsreader", {"newsreader"}, false, 5, {0.453, 0.479, 0.479});
  event("newsreader+wikibio", {"newsreader"}, true, 5, {0.467, 0.479, 0.479});
  event("misc_01+wikibio", {"misc_01"}, true, 15, {0.890, 0.852, 0.853});
  event("misc_02+wikibio", {"misc_02"}, true, 15, {0.900, 0.855, 0.856});
  event("misc_03+wikibio", {"misc_03"}, true, 15, {0.896, 0.859, 0.855});
  event("timebank+wikibio", {"timebank"}, true, 15, {0.919, 0.850, 0.859});
  return p;
}

const Corpus& require(const std::map<std::string, Corpus>& corpora, const std::string& name) {
  auto it = corpora.find(name);
  if (it == corpora.end()) {
    throw Error(ErrorCode::kInsufficientData, "preset needs corpus '" + name + "', not supplied");
  }
  return it->second;
}

std::size_t sentence_count(const Corpus& c) { return all_sentences(c).size(); }

}  // namespace

const std::vector<Preset>& all_presets() {
  static const std::vector<Preset> presets = make_presets();
  return presets;
}

const Preset& find_preset(const std::string& name) {
  for (const auto& p : all_presets()) {
    if (p.name == name) return p;
  }
  std::string known;
  for (const auto& p : all_presets()) known += (known.empty() ? "" : ", ") + p.name;
  throw Error(ErrorCode::kNotFound, "unknown preset '" + name + "'; known: " + known);
}

PresetData prepare_preset(const Preset& preset, const std::map<std::string, Corpus>& corpora,
                          std::uint64_t seed) {
  const Corpus& wikibio = require(corpora, "wikibio");
  PresetData data;
  const SplitSpec split =
      preset.task == Task::kEntity ? entity_split_preset() : event_split_preset();
  data.wikibio = build_splits(wikibio, split, seed);

  // The WikiBio training split joins under the "wikibio" name.
  std::vector<Corpus> pool;
  if (preset.with_wikibio) {
    Corpus w = data.wikibio.train;
    w.name = "wikibio";
    pool.push_back(std::move(w));
  }
  const std::size_t wiki_units = preset.with_wikibio ? data.wikibio.train.documents.size() : 0;

  // Pool entries take the component names used by the recipes.
  auto add_to_pool = [&](const std::string& component, const std::string& source) {
    Corpus copy = require(corpora, source);
    copy.name = component;
    pool.push_back(std::move(copy));
  };

  TrainingSetSpec spec;
  const bool mixed = preset.task == Task::kEvent && !preset.sources.empty() &&
                     preset.sources.front().starts_with("misc_0");
  if (mixed) {
    const int variant = preset.sources.front().back() - '0';
    spec = adapters::misc_spec(variant, adapters::kEventTrainingCap, wiki_units);
    for (const auto& c : spec.components) {
      if (c.corpus == "wikibio") continue;
      // Mixed event sets use the light-verb-rewritten OntoNotes when supplied.
      const bool rewritten = c.corpus == "ontonotes" && corpora.contains("ontonotes_mod");
      add_to_pool(c.corpus, rewritten ? "ontonotes_mod" : c.corpus);
    }
  } else if (preset.task == Task::kEntity) {
    spec.cap = adapters::kEntityTrainingDocuments;
    spec.unit = SampleUnit::kDocuments;
    auto counts = adapters::equal_split(spec.cap - wiki_units, preset.sources);
    for (std::size_t i = 0; i < preset.sources.size(); ++i) {
      spec.components.push_back({preset.sources[i], counts[i]});
      add_to_pool(preset.sources[i], preset.sources[i]);
    }
  } else {
    spec.cap = adapters::kEventTrainingCap;
    spec.unit = SampleUnit::kSentences;
    auto counts = adapters::equal_split(spec.cap - wiki_units, preset.sources);
    for (std::size_t i = 0; i < preset.sources.size(); ++i) {
      const std::size_t available = sentence_count(require(corpora, preset.sources[i]));
      spec.components.push_back({preset.sources[i], std::min(counts[i], available)});
      add_to_pool(preset.sources[i], preset.sources[i]);
    }
  }
  if (preset.with_wikibio && !mixed) spec.components.push_back({"wikibio", wiki_units});
  spec.name = preset.name;
  data.training = adapters::compose_training_set(spec, pool, seed);
  return data;
}

}  // namespace bioevents::tagger
