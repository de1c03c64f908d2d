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

// Named experiment configurations, one per published results row.
//
//   table4:<gum|onto|misc>[+wikibio]                   entity, 30 epochs
//   table5:<wikibio|litbank|misc_01|misc_02|misc_03|
//           onto|onto_mod|timebank|newsreader>[+wikibio]  event, 5 epochs
//   table5:<misc_01|misc_02|misc_03|timebank>+wikibio@15  event, 15 epochs
//
// Corpus names expected in the corpus map: wikibio, gum, litbank, newsreader,
// ontonotes, ontonotes_mod (light verbs rewritten), timebank.

#ifndef BIOEVENTS_TAGGER_PRESETS_H_
#define BIOEVENTS_TAGGER_PRESETS_H_

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bioevents/core/types.h"
#include "bioevents/tagger/classifier.h"
#include "bioevents/tagger/harness.h"

namespace bioevents::tagger {

struct Preset {
  std::string name;
  Task task = Task::kEvent;
  int epochs = 5;
  // External training sources; "misc_0N" expands to the mixed recipe.
  std::vector<std::string> sources;
  bool with_wikibio = false;
  // Published (train, dev, test) F-scores for the row.
  std::array<double, 3> reported{};
};

const std::vector<Preset>& all_presets();
// Throws kNotFound listing the known names.
const Preset& find_preset(const std::string& name);

struct PresetData {
  Corpus training;
  Splits wikibio;
};

// Builds the WikiBio splits and the training corpus for `preset`.
// Entity rows: 100 training documents in total, WikiBio's training split
// included when requested. Event rows: at most 5,073 sentences; "+wikibio"
// adds the 564-sentence WikiBio training split and shrinks the rest.
PresetData prepare_preset(const Preset& preset, const std::map<std::string, Corpus>& corpora,
                          std::uint64_t seed);

}  // namespace bioevents::tagger

#endif  // BIOEVENTS_TAGGER_PRESETS_H_
