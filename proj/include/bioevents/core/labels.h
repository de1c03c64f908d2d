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

// Projection of span/relation annotations onto one label per token. This is
// the only bridge between the span-based data model and token classifiers.

#ifndef BIOEVENTS_CORE_LABELS_H_
#define BIOEVENTS_CORE_LABELS_H_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bioevents/core/types.h"

namespace bioevents {

inline constexpr std::string_view kOutside = "O";
inline constexpr std::string_view kBeginEntity = "B-ENT";
inline constexpr std::string_view kInsideEntity = "I-ENT";
inline constexpr std::string_view kEventLabel = "EVENT";
inline constexpr std::string_view kRelationSource = "SRC";
inline constexpr std::string_view kRelationTarget = "TGT";
inline constexpr std::string_view kRelationBoth = "SRC+TGT";

enum class Layer { kEntity, kEvent, kLink, kContMod };

std::string_view to_string(Layer layer);
Layer parse_layer(std::string_view text);

using LabelSequence = std::vector<std::string>;

// ENTITY -> {B-ENT, I-ENT, O}; EVENT -> {EVENT, O};
// LINK / CONT_MOD -> per-token participation {SRC, TGT, SRC+TGT, O}.
LabelSequence to_token_labels(const AnnotatedDocument& doc, Layer layer);

// Inverse projections. Events come back FACTUAL; mentions come back DIRECT.
// A stray I-ENT with no preceding entity label opens a new mention.
std::vector<EventMention> events_from_labels(std::span<const std::string> labels,
                                             int offset = 0);
std::vector<EntityMention> mentions_from_labels(std::span<const std::string> labels,
                                                int offset = 0);

bool is_positive(std::string_view label);

}  // namespace bioevents

#endif  // BIOEVENTS_CORE_LABELS_H_
