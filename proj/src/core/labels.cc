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

#include "bioevents/core/labels.h"

#include "bioevents/core/error.h"

namespace bioevents {

std::string_view to_string(Layer layer) {
  switch (layer) {
    case Layer::kEntity: return "ENTITY";
    case Layer::kEvent: return "EVENT";
    case Layer::kLink: return "LINK";
    case Layer::kContMod: return "CONT_MOD";
  }
  return "EVENT";
}

Layer parse_layer(std::string_view text) {
  if (text == "ENTITY" || text == "entity") return Layer::kEntity;
  if (text == "EVENT" || text == "event") return Layer::kEvent;
  if (text == "LINK" || text == "link") return Layer::kLink;
  if (text == "CONT_MOD" || text == "cont_mod") return Layer::kContMod;
  throw Error(ErrorCode::kInvalidArgument, "unknown layer '" + std::string(text) + "'");
}

namespace {

void mark_participation(LabelSequence& labels, int token, bool source) {
  if (token < 0 || token >= static_cast<int>(labels.size())) return;
  std::string& label = labels[token];
  std::string_view mine = source ? kRelationSource : kRelationTarget;
  if (label == kOutside) {
    label = mine;
  } else if (label != mine) {
    label = kRelationBoth;
  }
}

}  // namespace

LabelSequence to_token_labels(const AnnotatedDocument& doc, Layer layer) {
  const int n = static_cast<int>(doc.tokens.size());
  LabelSequence labels(n, std::string(kOutside));
  switch (layer) {
    case Layer::kEntity:
      for (const auto& mention : doc.entity_mentions) {
        for (int t = mention.token_span.start; t <= mention.token_span.end; ++t) {
          if (t < 0 || t >= n) continue;
          labels[t] = t == mention.token_span.start ? kBeginEntity : kInsideEntity;
        }
      }
      break;
    case Layer::kEvent:
      for (const auto& event : doc.events) {
        if (event.token_index >= 0 && event.token_index < n) {
          labels[event.token_index] = kEventLabel;
        }
      }
      break;
    case Layer::kLink:
      for (const auto& link : doc.links) {
        mark_participation(labels, link.source_token, true);
        mark_participation(labels, link.target_token, false);
      }
      break;
    case Layer::kContMod:
      for (const auto& cm : doc.cont_mods) {
        mark_participation(labels, cm.source_token, true);
        mark_participation(labels, cm.target_token, false);
      }
      break;
  }
  return labels;
}

std::vector<EventMention> events_from_labels(std::span<const std::string> labels,
                                             int offset) {
  std::vector<EventMention> events;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == kEventLabel) {
      events.push_back({offset + static_cast<int>(i), Uncertainty::kFactual});
    }
  }
  return events;
}

std::vector<EntityMention> mentions_from_labels(std::span<const std::string> labels,
                                                int offset) {
  std::vector<EntityMention> mentions;
  bool open = false;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    int t = offset + static_cast<int>(i);
    if (labels[i] == kBeginEntity || (labels[i] == kInsideEntity && !open)) {
      mentions.push_back({{t, t}, MentionKind::kDirect});
      open = true;
    } else if (labels[i] == kInsideEntity) {
      mentions.back().token_span.end = t;
    } else {
      open = false;
    }
  }
  return mentions;
}

bool is_positive(std::string_view label) { return label != kOutside; }

}  // namespace bioevents
