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

#include "bioevents/core/slice.h"

#include <set>

namespace bioevents {

std::string sentence_id(const AnnotatedDocument& doc, int sentence) {
  return doc.doc_id + "#s" + std::to_string(sentence);
}

AnnotatedDocument restrict_to_sentences(const AnnotatedDocument& doc,
                                        const std::vector<int>& sentences) {
  AnnotatedDocument out;
  out.doc_id = doc.doc_id;
  out.target_entity_name = doc.target_entity_name;
  out.group = doc.group;

  auto ranges = doc.sentence_ranges();
  std::vector<int> remap(doc.tokens.size(), -1);
  int renumbered = 0;
  for (int s : sentences) {
    if (s < 0 || s >= static_cast<int>(ranges.size())) continue;
    for (int t = ranges[s].first; t < ranges[s].second; ++t) {
      Token token = doc.tokens[t];
      remap[t] = static_cast<int>(out.tokens.size());
      token.index = remap[t];
      token.sentence_index = renumbered;
      out.tokens.push_back(std::move(token));
    }
    ++renumbered;
  }
  auto mapped = [&](int t) {
    return t >= 0 && t < static_cast<int>(remap.size()) ? remap[t] : -1;
  };

  for (const auto& m : doc.entity_mentions) {
    int s = mapped(m.token_span.start);
    int e = mapped(m.token_span.end);
    if (s >= 0 && e >= 0) out.entity_mentions.push_back({{s, e}, m.kind});
  }
  for (const auto& ev : doc.events) {
    int t = mapped(ev.token_index);
    if (t >= 0) out.events.push_back({t, ev.uncertainty});
  }
  for (const auto& link : doc.links) {
    int s = mapped(link.source_token);
    int t = mapped(link.target_token);
    if (s >= 0 && t >= 0) out.links.push_back({s, t});
  }
  for (const auto& cm : doc.cont_mods) {
    int s = mapped(cm.source_token);
    int t = mapped(cm.target_token);
    if (s >= 0 && t >= 0) out.cont_mods.push_back({s, t, cm.value});
  }
  return out;
}

AnnotatedDocument extract_sentence(const AnnotatedDocument& doc, int sentence) {
  AnnotatedDocument out = restrict_to_sentences(doc, {sentence});
  out.doc_id = sentence_id(doc, sentence);
  return out;
}

std::vector<SentenceRef> all_sentences(const Corpus& corpus) {
  std::vector<SentenceRef> refs;
  for (std::size_t d = 0; d < corpus.documents.size(); ++d) {
    int count = corpus.documents[d].sentence_count();
    for (int s = 0; s < count; ++s) refs.push_back({d, s});
  }
  return refs;
}

std::vector<SentenceRef> event_bearing_sentences(const Corpus& corpus) {
  std::vector<SentenceRef> refs;
  for (std::size_t d = 0; d < corpus.documents.size(); ++d) {
    const auto& doc = corpus.documents[d];
    auto ranges = doc.sentence_ranges();
    std::set<int> with_events;
    for (const auto& ev : doc.events) {
      for (int s = 0; s < static_cast<int>(ranges.size()); ++s) {
        if (ev.token_index >= ranges[s].first && ev.token_index < ranges[s].second) {
          with_events.insert(s);
          break;
        }
      }
    }
    for (int s : with_events) refs.push_back({d, s});
  }
  return refs;
}

AnnotatedDocument strip_annotations(const AnnotatedDocument& doc) {
  AnnotatedDocument out;
  out.doc_id = doc.doc_id;
  out.target_entity_name = doc.target_entity_name;
  out.tokens = doc.tokens;
  out.group = doc.group;
  return out;
}

}  // namespace bioevents
