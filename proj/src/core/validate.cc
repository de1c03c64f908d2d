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

#include "bioevents/core/validate.h"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace bioevents {

std::string ValidationReport::summary() const {
  std::ostringstream out;
  out << doc_id << ": " << violations.size() << " violation(s)";
  for (const auto& v : violations) {
    out << "\n  - " << v.message;
    if (!v.tokens.empty()) {
      out << " [tokens";
      for (int t : v.tokens) out << ' ' << t;
      out << ']';
    }
  }
  return out.str();
}

ValidationReport validate_document(const AnnotatedDocument& doc,
                                   const ValidationOptions& options) {
  ValidationReport report;
  report.doc_id = doc.doc_id;
  auto add = [&](std::string message, std::vector<int> tokens) {
    report.violations.push_back({std::move(message), std::move(tokens)});
  };

  const int n = static_cast<int>(doc.tokens.size());
  auto in_range = [n](int t) { return t >= 0 && t < n; };

  for (int i = 0; i < n; ++i) {
    const Token& token = doc.tokens[i];
    if (token.index != i) {
      add("token index not dense: expected " + std::to_string(i) + ", found " +
              std::to_string(token.index),
          {i});
    }
    if (token.sentence_index < 0) {
      add("negative sentence index", {i});
    } else if (i > 0 && token.sentence_index < doc.tokens[i - 1].sentence_index) {
      add("sentence index decreases", {i - 1, i});
    }
  }

  std::vector<const EntityMention*> valid_mentions;
  for (const auto& mention : doc.entity_mentions) {
    const TokenSpan& span = mention.token_span;
    if (span.start > span.end) {
      add("mention span start after end", {span.start, span.end});
      continue;
    }
    if (!in_range(span.start) || !in_range(span.end)) {
      add("mention span outside document", {span.start, span.end});
      continue;
    }
    if (doc.tokens[span.start].sentence_index != doc.tokens[span.end].sentence_index) {
      add("mention span crosses a sentence boundary", {span.start, span.end});
    }
    valid_mentions.push_back(&mention);
  }
  std::sort(valid_mentions.begin(), valid_mentions.end(),
            [](const EntityMention* a, const EntityMention* b) {
              return a->token_span < b->token_span;
            });
  for (std::size_t i = 1; i < valid_mentions.size(); ++i) {
    const TokenSpan& a = valid_mentions[i - 1]->token_span;
    const TokenSpan& b = valid_mentions[i]->token_span;
    if (a.overlaps(b)) add("overlapping mention spans", {a.start, a.end, b.start, b.end});
  }

  std::map<int, Uncertainty> event_uncertainty;
  for (const auto& event : doc.events) {
    if (!in_range(event.token_index)) {
      add("event token outside document", {event.token_index});
      continue;
    }
    if (!event_uncertainty.emplace(event.token_index, event.uncertainty).second) {
      add("duplicate event on token", {event.token_index});
    }
  }

  for (const auto& link : doc.links) {
    if (!in_range(link.source_token) || !in_range(link.target_token)) {
      add("LINK endpoint outside document (source " +
              std::to_string(link.source_token) + ", target " +
              std::to_string(link.target_token) + ")",
          {link.source_token, link.target_token});
      continue;
    }
    if (event_uncertainty.count(link.source_token)) {
      add("LINK source tagged as event", {link.source_token});
    }
    if (!event_uncertainty.count(link.target_token)) {
      add("LINK target is not an event", {link.target_token});
    }
    if (options.lexicon != nullptr &&
        !options.lexicon->contains(doc.tokens[link.source_token].text)) {
      add("LINK source '" + doc.tokens[link.source_token].text +
              "' not in light/copular lexicon",
          {link.source_token});
    }
  }

  // Events may carry stacked modality ("decided to quit, but was stopped"):
  // a CONT_MOD whose value differs from its target's uncertainty is accepted
  // only when another CONT_MOD on the same target does match it.
  std::map<int, std::set<Uncertainty>> modality_values;
  for (const auto& cm : doc.cont_mods) {
    if (in_range(cm.source_token) && in_range(cm.target_token)) {
      modality_values[cm.target_token].insert(cm.value);
    }
  }
  for (const auto& cm : doc.cont_mods) {
    if (!in_range(cm.source_token) || !in_range(cm.target_token)) {
      add("CONT_MOD endpoint outside document (source " +
              std::to_string(cm.source_token) + ", target " +
              std::to_string(cm.target_token) + ")",
          {cm.source_token, cm.target_token});
      continue;
    }
    if (cm.value == Uncertainty::kFactual) {
      add("CONT_MOD value FACTUAL is not a modality value", {cm.target_token});
    }
    auto it = event_uncertainty.find(cm.target_token);
    if (it == event_uncertainty.end()) {
      add("CONT_MOD target is not an event", {cm.target_token});
      continue;
    }
    if (it->second != cm.value &&
        !modality_values[cm.target_token].count(it->second)) {
      add("CONT_MOD value " + std::string(to_string(cm.value)) +
              " does not match event uncertainty " +
              std::string(to_string(it->second)),
          {cm.source_token, cm.target_token});
    }
  }
  for (const auto& [token, uncertainty] : event_uncertainty) {
    if (uncertainty != Uncertainty::kFactual && !modality_values.count(token)) {
      add("non-factual event without a CONT_MOD relation", {token});
    }
  }
  return report;
}

std::vector<ValidationReport> validate_corpus(const Corpus& corpus,
                                              const ValidationOptions& options) {
  std::vector<ValidationReport> reports;
  std::set<std::string> seen;
  ValidationReport ids;
  ids.doc_id = corpus.name;
  for (const auto& doc : corpus.documents) {
    if (!seen.insert(doc.doc_id).second) {
      ids.violations.push_back({"duplicate doc_id '" + doc.doc_id + "'", {}});
    }
    auto report = validate_document(doc, options);
    if (!report.ok()) reports.push_back(std::move(report));
  }
  if (!ids.ok()) reports.push_back(std::move(ids));
  return reports;
}

}  // namespace bioevents
