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
#include <limits>

#include "bioevents/adapters/adapters.h"
#include "bioevents/core/error.h"
#include "bioevents/core/io.h"
#include "bioevents/core/text.h"

namespace bioevents::adapters {

namespace {

bool is_person_chain(const CorefChain& chain, const SourceDocument& doc) {
  if (chain.type) return *chain.type == "person";
  // Untyped chains (OntoNotes) count as PERSON when one of their mentions is,
  // or ends with, a PERSON named entity ("the novelist Ken Saro-Wiwa").
  for (const auto& m : chain.mentions) {
    for (const auto& ne : doc.named_entities) {
      if (ne.type != "PERSON") continue;
      if (ne.span == m || (ne.span.end == m.end && ne.span.start >= m.start)) return true;
    }
  }
  return false;
}

AnnotatedDocument base_projection(const SourceDocument& doc) {
  AnnotatedDocument out;
  out.doc_id = doc.doc_id;
  out.tokens = doc.tokens;
  std::vector<int> events = doc.event_tokens;
  std::sort(events.begin(), events.end());
  events.erase(std::unique(events.begin(), events.end()), events.end());
  for (int t : events) out.events.push_back({t, Uncertainty::kFactual});
  return out;
}

std::string mention_text(const SourceDocument& doc, const TokenSpan& span) {
  std::string s;
  for (int t = span.start; t <= span.end && t < static_cast<int>(doc.tokens.size()); ++t) {
    if (!s.empty()) s += ' ';
    s += doc.tokens[t].text;
  }
  return s;
}

}  // namespace

AnnotatedDocument events_only(const SourceDocument& doc) { return base_projection(doc); }

AnnotatedDocument harmonize_person_entities(const SourceDocument& doc) {
  const CorefChain* best = nullptr;
  int best_first = std::numeric_limits<int>::max();
  for (const auto& chain : doc.chains) {
    if (chain.mentions.empty() || !is_person_chain(chain, doc)) continue;
    int first = chain.mentions.front().start;
    for (const auto& m : chain.mentions) first = std::min(first, m.start);
    if (best == nullptr || chain.mentions.size() > best->mentions.size() ||
        (chain.mentions.size() == best->mentions.size() && first < best_first)) {
      best = &chain;
      best_first = first;
    }
  }
  if (best == nullptr) {
    throw Error(ErrorCode::kNoPersonEntity, "document '" + doc.doc_id + "' has no PERSON chain");
  }

  AnnotatedDocument out = base_projection(doc);
  std::vector<TokenSpan> spans = best->mentions;
  std::sort(spans.begin(), spans.end(), [](const TokenSpan& a, const TokenSpan& b) {
    return a.start != b.start ? a.start < b.start : a.end > b.end;
  });
  const int n = static_cast<int>(doc.tokens.size());
  for (const auto& span : spans) {
    if (span.start < 0 || span.end >= n || span.start > span.end) continue;
    if (doc.tokens[span.start].sentence_index != doc.tokens[span.end].sentence_index) continue;
    if (!out.entity_mentions.empty() && out.entity_mentions.back().token_span.overlaps(span)) {
      continue;
    }
    out.entity_mentions.push_back({span, MentionKind::kDirect});
  }

  // The longest PERSON-typed mention stands in for the target's name.
  for (const auto& m : best->mentions) {
    for (const auto& ne : doc.named_entities) {
      if (ne.type == "PERSON" && m.contains(ne.span.start) && m.contains(ne.span.end)) {
        std::string name = mention_text(doc, ne.span);
        if (name.size() > out.target_entity_name.size()) out.target_entity_name = name;
      }
    }
  }
  if (out.target_entity_name.empty()) {
    out.target_entity_name = mention_text(doc, best->mentions.front());
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

bool pos_is(const Token& t, std::string_view prefix) {
  return t.pos && t.pos->starts_with(prefix);
}

}  // namespace

std::optional<int> HeuristicComplementResolver::resolve(const AnnotatedDocument& doc,
                                                        int verb) const {
  const int n = static_cast<int>(doc.tokens.size());
  if (verb < 0 || verb >= n) return std::nullopt;
  const int sentence = doc.tokens[verb].sentence_index;
  std::optional<int> last_adjective;
  std::optional<int> noun_head;
  for (int t = verb + 1; t < n && t <= verb + window_; ++t) {
    const Token& tok = doc.tokens[t];
    if (tok.sentence_index != sentence || !tok.pos) break;
    if (pos_is(tok, "NN")) {
      noun_head = t;
      continue;
    }
    if (noun_head) break;  // end of the first noun run
    if (pos_is(tok, "JJ")) {
      last_adjective = t;
      continue;
    }
    if (pos_is(tok, "DT") || pos_is(tok, "PDT") || pos_is(tok, "PRP$") ||
        pos_is(tok, "RB") || pos_is(tok, "CD") || pos_is(tok, "POS") || pos_is(tok, "HYPH")) {
      if (last_adjective && pos_is(tok, "RB")) break;
      continue;
    }
    break;
  }
  if (noun_head) return noun_head;
  return last_adjective;
}

namespace {

bool label_is(const ParseNode& node, std::string_view prefix) {
  return node.label.starts_with(prefix);
}

std::optional<int> phrase_head(const ParseNode& phrase) {
  if (label_is(phrase, "NP")) {
    if (!phrase.children.empty() && label_is(*phrase.children.front(), "NP") &&
        !phrase.children.front()->is_preterminal()) {
      return phrase_head(*phrase.children.front());
    }
    for (auto it = phrase.children.rbegin(); it != phrase.children.rend(); ++it) {
      if ((*it)->is_preterminal() && label_is(**it, "NN")) return (*it)->token;
    }
    for (auto it = phrase.children.rbegin(); it != phrase.children.rend(); ++it) {
      if ((*it)->is_preterminal() && label_is(**it, "JJ")) return (*it)->token;
    }
    for (const auto& child : phrase.children) {
      if (!child->is_preterminal() && (label_is(*child, "NP") || label_is(*child, "ADJP"))) {
        return phrase_head(*child);
      }
    }
    return std::nullopt;
  }
  if (label_is(phrase, "ADJP")) {
    for (auto it = phrase.children.rbegin(); it != phrase.children.rend(); ++it) {
      if ((*it)->is_preterminal() && label_is(**it, "JJ")) return (*it)->token;
    }
    for (const auto& child : phrase.children) {
      if (!child->is_preterminal() && label_is(*child, "ADJP")) return phrase_head(*child);
    }
  }
  return std::nullopt;
}

const ParseNode* find_leaf(const ParseNode& node, int token) {
  if (node.is_preterminal()) return node.token == token ? &node : nullptr;
  for (const auto& child : node.children) {
    if (const ParseNode* hit = find_leaf(*child, token)) return hit;
  }
  return nullptr;
}

}  // namespace

TreeComplementResolver::TreeComplementResolver(const SourceDocument& source)
    : trees_(build_parse_trees(source)) {}

std::optional<int> TreeComplementResolver::resolve(const AnnotatedDocument& doc, int verb) const {
  if (verb < 0 || verb >= static_cast<int>(doc.tokens.size())) return std::nullopt;
  auto ranges = doc.sentence_ranges();
  for (std::size_t s = 0; s < ranges.size() && s < trees_.size(); ++s) {
    if (verb < ranges[s].first || verb >= ranges[s].second) continue;
    if (!trees_[s]) return std::nullopt;
    const ParseNode* leaf = find_leaf(*trees_[s], verb);
    if (leaf == nullptr || leaf->parent == nullptr) return std::nullopt;
    const ParseNode* vp = leaf->parent;
    bool after = false;
    for (const auto& child : vp->children) {
      if (child.get() == leaf) {
        after = true;
        continue;
      }
      if (!after) continue;
      if (label_is(*child, "NP") || label_is(*child, "ADJP")) {
        if (child->is_preterminal()) return std::nullopt;
        return phrase_head(*child);
      }
      if (label_is(*child, "ADVP") || label_is(*child, "RB")) continue;
      return std::nullopt;
    }
    return std::nullopt;
  }
  return std::nullopt;
}

AnnotatedDocument rewrite_light_verbs(const AnnotatedDocument& doc,
                                      const LightVerbLexicon& lexicon,
                                      const ComplementResolver& resolver,
                                      std::vector<RewriteLogEntry>* log) {
  AnnotatedDocument out = doc;
  auto note = [&](int verb, std::string reason) {
    if (log != nullptr) {
      log->push_back({doc.doc_id, verb, doc.tokens[verb].text, std::move(reason)});
    }
  };
  for (auto& event : out.events) {
    const int verb = event.token_index;
    if (verb < 0 || verb >= static_cast<int>(doc.tokens.size())) continue;
    if (!lexicon.contains(doc.tokens[verb].text)) continue;
    std::optional<int> head = resolver.resolve(doc, verb);
    if (!head || *head == verb) {
      note(verb, "no nominal or adjectival complement (" + std::string(resolver.name()) + ")");
      continue;
    }
    if (out.event_at(*head) != nullptr) {
      note(verb, "complement head already tagged as event");
      continue;
    }
    event.token_index = *head;
    out.links.push_back({verb, *head});
    for (auto& cm : out.cont_mods) {
      if (cm.target_token == verb) cm.target_token = *head;
    }
  }
  std::sort(out.events.begin(), out.events.end(),
            [](const EventMention& a, const EventMention& b) { return a.token_index < b.token_index; });
  std::sort(out.links.begin(), out.links.end(), [](const LinkRelation& a, const LinkRelation& b) {
    return a.source_token < b.source_token;
  });
  return out;
}

// ---------------------------------------------------------------------------

ConversionResult convert_corpus(const std::filesystem::path& path, const AdapterConfig& config) {
  std::vector<SourceDocument> sources;
  Provenance provenance = Provenance::kSynthetic;
  if (config.source_format == "ontonotes") {
    sources = read_ontonotes_conll(path);
    provenance = Provenance::kOntoNotes;
  } else if (config.source_format == "gum") {
    sources = read_gum_conllu(path);
    provenance = Provenance::kGum;
  } else if (config.source_format == "timeml") {
    sources = read_timeml(path);
    provenance = guess_provenance(path.filename().string());
    if (provenance == Provenance::kSynthetic) provenance = Provenance::kTimeBank;
  } else if (config.source_format == "litbank") {
    sources = read_litbank_lines(path);
    provenance = Provenance::kLitBank;
  } else {
    throw Error(ErrorCode::kInvalidArgument, "unknown source format '" + config.source_format + "'");
  }

  ConversionResult result;
  result.corpus.name = path.stem().string();
  result.corpus.provenance = provenance;
  for (const auto& src : sources) {
    if (config.light_verb_rewrite && !src.verb_only_events) {
      throw Error(ErrorCode::kInvalidArgument,
                  "light-verb rewrite needs verb-only event annotation; '" +
                      config.source_format + "' document '" + src.doc_id + "' is not");
    }
    AnnotatedDocument doc;
    try {
      doc = harmonize_person_entities(src);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kNoPersonEntity) throw;
      if (config.person_entity_filter) {
        result.excluded.push_back(src.doc_id);
        continue;
      }
      doc = events_only(src);
    }
    if (config.light_verb_rewrite) {
      if (src.parse_bits.size() == src.tokens.size() && !src.parse_bits.empty()) {
        TreeComplementResolver resolver(src);
        doc = rewrite_light_verbs(doc, config.light_verb_lexicon, resolver, &result.rewrite_log);
      } else {
        HeuristicComplementResolver resolver;
        doc = rewrite_light_verbs(doc, config.light_verb_lexicon, resolver, &result.rewrite_log);
      }
    }
    result.corpus.documents.push_back(std::move(doc));
  }
  return result;
}

void register_adapter_readers() {
  for (std::string format : {"ontonotes", "gum", "timeml", "litbank"}) {
    register_reader(format, [format](const std::filesystem::path& path, const LoadOptions&) {
      AdapterConfig config;
      config.source_format = format;
      return convert_corpus(path, config).corpus;
    });
  }
}

}  // namespace bioevents::adapters
