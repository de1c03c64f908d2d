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

// Intermediate representation shared by the external-corpus readers: what the
// source corpora annotate (named entities, coreference chains, event tokens,
// constituency trees) before it is projected onto the target-entity scheme.

#ifndef BIOEVENTS_ADAPTERS_SOURCE_H_
#define BIOEVENTS_ADAPTERS_SOURCE_H_

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bioevents/core/types.h"

namespace bioevents::adapters {

struct NamedEntity {
  TokenSpan span;
  std::string type;  // uppercase, e.g. PERSON, ORG, GPE
};

struct CorefChain {
  std::string id;
  // Set when the source types chains directly (GUM); otherwise inferred from
  // overlapping named entities.
  std::optional<std::string> type;
  std::vector<TokenSpan> mentions;
};

struct SourceDocument {
  std::string doc_id;
  std::vector<Token> tokens;
  std::vector<NamedEntity> named_entities;
  std::vector<CorefChain> chains;
  std::vector<int> event_tokens;
  // True when every event token is a verbal predicate (PropBank-style).
  bool verb_only_events = false;
  // CoNLL-2012 parse-bit column, one entry per token; empty when absent.
  std::vector<std::string> parse_bits;
};

// Bracketed-tree + coreference columns (CoNLL-2012 / OntoNotes layout).
// Events are tokens carrying a PropBank roleset in the frameset column.
std::vector<SourceDocument> read_ontonotes_conll(const std::filesystem::path& path);

// Token-per-line CoNLL-U with GUM "Entity=" bracket annotations in MISC.
std::vector<SourceDocument> read_gum_conllu(const std::filesystem::path& path);

// Inline XML markup with <EVENT> elements (TimeBank .tml and
// NewsReader-style exports). Only the <TEXT> element is read when present.
std::vector<SourceDocument> read_timeml(const std::filesystem::path& path);

// One sentence per line: space-separated tokens, a tab, and comma-separated
// 0-based event offsets within the sentence. "# doc_id = X" starts a document.
std::vector<SourceDocument> read_litbank_lines(const std::filesystem::path& path);

// Constituency tree rebuilt from CoNLL-2012 parse bits.
struct ParseNode {
  std::string label;     // function tags stripped ("NP-PRD" -> "NP")
  int token = -1;        // preterminals only: document token index
  ParseNode* parent = nullptr;
  std::vector<std::unique_ptr<ParseNode>> children;

  bool is_preterminal() const { return token >= 0; }
};

// Builds one tree per sentence; returns nullptr roots for sentences whose bits
// do not form a well-bracketed tree.
std::vector<std::unique_ptr<ParseNode>> build_parse_trees(const SourceDocument& doc);

}  // namespace bioevents::adapters

#endif  // BIOEVENTS_ADAPTERS_SOURCE_H_
