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

// Deterministic text utilities shared by the readers and the large-scale
// pipeline: a rule-based tokenizer, a sentence splitter, and a small English
// lemmatizer. Group statistics depend on sentence counts, so the splitter rules
// are frozen and carry a version string that every run report records.

#ifndef BIOEVENTS_CORE_TEXT_H_
#define BIOEVENTS_CORE_TEXT_H_

#include <string>
#include <string_view>
#include <vector>

#include "bioevents/core/types.h"

namespace bioevents::text {

inline constexpr std::string_view kSplitterVersion = "rules-1.0";

std::string to_lower(std::string_view s);
std::string trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);

// Splits on whitespace, then peels leading/trailing punctuation, possessive
// clitics ('s, n't) and sentence-final periods off each chunk.
std::vector<std::string> tokenize(std::string_view text);

// Groups tokens into sentences. A sentence ends at '.', '!' or '?' (optionally
// followed by closing quotes/brackets) unless the period belongs to a known
// abbreviation or an initial, or the next token starts lowercase.
std::vector<std::vector<std::string>> split_sentences(
    const std::vector<std::string>& tokens);

// Heuristic English lemmatizer: irregular-verb table, then suffix rules for
// -ies/-ied/-ing/-ed/-s. Input is lowercased first.
std::string lemmatize(std::string_view word);

// Tokenize + split + lemmatize into an unannotated document.
AnnotatedDocument document_from_text(std::string doc_id,
                                     std::string target_entity_name,
                                     std::string_view text);

// Tokens joined with single spaces; sentences separated by newlines.
std::string detokenize(const AnnotatedDocument& doc);

}  // namespace bioevents::text

#endif  // BIOEVENTS_CORE_TEXT_H_
