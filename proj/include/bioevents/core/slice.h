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

#ifndef BIOEVENTS_CORE_SLICE_H_
#define BIOEVENTS_CORE_SLICE_H_

#include <string>
#include <vector>

#include "bioevents/core/types.h"

namespace bioevents {

// Address of one sentence inside a corpus.
struct SentenceRef {
  std::size_t document = 0;
  int sentence = 0;  // ordinal within the document, not sentence_index

  auto operator<=>(const SentenceRef&) const = default;
};

std::string sentence_id(const AnnotatedDocument& doc, int sentence);

// One sentence as a standalone document with id "<doc_id>#s<ordinal>".
// Tokens are re-indexed from 0; annotations are kept only when every endpoint
// falls inside the sentence.
AnnotatedDocument extract_sentence(const AnnotatedDocument& doc, int sentence);

// Restriction of a document to a sorted subset of its sentence ordinals;
// tokens re-indexed, sentence indices renumbered densely.
AnnotatedDocument restrict_to_sentences(const AnnotatedDocument& doc,
                                        const std::vector<int>& sentences);

std::vector<SentenceRef> all_sentences(const Corpus& corpus);
std::vector<SentenceRef> event_bearing_sentences(const Corpus& corpus);

// Same tokens, every annotation layer cleared.
AnnotatedDocument strip_annotations(const AnnotatedDocument& doc);

}  // namespace bioevents

#endif  // BIOEVENTS_CORE_SLICE_H_
