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

// Data model for biographies annotated with the target-entity / event scheme:
// single-token events, target-entity mention spans, LINK relations from
// light/copular verbs to their predicative event, and contextual-modality
// (CONT_MOD) relations that mark an event as non-factual.

#ifndef BIOEVENTS_CORE_TYPES_H_
#define BIOEVENTS_CORE_TYPES_H_

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace bioevents {

struct Token {
  int index = 0;
  std::string text;
  int sentence_index = 0;
  std::optional<std::string> lemma;
  std::optional<std::string> pos;

  bool operator==(const Token&) const = default;
};

// Inclusive on both ends.
struct TokenSpan {
  int start = 0;
  int end = 0;

  int length() const { return end - start + 1; }
  bool contains(int token) const { return token >= start && token <= end; }
  bool overlaps(const TokenSpan& other) const {
    return start <= other.end && other.start <= end;
  }
  auto operator<=>(const TokenSpan&) const = default;
};

enum class MentionKind { kDirect, kIndirect };

struct EntityMention {
  TokenSpan token_span;
  MentionKind kind = MentionKind::kDirect;

  bool operator==(const EntityMention&) const = default;
};

// FACTUAL is the default; the other three values are only legal on events that
// a CONT_MOD relation points at.
enum class Uncertainty { kFactual, kIntention, kNotHappened, kEpistemic };

struct EventMention {
  int token_index = 0;
  Uncertainty uncertainty = Uncertainty::kFactual;

  bool operator==(const EventMention&) const = default;
};

struct LinkRelation {
  int source_token = 0;
  int target_token = 0;

  bool operator==(const LinkRelation&) const = default;
};

struct ContModRelation {
  int source_token = 0;
  int target_token = 0;
  Uncertainty value = Uncertainty::kIntention;

  bool operator==(const ContModRelation&) const = default;
};

enum class Origin { kWestern, kTransnational };
enum class Gender { kMan, kWoman };

struct GroupLabel {
  Origin origin = Origin::kWestern;
  Gender gender = Gender::kMan;

  bool operator==(const GroupLabel&) const = default;
  auto operator<=>(const GroupLabel&) const = default;
};

// Short code used in file names and reports: WM, WW, TM, TW.
std::string group_code(const GroupLabel& group);
std::optional<GroupLabel> parse_group_code(std::string_view code);
std::vector<GroupLabel> all_groups();

struct AnnotatedDocument {
  std::string doc_id;
  std::string target_entity_name;
  std::vector<Token> tokens;
  std::vector<EntityMention> entity_mentions;
  std::vector<EventMention> events;
  std::vector<LinkRelation> links;
  std::vector<ContModRelation> cont_mods;
  std::optional<GroupLabel> group;

  bool operator==(const AnnotatedDocument&) const = default;

  int sentence_count() const;
  // Half-open token range [first, second) of each sentence, in order.
  std::vector<std::pair<int, int>> sentence_ranges() const;
  const EventMention* event_at(int token) const;
};

enum class Provenance {
  kWikiBio,
  kGum,
  kOntoNotes,
  kTimeBank,
  kLitBank,
  kNewsReader,
  kSynthetic,
};

struct Corpus {
  std::string name;
  std::vector<AnnotatedDocument> documents;
  Provenance provenance = Provenance::kSynthetic;

  bool operator==(const Corpus&) const = default;
};

std::string_view to_string(MentionKind kind);
std::string_view to_string(Uncertainty value);
std::string_view to_string(Origin origin);
std::string_view to_string(Gender gender);
std::string_view to_string(Provenance provenance);

// Parse the uppercase names used on disk. Throw Error(kParse) on unknown input.
MentionKind parse_mention_kind(std::string_view text);
Uncertainty parse_uncertainty(std::string_view text);
Origin parse_origin(std::string_view text);
Gender parse_gender(std::string_view text);
Provenance parse_provenance(std::string_view text);

}  // namespace bioevents

#endif  // BIOEVENTS_CORE_TYPES_H_
