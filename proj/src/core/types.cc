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

#include "bioevents/core/types.h"

#include <array>

#include "bioevents/core/error.h"

namespace bioevents {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "INVALID_ARGUMENT";
    case ErrorCode::kParse: return "PARSE_ERROR";
    case ErrorCode::kValidation: return "VALIDATION_ERROR";
    case ErrorCode::kIo: return "IO_ERROR";
    case ErrorCode::kUndefined: return "UNDEFINED";
    case ErrorCode::kNotNormalized: return "NOT_NORMALIZED";
    case ErrorCode::kInsufficientData: return "INSUFFICIENT_DATA";
    case ErrorCode::kNoPersonEntity: return "NO_PERSON_ENTITY";
    case ErrorCode::kLengthMismatch: return "LENGTH_MISMATCH";
    case ErrorCode::kTokenizationMismatch: return "TOKENIZATION_MISMATCH";
    case ErrorCode::kRebuildRequired: return "REBUILD_REQUIRED";
    case ErrorCode::kMissingField: return "MISSING_FIELD";
    case ErrorCode::kNotFound: return "NOT_FOUND";
    case ErrorCode::kNetwork: return "NETWORK_ERROR";
    case ErrorCode::kSchemaChange: return "SCHEMA_CHANGE";
    case ErrorCode::kEmptyGroup: return "EMPTY_GROUP";
    case ErrorCode::kEmptySupport: return "EMPTY_SUPPORT";
    case ErrorCode::kClassifier: return "CLASSIFIER_ERROR";
  }
  return "UNKNOWN";
}

int AnnotatedDocument::sentence_count() const {
  return static_cast<int>(sentence_ranges().size());
}

std::vector<std::pair<int, int>> AnnotatedDocument::sentence_ranges() const {
  std::vector<std::pair<int, int>> ranges;
  int n = static_cast<int>(tokens.size());
  int begin = 0;
  for (int i = 1; i <= n; ++i) {
    if (i == n || tokens[i].sentence_index != tokens[begin].sentence_index) {
      ranges.emplace_back(begin, i);
      begin = i;
    }
  }
  return ranges;
}

const EventMention* AnnotatedDocument::event_at(int token) const {
  for (const auto& event : events) {
    if (event.token_index == token) return &event;
  }
  return nullptr;
}

std::string group_code(const GroupLabel& group) {
  std::string code;
  code += group.origin == Origin::kWestern ? 'W' : 'T';
  code += group.gender == Gender::kMan ? 'M' : 'W';
  return code;
}

std::optional<GroupLabel> parse_group_code(std::string_view code) {
  if (code.size() != 2) return std::nullopt;
  GroupLabel group;
  if (code[0] == 'W') {
    group.origin = Origin::kWestern;
  } else if (code[0] == 'T') {
    group.origin = Origin::kTransnational;
  } else {
    return std::nullopt;
  }
  if (code[1] == 'M') {
    group.gender = Gender::kMan;
  } else if (code[1] == 'W') {
    group.gender = Gender::kWoman;
  } else {
    return std::nullopt;
  }
  return group;
}

std::vector<GroupLabel> all_groups() {
  return {{Origin::kWestern, Gender::kMan},
          {Origin::kWestern, Gender::kWoman},
          {Origin::kTransnational, Gender::kMan},
          {Origin::kTransnational, Gender::kWoman}};
}

std::string_view to_string(MentionKind kind) {
  return kind == MentionKind::kDirect ? "DIRECT" : "INDIRECT";
}

std::string_view to_string(Uncertainty value) {
  switch (value) {
    case Uncertainty::kFactual: return "FACTUAL";
    case Uncertainty::kIntention: return "INTENTION";
    case Uncertainty::kNotHappened: return "NOT_HAPPENED";
    case Uncertainty::kEpistemic: return "EPISTEMIC";
  }
  return "FACTUAL";
}

std::string_view to_string(Origin origin) {
  return origin == Origin::kWestern ? "WESTERN" : "TRANSNATIONAL";
}

std::string_view to_string(Gender gender) {
  return gender == Gender::kMan ? "MAN" : "WOMAN";
}

namespace {

constexpr std::array<std::pair<Provenance, std::string_view>, 7> kProvenanceNames{{
    {Provenance::kWikiBio, "WIKIBIO"},
    {Provenance::kGum, "GUM"},
    {Provenance::kOntoNotes, "ONTONOTES"},
    {Provenance::kTimeBank, "TIMEBANK"},
    {Provenance::kLitBank, "LITBANK"},
    {Provenance::kNewsReader, "NEWSREADER"},
    {Provenance::kSynthetic, "SYNTHETIC"},
}};

[[noreturn]] void unknown(std::string_view what, std::string_view text) {
  throw Error(ErrorCode::kParse,
              "unknown " + std::string(what) + " '" + std::string(text) + "'");
}

}  // namespace

std::string_view to_string(Provenance provenance) {
  for (const auto& [value, name] : kProvenanceNames) {
    if (value == provenance) return name;
  }
  return "SYNTHETIC";
}

MentionKind parse_mention_kind(std::string_view text) {
  if (text == "DIRECT") return MentionKind::kDirect;
  if (text == "INDIRECT") return MentionKind::kIndirect;
  unknown("mention kind", text);
}

Uncertainty parse_uncertainty(std::string_view text) {
  if (text == "FACTUAL") return Uncertainty::kFactual;
  if (text == "INTENTION") return Uncertainty::kIntention;
  if (text == "NOT_HAPPENED") return Uncertainty::kNotHappened;
  if (text == "EPISTEMIC") return Uncertainty::kEpistemic;
  unknown("uncertainty", text);
}

Origin parse_origin(std::string_view text) {
  if (text == "WESTERN") return Origin::kWestern;
  if (text == "TRANSNATIONAL") return Origin::kTransnational;
  unknown("origin", text);
}

Gender parse_gender(std::string_view text) {
  if (text == "MAN") return Gender::kMan;
  if (text == "WOMAN") return Gender::kWoman;
  unknown("gender", text);
}

Provenance parse_provenance(std::string_view text) {
  for (const auto& [value, name] : kProvenanceNames) {
    if (name == text) return value;
  }
  unknown("provenance", text);
}

}  // namespace bioevents
