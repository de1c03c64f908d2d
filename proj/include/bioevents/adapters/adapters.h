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

// Harmonization of external corpora into the target-entity scheme.

#ifndef BIOEVENTS_ADAPTERS_ADAPTERS_H_
#define BIOEVENTS_ADAPTERS_ADAPTERS_H_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bioevents/adapters/source.h"
#include "bioevents/core/lexicon.h"
#include "bioevents/core/types.h"

namespace bioevents::adapters {

// Keeps only the mentions of the PERSON chain with the most mentions; ties go
// to the chain whose first mention comes first. Nested or sentence-crossing
// mentions of that chain are dropped (the outermost one is kept). Events are
// carried over as FACTUAL single-token events.
// Throws Error(kNoPersonEntity) when the document has no PERSON chain.
AnnotatedDocument harmonize_person_entities(const SourceDocument& doc);

// Same projection without an entity layer (event-only sources).
AnnotatedDocument events_only(const SourceDocument& doc);

// Finds the head of the nominal or adjectival predicative complement of a
// light/copular verb.
class ComplementResolver {
 public:
  virtual ~ComplementResolver() = default;
  virtual std::optional<int> resolve(const AnnotatedDocument& doc, int verb) const = 0;
  virtual std::string_view name() const = 0;
};

// Right-window heuristic over Penn POS tags: skips determiners and adverbs,
// takes the last noun of the first noun run (or the last adjective when no
// noun follows), never leaves the clause, and looks at most five tokens ahead.
class HeuristicComplementResolver : public ComplementResolver {
 public:
  explicit HeuristicComplementResolver(int window = 5) : window_(window) {}
  std::optional<int> resolve(const AnnotatedDocument& doc, int verb) const override;
  std::string_view name() const override { return "heuristic-window"; }

 private:
  int window_;
};

// Uses gold constituency trees: the first NP/ADJP sibling to the right of the
// verb inside its VP, then that phrase's head noun/adjective.
class TreeComplementResolver : public ComplementResolver {
 public:
  explicit TreeComplementResolver(const SourceDocument& source);
  std::optional<int> resolve(const AnnotatedDocument& doc, int verb) const override;
  std::string_view name() const override { return "gold-tree"; }

 private:
  std::vector<std::unique_ptr<ParseNode>> trees_;
};

struct RewriteLogEntry {
  std::string doc_id;
  int verb_token = 0;
  std::string verb;
  std::string reason;
};

// Moves the event tag from light/copular verbs to their complement head and
// records a LINK(verb -> head). CONT_MOD relations pointing at the verb follow
// the event. Verbs without a resolvable complement keep their tag and are
// logged.
AnnotatedDocument rewrite_light_verbs(const AnnotatedDocument& doc,
                                      const LightVerbLexicon& lexicon,
                                      const ComplementResolver& resolver,
                                      std::vector<RewriteLogEntry>* log = nullptr);

struct AdapterConfig {
  std::string source_format;  // ontonotes | gum | timeml | litbank
  bool person_entity_filter = false;
  bool light_verb_rewrite = false;
  LightVerbLexicon light_verb_lexicon = LightVerbLexicon::Default();
  std::uint64_t rng_seed = 13;
};

struct ConversionResult {
  Corpus corpus;
  std::vector<RewriteLogEntry> rewrite_log;
  std::vector<std::string> excluded;  // doc ids dropped by the person filter
};

// Reads a user-supplied local copy and converts it. Without the person filter,
// documents lacking a PERSON chain are kept with an empty entity layer.
// Throws Error(kInvalidArgument) when light_verb_rewrite is requested for a
// source whose events are not verb-only.
ConversionResult convert_corpus(const std::filesystem::path& path, const AdapterConfig& config);

// Makes "ontonotes", "gum", "timeml" and "litbank" available to load_corpus().
void register_adapter_readers();

// ---------------------------------------------------------------------------
// Training-set composition.

inline constexpr std::size_t kEventTrainingCap = 5073;
inline constexpr std::size_t kEntityTrainingDocuments = 100;

enum class SampleUnit { kDocuments, kSentences };

struct TrainingComponent {
  std::string corpus;
  std::size_t count = 0;
};

struct TrainingSetSpec {
  std::string name;
  std::vector<TrainingComponent> components;
  std::size_t cap = kEventTrainingCap;
  SampleUnit unit = SampleUnit::kSentences;

  std::size_t total() const;
};

// Splits `total` units over `names` as evenly as possible. Remainders go to
// the lexicographically smallest names first.
std::vector<std::size_t> equal_split(std::size_t total, const std::vector<std::string>& names);

// misc_01: gum, litbank, newsreader, ontonotes, timebank
// misc_02: misc_01 without newsreader
// misc_03: litbank, ontonotes
// When `wikibio_units` > 0 a "wikibio" component of that size is appended and
// the mixed part shrinks so the total stays at `cap`.
TrainingSetSpec misc_spec(int variant, std::size_t cap = kEventTrainingCap,
                          std::size_t wikibio_units = 0,
                          SampleUnit unit = SampleUnit::kSentences);

// Samples each component without replacement with an RNG stream derived from
// (seed, corpus name). Sentence units become one-sentence documents with ids
// "<corpus>/<doc_id>#s<k>"; document units keep their ids under the same
// prefix. Throws Error(kInsufficientData) naming the corpus that cannot fill
// its quota, and Error(kInvalidArgument) when `spec` exceeds its cap.
Corpus compose_training_set(const TrainingSetSpec& spec, std::span<const Corpus> corpora,
                            std::uint64_t seed);

}  // namespace bioevents::adapters

#endif  // BIOEVENTS_ADAPTERS_ADAPTERS_H_
