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

#include <numeric>
#include <set>

#include <gtest/gtest.h>

#include "bioevents/adapters/adapters.h"
#include "bioevents/adapters/source.h"
#include "bioevents/core/error.h"
#include "bioevents/core/validate.h"
#include "support.h"

namespace bioevents::adapters {
namespace {

const std::filesystem::path kFixtures = std::filesystem::path(BIOEVENTS_SOURCE_DIR) / "fixtures";

SourceDocument source(const std::vector<std::string>& words) {
  SourceDocument doc;
  doc.doc_id = "src";
  auto plain = testing::plain_document("src", words);
  doc.tokens = plain.tokens;
  return doc;
}

TEST(Readers, OntoNotesFixture) {
  auto docs = read_ontonotes_conll(kFixtures / "ontonotes");
  ASSERT_EQ(docs.size(), 2u);
  EXPECT_EQ(docs[0].doc_id, "bio/onto_01_part000");
  EXPECT_EQ(docs[0].tokens.size(), 16u);
  EXPECT_EQ(docs[0].event_tokens, (std::vector<int>{2, 8, 13}));
  ASSERT_EQ(docs[0].chains.size(), 1u);
  EXPECT_EQ(docs[0].chains[0].mentions.size(), 3u);
  EXPECT_TRUE(docs[0].verb_only_events);
  EXPECT_EQ(docs[0].tokens.back().sentence_index, 2);
  auto trees = build_parse_trees(docs[0]);
  ASSERT_EQ(trees.size(), 3u);
  for (const auto& t : trees) EXPECT_NE(t, nullptr);
}

TEST(Readers, GumFixture) {
  auto docs = read_gum_conllu(kFixtures / "gum");
  ASSERT_EQ(docs.size(), 1u);
  EXPECT_EQ(docs[0].doc_id, "GUM_bio_ada");
  EXPECT_EQ(docs[0].tokens.size(), 10u);
  ASSERT_GE(docs[0].chains.size(), 1u);
  EXPECT_EQ(docs[0].chains[0].type, "person");
  EXPECT_EQ(docs[0].chains[0].mentions.size(), 2u);
}

TEST(Readers, TimeMlFixture) {
  auto docs = read_timeml(kFixtures / "timeml");
  ASSERT_EQ(docs.size(), 1u);
  EXPECT_EQ(docs[0].doc_id, "tb_shelley");
  ASSERT_EQ(docs[0].event_tokens.size(), 3u);
  EXPECT_EQ(docs[0].tokens[docs[0].event_tokens[0]].text, "wrote");
  EXPECT_EQ(docs[0].tokens[docs[0].event_tokens[2]].text, "buried");
  EXPECT_EQ(docs[0].tokens.back().sentence_index, 1);
}

TEST(Readers, LitBankFixture) {
  auto docs = read_litbank_lines(kFixtures / "litbank");
  ASSERT_EQ(docs.size(), 1u);
  EXPECT_EQ(docs[0].event_tokens.size(), 3u);
  EXPECT_EQ(docs[0].tokens[docs[0].event_tokens[1]].text, "smiled");
  EXPECT_EQ(docs[0].tokens[docs[0].event_tokens[2]].text, "left");
}

TEST(Readers, CorruptFixtureNamesTheLine) {
  try {
    read_ontonotes_conll(kFixtures / "corrupt");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParse);
    EXPECT_NE(std::string(e.what()).find("broken.gold_conll:3"), std::string::npos) << e.what();
  }
}

TEST(Harmonize, KeepsOnlyThePersonChain) {
  auto doc = source({"Ada", "joined", "the", "Society", ".", "She", "left", "it", "."});
  doc.named_entities = {{{0, 0}, "PERSON"}, {{3, 3}, "ORG"}};
  doc.chains = {{"p", std::nullopt, {{0, 0}, {5, 5}}}, {"o", std::nullopt, {{2, 3}, {7, 7}}}};
  auto out = harmonize_person_entities(doc);
  ASSERT_EQ(out.entity_mentions.size(), 2u);
  EXPECT_EQ(out.entity_mentions[0].token_span, (TokenSpan{0, 0}));
  EXPECT_EQ(out.tokens, doc.tokens);
}

TEST(Harmonize, ThreeMentionPersonAndOrgChain) {
  auto doc = source({"Ada", "met", "Babbage", ".", "She", "wrote", ".", "Ada", "died", "."});
  doc.named_entities = {{{0, 0}, "PERSON"}, {{2, 2}, "ORG"}};
  doc.chains = {{"p", std::nullopt, {{0, 0}, {4, 4}, {7, 7}}}, {"o", std::nullopt, {{2, 2}}}};
  auto out = harmonize_person_entities(doc);
  EXPECT_EQ(out.entity_mentions.size(), 3u);
}

TEST(Harmonize, TieGoesToEarliestFirstMention) {
  auto doc = source({"Bo", "and", "Al", "met", ".", "Al", "left", ".", "Bo", "stayed", "."});
  doc.named_entities = {{{0, 0}, "PERSON"}, {{2, 2}, "PERSON"}};
  doc.chains = {{"al", std::nullopt, {{2, 2}, {5, 5}}}, {"bo", std::nullopt, {{0, 0}, {8, 8}}}};
  auto out = harmonize_person_entities(doc);
  ASSERT_EQ(out.entity_mentions.size(), 2u);
  EXPECT_EQ(out.entity_mentions[0].token_span.start, 0);
  EXPECT_EQ(out.entity_mentions[1].token_span.start, 8);
}

TEST(Harmonize, NoPersonChainSignals) {
  auto doc = source({"The", "firm", "grew", "."});
  doc.named_entities = {{{1, 1}, "ORG"}};
  doc.chains = {{"o", std::nullopt, {{0, 1}}}};
  try {
    harmonize_person_entities(doc);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNoPersonEntity);
  }
}

TEST(Harmonize, NeverAddsMentions) {
  auto corpus = read_gum_conllu(kFixtures / "gum");
  for (const auto& doc : corpus) {
    std::size_t before = 0;
    for (const auto& c : doc.chains) before += c.mentions.size();
    auto out = harmonize_person_entities(doc);
    EXPECT_LE(out.entity_mentions.size(), before);
    EXPECT_EQ(out.tokens, doc.tokens);
  }
}

AnnotatedDocument verb_events(const std::vector<std::string>& words, std::vector<int> events,
                              std::vector<std::string> pos) {
  auto doc = testing::plain_document("lv", words);
  for (std::size_t i = 0; i < pos.size(); ++i) doc.tokens[i].pos = pos[i];
  for (int e : events) doc.events.push_back({e, Uncertainty::kFactual});
  return doc;
}

TEST(LightVerbs, CopulaMovesToNominalComplement) {
  auto doc = verb_events({"He", "was", "a", "Nigerian", "writer", "."}, {1},
                         {"PRP", "VBD", "DT", "JJ", "NN", "."});
  std::vector<RewriteLogEntry> log;
  auto out = rewrite_light_verbs(doc, LightVerbLexicon::Default(), HeuristicComplementResolver(), &log);
  ASSERT_EQ(out.events.size(), 1u);
  EXPECT_EQ(out.events[0].token_index, 4);
  ASSERT_EQ(out.links.size(), 1u);
  EXPECT_EQ(out.links[0].source_token, 1);
  EXPECT_EQ(out.links[0].target_token, 4);
  EXPECT_TRUE(log.empty());
  EXPECT_TRUE(validate_document(out).ok());
}

TEST(LightVerbs, OrdinaryVerbUnchanged) {
  auto doc = verb_events({"He", "arrived", "in", "Lagos", "."}, {1}, {"PRP", "VBD", "IN", "NNP", "."});
  std::vector<RewriteLogEntry> log;
  auto out = rewrite_light_verbs(doc, LightVerbLexicon::Default(), HeuristicComplementResolver(), &log);
  EXPECT_EQ(out, doc);
  EXPECT_TRUE(log.empty());
}

TEST(LightVerbs, UnresolvableCopulaIsLogged) {
  auto doc = verb_events({"He", "was", "there", "."}, {1}, {"PRP", "VBD", "RB", "."});
  std::vector<RewriteLogEntry> log;
  auto out = rewrite_light_verbs(doc, LightVerbLexicon::Default(), HeuristicComplementResolver(), &log);
  EXPECT_EQ(out, doc);
  ASSERT_EQ(log.size(), 1u);
  EXPECT_EQ(log[0].verb, "was");
}

TEST(LightVerbs, GoldTreeFixtureMatchesOracle) {
  AdapterConfig config;
  config.source_format = "ontonotes";
  config.person_entity_filter = true;
  config.light_verb_rewrite = true;
  auto result = convert_corpus(kFixtures / "ontonotes", config);
  ASSERT_EQ(result.corpus.documents.size(), 1u);
  EXPECT_EQ(result.excluded, std::vector<std::string>{"news/onto_02_part000"});
  const auto& doc = result.corpus.documents[0];
  // was->writer rewritten, arrived kept, the second "was" kept and logged.
  std::vector<int> events;
  for (const auto& e : doc.events) events.push_back(e.token_index);
  EXPECT_EQ(events, (std::vector<int>{5, 8, 13}));
  ASSERT_EQ(doc.links.size(), 1u);
  EXPECT_EQ(doc.links[0].source_token, 2);
  EXPECT_EQ(doc.links[0].target_token, 5);
  ASSERT_EQ(result.rewrite_log.size(), 1u);
  EXPECT_EQ(result.rewrite_log[0].verb_token, 13);
  EXPECT_EQ(doc.entity_mentions.size(), 3u);
}

TEST(LightVerbs, EventPlusLinkCountPreservedPerRewrite) {
  AdapterConfig plain;
  plain.source_format = "ontonotes";
  auto before = convert_corpus(kFixtures / "ontonotes", plain).corpus;
  AdapterConfig rewrite = plain;
  rewrite.light_verb_rewrite = true;
  auto after = convert_corpus(kFixtures / "ontonotes", rewrite).corpus;
  for (std::size_t i = 0; i < before.documents.size(); ++i) {
    EXPECT_EQ(before.documents[i].events.size(), after.documents[i].events.size());
    EXPECT_EQ(after.documents[i].links.size(), i == 0 ? 1u : 0u);
  }
}

TEST(LightVerbs, RewriteRejectedForNonVerbSources) {
  AdapterConfig config;
  config.source_format = "timeml";
  config.light_verb_rewrite = true;
  EXPECT_THROW(convert_corpus(kFixtures / "timeml", config), Error);
}

TEST(Compose, Misc03SplitsTheCapFloorCeil) {
  auto spec = misc_spec(3);
  EXPECT_EQ(spec.total(), kEventTrainingCap);
  std::map<std::string, std::size_t> by;
  for (const auto& c : spec.components) by[c.corpus] = c.count;
  EXPECT_EQ(by.size(), 2u);
  EXPECT_EQ(by["litbank"] + by["ontonotes"], 5073u);
  EXPECT_EQ(std::max(by["litbank"], by["ontonotes"]), 2537u);
  EXPECT_EQ(std::min(by["litbank"], by["ontonotes"]), 2536u);
}

TEST(Compose, MiscVariantsCoverTheRightCorpora) {
  std::set<std::string> m1, m2;
  for (const auto& c : misc_spec(1).components) m1.insert(c.corpus);
  for (const auto& c : misc_spec(2).components) m2.insert(c.corpus);
  EXPECT_TRUE(m1.contains("newsreader"));
  EXPECT_FALSE(m2.contains("newsreader"));
  EXPECT_EQ(misc_spec(1).total(), 5073u);
  EXPECT_EQ(misc_spec(2).total(), 5073u);
  auto plus = misc_spec(3, kEventTrainingCap, 564);
  EXPECT_EQ(plus.total(), 5073u);
}

TEST(Compose, EqualSplitHitsTotalExactly) {
  for (std::size_t total : {0u, 1u, 7u, 5073u, 4509u}) {
    auto parts = equal_split(total, {"a", "b", "c", "d", "e", "f"});
    EXPECT_EQ(std::accumulate(parts.begin(), parts.end(), std::size_t{0}), total);
    auto [lo, hi] = std::minmax_element(parts.begin(), parts.end());
    EXPECT_LE(*hi - *lo, 1u);
  }
}

TEST(Compose, ShortCorpusIsInsufficientData) {
  auto small = testing::synthetic_biographies({.name = "gum", .documents = 99, .sentences_per_document = 2});
  TrainingSetSpec spec{"entity", {{"gum", 100}}, kEntityTrainingDocuments, SampleUnit::kDocuments};
  try {
    compose_training_set(spec, std::vector<Corpus>{small}, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInsufficientData);
    EXPECT_NE(std::string(e.what()).find("gum"), std::string::npos);
  }
}

TEST(Compose, DeterministicWithoutDuplicatesAndUnderCap) {
  std::vector<Corpus> corpora{
      testing::synthetic_biographies({.name = "ontonotes", .documents = 20, .sentences_per_document = 30}),
      testing::synthetic_biographies({.name = "litbank", .documents = 20, .sentences_per_document = 30})};
  TrainingSetSpec spec{"mini", {{"ontonotes", 100}, {"litbank", 101}}, 300, SampleUnit::kSentences};
  auto a = compose_training_set(spec, corpora, 42);
  auto b = compose_training_set(spec, corpora, 42);
  auto c = compose_training_set(spec, corpora, 43);
  std::vector<std::string> ids_a, ids_b, ids_c;
  for (const auto& d : a.documents) ids_a.push_back(d.doc_id);
  for (const auto& d : b.documents) ids_b.push_back(d.doc_id);
  for (const auto& d : c.documents) ids_c.push_back(d.doc_id);
  EXPECT_EQ(ids_a, ids_b);
  EXPECT_NE(ids_a, ids_c);
  EXPECT_EQ(ids_a.size(), 201u);
  EXPECT_EQ(std::set<std::string>(ids_a.begin(), ids_a.end()).size(), ids_a.size());

  TrainingSetSpec over = spec;
  over.cap = 150;
  EXPECT_THROW(compose_training_set(over, corpora, 1), Error);
}

}  // namespace
}  // namespace bioevents::adapters
