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

#include "support.h"

#include <atomic>
#include <set>
#include <unistd.h>

#include "bioevents/core/io.h"
#include "bioevents/core/random.h"
#include "bioevents/core/text.h"

namespace bioevents::testing {

namespace fs = std::filesystem;

TempDir::TempDir(const std::string& tag) {
  static std::atomic<int> counter{0};
  path_ = fs::temp_directory_path() /
          ("bioevents_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
  fs::remove_all(path_);
  fs::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

namespace {

struct Word {
  std::string text;
  std::string lemma;
  std::string pos;
};

class Builder {
 public:
  explicit Builder(AnnotatedDocument& doc) : doc_(doc) {}

  // Appends a sentence; returns the index of its first token.
  int sentence(const std::vector<Word>& words) {
    int first = static_cast<int>(doc_.tokens.size());
    for (const auto& w : words) {
      Token t;
      t.index = static_cast<int>(doc_.tokens.size());
      t.text = w.text;
      t.sentence_index = sentence_;
      t.lemma = w.lemma;
      t.pos = w.pos;
      doc_.tokens.push_back(std::move(t));
    }
    ++sentence_;
    return first;
  }
  void mention(int start, int end, MentionKind kind = MentionKind::kDirect) {
    doc_.entity_mentions.push_back({{start, end}, kind});
  }
  void event(int token, Uncertainty u = Uncertainty::kFactual) { doc_.events.push_back({token, u}); }
  void link(int source, int target) { doc_.links.push_back({source, target}); }
  void cont_mod(int source, int target, Uncertainty u) { doc_.cont_mods.push_back({source, target, u}); }

 private:
  AnnotatedDocument& doc_;
  int sentence_ = 0;
};

const std::vector<std::pair<std::string, std::string>> kNames = {
    {"Amara", "Okafor"}, {"Lucien", "Marchand"}, {"Ingrid", "Solberg"}, {"Tomas", "Vidal"},
    {"Mei", "Tanaka"},   {"Kwame", "Mensah"},    {"Elena", "Rossi"},    {"Yusuf", "Demir"}};
const std::vector<std::string> kPlaces = {"Lagos", "Lyon", "Bergen", "Seville", "Osaka", "Accra"};
const std::vector<std::string> kAdjectives = {"Nigerian", "French", "celebrated", "prolific",
                                              "young", "political"};
const std::vector<std::string> kTitles = {"Harmattan", "Tidewater", "Ashfall", "Nocturne"};
const std::vector<std::pair<std::string, std::string>> kDeeds = {
    {"wrote", "write"}, {"published", "publish"}, {"taught", "teach"}, {"edited", "edit"}};
const std::vector<std::string> kWorks = {"novels", "poems", "essays", "plays"};

}  // namespace

Corpus synthetic_biographies(const SyntheticSpec& spec) {
  Corpus corpus;
  corpus.name = spec.name;
  corpus.provenance = Provenance::kSynthetic;
  for (std::size_t d = 0; d < spec.documents; ++d) {
    DeterministicRng rng(spec.seed, spec.name + "/" + std::to_string(d));
    AnnotatedDocument doc;
    doc.doc_id = spec.name + "_" + std::to_string(d);
    if (!spec.groups.empty()) doc.group = spec.groups[d % spec.groups.size()];
    const bool woman = doc.group ? doc.group->gender == Gender::kWoman : d % 2 == 0;
    const auto& [first, last] = kNames[(d * 3 + rng.below(kNames.size())) % kNames.size()];
    doc.target_entity_name = first + " " + last;
    const Word pron = woman ? Word{"She", "she", "PRP"} : Word{"He", "he", "PRP"};
    Builder b(doc);

    // The opening sentence always names the subject.
    int s = b.sentence({{first, first, "NNP"}, {last, last, "NNP"}, {"was", "be", "VBD"},
                        {"born", "bear", "VBN"}, {"in", "in", "IN"},
                        {kPlaces[rng.below(kPlaces.size())], "", "NNP"}, {".", ".", "."}});
    doc.tokens[s + 5].lemma = doc.tokens[s + 5].text;
    b.mention(s, s + 1);
    b.event(s + 3);

    for (std::size_t k = 1; k < spec.sentences_per_document; ++k) {
      if (rng.unit() < spec.background_rate) {
        const auto& place = kPlaces[rng.below(kPlaces.size())];
        b.sentence({{place, place, "NNP"}, {"has", "have", "VBZ"}, {"a", "a", "DT"},
                    {"large", "large", "JJ"}, {"harbour", "harbour", "NN"}, {".", ".", "."}});
        continue;
      }
      switch (rng.below(6)) {
        case 0: {
          const auto& [form, lemma] = kDeeds[rng.below(kDeeds.size())];
          const auto& work = kWorks[rng.below(kWorks.size())];
          s = b.sentence({pron, {form, lemma, "VBD"}, {"several", "several", "JJ"},
                          {work, work.substr(0, work.size() - 1), "NNS"}, {".", ".", "."}});
          b.mention(s, s);
          b.event(s + 1);
          break;
        }
        case 1: {
          const auto& adj = kAdjectives[rng.below(kAdjectives.size())];
          s = b.sentence({pron, {"was", "be", "VBD"}, {"a", "a", "DT"}, {adj, adj, "JJ"},
                          {"writer", "writer", "NN"}, {".", ".", "."}});
          b.mention(s, s);
          b.event(s + 4);
          b.link(s + 1, s + 4);
          break;
        }
        case 2: {
          s = b.sentence({pron, {"decided", "decide", "VBD"}, {"to", "to", "TO"},
                          {"quit", "quit", "VB"}, {"teaching", "teaching", "NN"}, {".", ".", "."}});
          b.mention(s, s);
          b.event(s + 1);
          b.event(s + 3, Uncertainty::kIntention);
          b.cont_mod(s + 1, s + 3, Uncertainty::kIntention);
          break;
        }
        case 3: {
          const auto& [ofirst, olast] = kNames[rng.below(kNames.size())];
          s = b.sentence({pron, {"married", "marry", "VBD"}, {ofirst, ofirst, "NNP"},
                          {olast, olast, "NNP"}, {"in", "in", "IN"},
                          {std::to_string(1900 + rng.below(90)), "", "CD"}, {".", ".", "."}});
          doc.tokens[s + 5].lemma = doc.tokens[s + 5].text;
          b.mention(s, s);
          b.event(s + 1);
          break;
        }
        case 4: {
          const auto& title = kTitles[rng.below(kTitles.size())];
          s = b.sentence({{title, title, "NNP"}, {"received", "receive", "VBD"}, {"wide", "wide", "JJ"},
                          {"acclaim", "acclaim", "NN"}, {".", ".", "."}});
          b.mention(s, s, MentionKind::kIndirect);
          b.event(s + 1);
          break;
        }
        default: {
          const auto& place = kPlaces[rng.below(kPlaces.size())];
          s = b.sentence({{"In", "in", "IN"}, {"later", "late", "JJ"}, {"years", "year", "NNS"},
                          pron, {"moved", "move", "VBD"}, {"to", "to", "TO"},
                          {place, place, "NNP"}, {".", ".", "."}});
          b.mention(s + 3, s + 3);
          b.event(s + 4);
          break;
        }
      }
    }
    std::sort(doc.events.begin(), doc.events.end(),
              [](const EventMention& a, const EventMention& b) { return a.token_index < b.token_index; });
    corpus.documents.push_back(std::move(doc));
  }
  return corpus;
}

fs::path write_gold_manifest(const Corpus& corpus, const fs::path& dir) {
  fs::create_directories(dir / "docs");
  std::vector<pipeline::ManifestEntry> entries;
  for (std::size_t i = 0; i < corpus.documents.size(); ++i) {
    const auto& doc = corpus.documents[i];
    Corpus one;
    one.name = doc.doc_id;
    one.documents.push_back(doc);
    const fs::path file = dir / "docs" / (std::to_string(i) + ".jsonl");
    save_corpus(one, file);
    pipeline::ManifestEntry e;
    e.id = doc.doc_id;
    e.title = doc.target_entity_name;
    e.group = doc.group;
    e.doc_path = file;
    entries.push_back(std::move(e));
  }
  const fs::path manifest = dir / "manifest.jsonl";
  pipeline::write_manifest(manifest, entries);
  return manifest;
}

AnnotatedDocument plain_document(const std::string& id, const std::vector<std::string>& words) {
  AnnotatedDocument doc;
  doc.doc_id = id;
  int sentence = 0;
  for (const auto& w : words) {
    Token t;
    t.index = static_cast<int>(doc.tokens.size());
    t.text = w;
    t.sentence_index = sentence;
    doc.tokens.push_back(std::move(t));
    if (w == ".") ++sentence;
  }
  return doc;
}

CountTotals count(const Corpus& corpus) {
  CountTotals c;
  c.documents = corpus.documents.size();
  for (const auto& doc : corpus.documents) {
    c.sentences += static_cast<std::size_t>(doc.sentence_count());
    std::set<int> with_event;
    for (const auto& e : doc.events) with_event.insert(doc.tokens[e.token_index].sentence_index);
    c.event_sentences += with_event.size();
    c.events += doc.events.size();
    c.mentions += doc.entity_mentions.size();
    c.links += doc.links.size();
    c.cont_mods += doc.cont_mods.size();
  }
  return c;
}

}  // namespace bioevents::testing
