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

// Shared helpers for the unit and acceptance tests: scratch directories and
// synthetic, scheme-valid biographies.

#ifndef BIOEVENTS_TESTS_SUPPORT_H_
#define BIOEVENTS_TESTS_SUPPORT_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bioevents/core/types.h"
#include "bioevents/pipeline/pipeline.h"

namespace bioevents::testing {

// Removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag = "t");
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

struct SyntheticSpec {
  std::string name = "synthetic";
  std::size_t documents = 4;
  std::size_t sentences_per_document = 12;
  std::uint64_t seed = 7;
  // Share of sentences with neither events nor mentions.
  double background_rate = 0.2;
  // Documents cycle through these; empty leaves them ungrouped.
  std::vector<GroupLabel> groups;
};

// Templated biographies with DIRECT and INDIRECT mentions, FACTUAL events,
// copular LINKs and INTENTION CONT_MODs. Every event sentence mentions the
// subject. Passes validate_document.
Corpus synthetic_biographies(const SyntheticSpec& spec);

// Writes one canonical file per document under <dir>/docs and a manifest
// pointing at them; returns the manifest path.
std::filesystem::path write_gold_manifest(const Corpus& corpus, const std::filesystem::path& dir);

// Document with the given tokens in one sentence per '.'-terminated run.
AnnotatedDocument plain_document(const std::string& id, const std::vector<std::string>& words);

struct CountTotals {
  std::size_t documents = 0;
  std::size_t sentences = 0;
  std::size_t event_sentences = 0;
  std::size_t events = 0;
  std::size_t mentions = 0;
  std::size_t links = 0;
  std::size_t cont_mods = 0;
};
CountTotals count(const Corpus& corpus);

}  // namespace bioevents::testing

#endif  // BIOEVENTS_TESTS_SUPPORT_H_
