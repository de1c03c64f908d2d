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

#ifndef BIOEVENTS_CORE_LEXICON_H_
#define BIOEVENTS_CORE_LEXICON_H_

#include <filesystem>
#include <set>
#include <string>
#include <string_view>

namespace bioevents {

// Closed set of copular and light verb forms that may head a LINK relation.
// Matching is on the lowercased surface form.
class LightVerbLexicon {
 public:
  LightVerbLexicon() = default;
  explicit LightVerbLexicon(std::set<std::string> forms);

  // Copulas (all inflections of "be", "become", "seem", "remain") plus the
  // light verbs have/do/make/take/give/get. Mirrors config/light_verbs.txt.
  static LightVerbLexicon Default();

  // One form per line; '#' starts a comment; blank lines ignored.
  static LightVerbLexicon FromFile(const std::filesystem::path& path);

  bool contains(std::string_view surface) const;
  const std::set<std::string>& forms() const { return forms_; }
  bool empty() const { return forms_.empty(); }

 private:
  std::set<std::string> forms_;
};

}  // namespace bioevents

#endif  // BIOEVENTS_CORE_LEXICON_H_
