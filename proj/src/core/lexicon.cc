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

#include "bioevents/core/lexicon.h"

#include <fstream>

#include "bioevents/core/error.h"
#include "bioevents/core/text.h"

namespace bioevents {

LightVerbLexicon::LightVerbLexicon(std::set<std::string> forms) {
  for (const auto& form : forms) forms_.insert(text::to_lower(form));
}

LightVerbLexicon LightVerbLexicon::Default() {
  return LightVerbLexicon({
      // copulas
      "be", "is", "am", "are", "was", "were", "been", "being", "'s", "'re",
      "become", "becomes", "became", "becoming",
      "seem", "seems", "seemed", "seeming",
      "remain", "remains", "remained", "remaining",
      // light verbs
      "have", "has", "had", "having",
      "do", "does", "did", "done", "doing",
      "make", "makes", "made", "making",
      "take", "takes", "took", "taken", "taking",
      "give", "gives", "gave", "given", "giving",
      "get", "gets", "got", "gotten", "getting",
  });
}

LightVerbLexicon LightVerbLexicon::FromFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kIo, "cannot open lexicon " + path.string());
  }
  std::set<std::string> forms;
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = text::trim(line);
    if (!line.empty()) forms.insert(line);
  }
  return LightVerbLexicon(std::move(forms));
}

bool LightVerbLexicon::contains(std::string_view surface) const {
  return forms_.count(text::to_lower(surface)) > 0;
}

}  // namespace bioevents
