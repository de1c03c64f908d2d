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

#ifndef BIOEVENTS_CORE_VALIDATE_H_
#define BIOEVENTS_CORE_VALIDATE_H_

#include <string>
#include <vector>

#include "bioevents/core/lexicon.h"
#include "bioevents/core/types.h"

namespace bioevents {

struct Violation {
  std::string message;
  std::vector<int> tokens;

  bool operator==(const Violation&) const = default;
};

struct ValidationReport {
  std::string doc_id;
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  std::string summary() const;
};

struct ValidationOptions {
  // When set, every LINK source must be a form in this lexicon.
  const LightVerbLexicon* lexicon = nullptr;
};

// Never throws; every broken invariant is reported as data.
ValidationReport validate_document(const AnnotatedDocument& doc,
                                   const ValidationOptions& options = {});

// Document-level reports plus one pseudo-report for duplicate doc ids.
std::vector<ValidationReport> validate_corpus(
    const Corpus& corpus, const ValidationOptions& options = {});

}  // namespace bioevents

#endif  // BIOEVENTS_CORE_VALIDATE_H_
