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

// Corpus persistence.
//
// The canonical format ("jsonl") is UTF-8 with one JSON object per line, one
// line per document. Field names follow AnnotatedDocument exactly; spans are
// [start, end] pairs and enums are uppercase strings. Keys are emitted in
// sorted order so serializing the same corpus twice is byte-identical.
//
// A per-token tab-separated view ("tsv") can be written for sequence-labeling
// tools; it is export-only because it drops relation sources.
//
// Additional readers (the external corpus adapters) plug in through
// register_reader().

#ifndef BIOEVENTS_CORE_IO_H_
#define BIOEVENTS_CORE_IO_H_

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bioevents/core/types.h"
#include "bioevents/core/validate.h"
#include "json.hpp"

namespace bioevents {

nlohmann::json to_json(const AnnotatedDocument& doc);
AnnotatedDocument document_from_json(const nlohmann::json& j);

// Single line, no trailing newline.
std::string serialize_document(const AnnotatedDocument& doc);
std::string serialize_corpus(const Corpus& corpus);

struct LoadOptions {
  std::string name;                       // defaults to the path stem
  std::optional<Provenance> provenance;   // defaults to a guess from the name
  bool validate = true;
  ValidationOptions validation;
};

using CorpusReader =
    std::function<Corpus(const std::filesystem::path&, const LoadOptions&)>;

void register_reader(const std::string& format, CorpusReader reader);
std::vector<std::string> registered_formats();

// `path` may be a single file or a directory (all *.jsonl files, sorted by
// name, for the canonical format). Throws Error(kParse) with file:line on
// malformed input and Error(kValidation) listing every violated invariant.
Corpus load_corpus(const std::filesystem::path& path,
                   const std::string& format = "jsonl",
                   const LoadOptions& options = {});

// format: "jsonl" or "tsv". `path` is the output file.
void save_corpus(const Corpus& corpus, const std::filesystem::path& path,
                 const std::string& format = "jsonl");

std::string tsv_view(const Corpus& corpus);

// Name-based provenance guess ("gum_dev" -> GUM); SYNTHETIC when unknown.
Provenance guess_provenance(std::string_view name);

// Writes through a temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);
std::string read_file(const std::filesystem::path& path);

}  // namespace bioevents

#endif  // BIOEVENTS_CORE_IO_H_
