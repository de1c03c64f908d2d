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

// Agreement, divergence and corpus statistics.

#ifndef BIOEVENTS_METRICS_METRICS_H_
#define BIOEVENTS_METRICS_METRICS_H_

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bioevents/core/error.h"
#include "bioevents/core/labels.h"
#include "bioevents/core/types.h"

namespace bioevents::metrics {

// Cohen's kappa from per-annotator marginals. Labels may be any ordered type.
// Throws kLengthMismatch on unequal lengths, kUndefined when the sequences are
// empty or chance agreement is 1.
template <typename Label>
double cohen_kappa(std::span<const Label> a, std::span<const Label> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kLengthMismatch, "kappa over sequences of length " +
                                                std::to_string(a.size()) + " and " +
                                                std::to_string(b.size()));
  }
  if (a.empty()) throw Error(ErrorCode::kUndefined, "kappa over empty sequences");
  std::map<Label, std::pair<std::size_t, std::size_t>> marginals;
  std::size_t agree = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ++marginals[a[i]].first;
    ++marginals[b[i]].second;
    if (a[i] == b[i]) ++agree;
  }
  const double n = static_cast<double>(a.size());
  double p_e = 0.0;
  for (const auto& [label, counts] : marginals) {
    p_e += (static_cast<double>(counts.first) / n) * (static_cast<double>(counts.second) / n);
  }
  const double p_o = static_cast<double>(agree) / n;
  if (1.0 - p_e <= 0.0) {
    throw Error(ErrorCode::kUndefined, "chance agreement is 1; kappa undefined");
  }
  return (p_o - p_e) / (1.0 - p_e);
}

template <typename Label>
double cohen_kappa(const std::vector<Label>& a, const std::vector<Label>& b) {
  return cohen_kappa(std::span<const Label>(a), std::span<const Label>(b));
}

// Discrete distribution keyed by type.
using Distribution = std::map<std::string, double>;

inline constexpr double kNormalizationTolerance = 1e-9;

// Base-2 Jensen-Shannon divergence. Missing keys count as probability 0.
// Throws kNotNormalized if either side is negative or does not sum to 1.
double jsd(const Distribution& p, const Distribution& q);

// Per-type contributions whose sum is jsd(p, q); every term is >= 0.
// Keys are the union of both supports.
std::map<std::string, double> jsd_terms(const Distribution& p, const Distribution& q);

// Counts -> relative frequencies. Throws kEmptySupport on an all-zero input.
Distribution normalize(const std::map<std::string, double>& counts);

enum class Basis { kLemmaUnigram, kSurfaceUnigram, kEventType };
std::string_view to_string(Basis basis);
Basis parse_basis(std::string_view text);  // lemma | surface | event (or enum names)

struct DistributionBuild {
  Distribution distribution;
  // Tokens whose lemma was absent and had to be computed from the surface form.
  std::size_t lemma_fallbacks = 0;
};

DistributionBuild corpus_distribution(const Corpus& corpus, Basis basis);

struct DivergenceResult {
  std::string corpus_a;
  std::string corpus_b;
  double jsd = 0.0;
  Basis basis = Basis::kLemmaUnigram;
};

struct DivergenceMatrix {
  std::vector<std::string> names;
  Basis basis = Basis::kLemmaUnigram;
  std::vector<std::vector<double>> values;  // symmetric, zero diagonal

  DivergenceResult cell(std::size_t i, std::size_t j) const;
  std::string to_csv() const;
};

// Throws kInvalidArgument with fewer than two corpora. Cells are computed in
// parallel when `threads` > 1.
DivergenceMatrix jsd_matrix(std::span<const Corpus> corpora, Basis basis, unsigned threads = 1);

struct CorpusProfile {
  std::string name;
  std::size_t n_documents = 0;
  std::size_t n_sentences = 0;
  std::size_t n_tokens = 0;
  std::size_t n_event_sentences = 0;
  std::size_t n_events = 0;
  std::size_t n_mentions = 0;
  std::size_t n_mention_tokens = 0;
  std::size_t n_mention_sentences = 0;
  std::size_t n_links = 0;
  std::size_t n_cont_mods = 0;
  double mention_token_ratio = 0.0;
  double mention_sentence_ratio = 0.0;
  double avg_doc_length_tokens = 0.0;
  // Descending relative frequency; ties in lemma order.
  std::vector<std::pair<std::string, double>> top_event_lemmas;
};

CorpusProfile corpus_profile(const Corpus& corpus, std::size_t top_k = 10);

// Header plus one row per profile; top lemmas are "lemma:freq" joined by '|'.
std::string profiles_to_csv(std::span<const CorpusProfile> profiles);

struct AgreementReport {
  Layer layer = Layer::kEvent;
  std::pair<std::string, std::string> annotator_pair;
  // Absent when chance agreement is 1 (kappa undefined).
  std::optional<double> kappa;
  std::size_t n_items = 0;
};

// Labels come from to_token_labels(); documents are aligned by position. Throws kTokenizationMismatch naming the
// first divergent document and token.
AgreementReport pairwise_iaa(std::span<const AnnotatedDocument> docs_a,
                             std::span<const AnnotatedDocument> docs_b, Layer layer,
                             std::pair<std::string, std::string> annotators = {"A", "B"});

}  // namespace bioevents::metrics

#endif  // BIOEVENTS_METRICS_METRICS_H_
