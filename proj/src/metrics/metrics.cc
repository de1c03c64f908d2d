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

#include "bioevents/metrics/metrics.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

#include "bioevents/core/text.h"

namespace bioevents::metrics {

namespace {

void check_normalized(const Distribution& d, const char* side) {
  double sum = 0.0;
  for (const auto& [key, p] : d) {
    if (!(p >= 0.0)) {
      throw Error(ErrorCode::kNotNormalized,
                  std::string(side) + " has negative or NaN mass at '" + key + "'");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > kNormalizationTolerance) {
    std::ostringstream msg;
    msg.precision(17);
    msg << side << " sums to " << sum;
    throw Error(ErrorCode::kNotNormalized, msg.str());
  }
}

// x * log2(x / m) with the 0 log 0 = 0 convention.
double weighted_log_ratio(double x, double m) { return x > 0.0 ? x * std::log2(x / m) : 0.0; }

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string token_lemma(const Token& token, std::size_t* fallbacks) {
  if (token.lemma) return text::to_lower(*token.lemma);
  if (fallbacks != nullptr) ++*fallbacks;
  return text::lemmatize(text::to_lower(token.text));
}

}  // namespace

std::map<std::string, double> jsd_terms(const Distribution& p, const Distribution& q) {
  check_normalized(p, "P");
  check_normalized(q, "Q");
  std::map<std::string, double> terms;
  auto p_it = p.begin();
  auto q_it = q.begin();
  // Merge walk over the two sorted supports.
  while (p_it != p.end() || q_it != q.end()) {
    std::string key;
    double pi = 0.0;
    double qi = 0.0;
    if (q_it == q.end() || (p_it != p.end() && p_it->first < q_it->first)) {
      key = p_it->first;
      pi = p_it->second;
      ++p_it;
    } else if (p_it == p.end() || q_it->first < p_it->first) {
      key = q_it->first;
      qi = q_it->second;
      ++q_it;
    } else {
      key = p_it->first;
      pi = p_it->second;
      qi = q_it->second;
      ++p_it;
      ++q_it;
    }
    const double m = 0.5 * (pi + qi);
    double term = 0.5 * weighted_log_ratio(pi, m) + 0.5 * weighted_log_ratio(qi, m);
    terms[key] = std::max(term, 0.0);
  }
  return terms;
}

double jsd(const Distribution& p, const Distribution& q) {
  double sum = 0.0;
  for (const auto& [key, term] : jsd_terms(p, q)) sum += term;
  return std::clamp(sum, 0.0, 1.0);
}

Distribution normalize(const std::map<std::string, double>& counts) {
  double total = 0.0;
  for (const auto& [key, c] : counts) {
    if (c < 0.0) throw Error(ErrorCode::kInvalidArgument, "negative count for '" + key + "'");
    total += c;
  }
  if (total <= 0.0) throw Error(ErrorCode::kEmptySupport, "distribution has no mass");
  Distribution out;
  for (const auto& [key, c] : counts) {
    if (c > 0.0) out[key] = c / total;
  }
  return out;
}

std::string_view to_string(Basis basis) {
  switch (basis) {
    case Basis::kLemmaUnigram:
      return "LEMMA_UNIGRAM";
    case Basis::kSurfaceUnigram:
      return "SURFACE_UNIGRAM";
    case Basis::kEventType:
      return "EVENT_TYPE";
  }
  return "?";
}

Basis parse_basis(std::string_view s) {
  std::string lower = text::to_lower(s);
  if (lower == "lemma" || lower == "lemma_unigram") return Basis::kLemmaUnigram;
  if (lower == "surface" || lower == "surface_unigram") return Basis::kSurfaceUnigram;
  if (lower == "event" || lower == "event_type") return Basis::kEventType;
  throw Error(ErrorCode::kParse, "unknown distribution basis '" + std::string(s) + "'");
}

DistributionBuild corpus_distribution(const Corpus& corpus, Basis basis) {
  std::map<std::string, double> counts;
  DistributionBuild build;
  for (const auto& doc : corpus.documents) {
    if (basis == Basis::kEventType) {
      for (const auto& e : doc.events) {
        if (e.token_index < 0 || e.token_index >= static_cast<int>(doc.tokens.size())) continue;
        counts[token_lemma(doc.tokens[e.token_index], &build.lemma_fallbacks)] += 1.0;
      }
      continue;
    }
    for (const auto& t : doc.tokens) {
      if (basis == Basis::kSurfaceUnigram) {
        counts[text::to_lower(t.text)] += 1.0;
      } else {
        counts[token_lemma(t, &build.lemma_fallbacks)] += 1.0;
      }
    }
  }
  if (counts.empty()) {
    throw Error(ErrorCode::kEmptySupport,
                "corpus '" + corpus.name + "' yields an empty " + std::string(to_string(basis)) +
                    " distribution");
  }
  build.distribution = normalize(counts);
  return build;
}

DivergenceResult DivergenceMatrix::cell(std::size_t i, std::size_t j) const {
  return {names.at(i), names.at(j), values.at(i).at(j), basis};
}

std::string DivergenceMatrix::to_csv() const {
  std::ostringstream out;
  out.precision(6);
  out << std::fixed << "corpus";
  for (const auto& n : names) out << ',' << csv_field(n);
  out << '\n';
  for (std::size_t i = 0; i < names.size(); ++i) {
    out << csv_field(names[i]);
    for (double v : values[i]) out << ',' << v;
    out << '\n';
  }
  return out.str();
}

DivergenceMatrix jsd_matrix(std::span<const Corpus> corpora, Basis basis, unsigned threads) {
  if (corpora.size() < 2) {
    throw Error(ErrorCode::kInvalidArgument, "JSD matrix needs at least two corpora");
  }
  const std::size_t n = corpora.size();
  DivergenceMatrix matrix;
  matrix.basis = basis;
  matrix.values.assign(n, std::vector<double>(n, 0.0));
  std::vector<Distribution> dists;
  for (const auto& c : corpora) {
    matrix.names.push_back(c.name);
    dists.push_back(corpus_distribution(c, basis).distribution);
  }

  std::vector<std::pair<std::size_t, std::size_t>> cells;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) cells.emplace_back(i, j);
  }
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t k = next++; k < cells.size(); k = next++) {
      auto [i, j] = cells[k];
      double v = jsd(dists[i], dists[j]);
      matrix.values[i][j] = v;
      matrix.values[j][i] = v;
    }
  };
  const unsigned workers = std::clamp<unsigned>(threads, 1, static_cast<unsigned>(cells.size()));
  std::vector<std::jthread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  return matrix;
}

CorpusProfile corpus_profile(const Corpus& corpus, std::size_t top_k) {
  CorpusProfile p;
  p.name = corpus.name;
  std::map<std::string, double> lemma_counts;
  for (const auto& doc : corpus.documents) {
    ++p.n_documents;
    p.n_tokens += doc.tokens.size();
    p.n_events += doc.events.size();
    p.n_mentions += doc.entity_mentions.size();
    p.n_links += doc.links.size();
    p.n_cont_mods += doc.cont_mods.size();

    std::vector<bool> in_mention(doc.tokens.size(), false);
    for (const auto& m : doc.entity_mentions) {
      for (int t = std::max(m.token_span.start, 0);
           t <= m.token_span.end && t < static_cast<int>(doc.tokens.size()); ++t) {
        in_mention[t] = true;
      }
    }
    p.n_mention_tokens += static_cast<std::size_t>(std::count(in_mention.begin(), in_mention.end(), true));

    std::vector<bool> has_event(doc.tokens.size(), false);
    for (const auto& e : doc.events) {
      if (e.token_index < 0 || e.token_index >= static_cast<int>(doc.tokens.size())) continue;
      has_event[e.token_index] = true;
      lemma_counts[token_lemma(doc.tokens[e.token_index], nullptr)] += 1.0;
    }
    for (const auto& [begin, end] : doc.sentence_ranges()) {
      ++p.n_sentences;
      bool mention = false;
      bool event = false;
      for (int t = begin; t < end; ++t) {
        mention = mention || in_mention[t];
        event = event || has_event[t];
      }
      if (mention) ++p.n_mention_sentences;
      if (event) ++p.n_event_sentences;
    }
  }
  if (p.n_tokens > 0) {
    p.mention_token_ratio = static_cast<double>(p.n_mention_tokens) / static_cast<double>(p.n_tokens);
  }
  if (p.n_sentences > 0) {
    p.mention_sentence_ratio =
        static_cast<double>(p.n_mention_sentences) / static_cast<double>(p.n_sentences);
  }
  if (p.n_documents > 0) {
    p.avg_doc_length_tokens = static_cast<double>(p.n_tokens) / static_cast<double>(p.n_documents);
  }
  if (!lemma_counts.empty()) {
    std::vector<std::pair<std::string, double>> ranked(lemma_counts.begin(), lemma_counts.end());
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    if (ranked.size() > top_k) ranked.resize(top_k);
    for (auto& [lemma, count] : ranked) count /= static_cast<double>(p.n_events);
    p.top_event_lemmas = std::move(ranked);
  }
  return p;
}

std::string profiles_to_csv(std::span<const CorpusProfile> profiles) {
  std::ostringstream out;
  out << "corpus,documents,sentences,tokens,event_sentences,events,mentions,mention_tokens,"
         "mention_sentences,links,cont_mods,mention_token_ratio,mention_sentence_ratio,"
         "avg_doc_length_tokens,top_event_lemmas\n";
  out.precision(6);
  out << std::fixed;
  for (const auto& p : profiles) {
    std::string lemmas;
    for (const auto& [lemma, freq] : p.top_event_lemmas) {
      if (!lemmas.empty()) lemmas += '|';
      std::ostringstream f;
      f.precision(6);
      f << std::fixed << freq;
      lemmas += lemma + ":" + f.str();
    }
    out << csv_field(p.name) << ',' << p.n_documents << ',' << p.n_sentences << ','
        << p.n_tokens << ',' << p.n_event_sentences << ',' << p.n_events << ','
        << p.n_mentions << ',' << p.n_mention_tokens << ',' << p.n_mention_sentences << ','
        << p.n_links << ',' << p.n_cont_mods << ',' << p.mention_token_ratio << ','
        << p.mention_sentence_ratio << ',' << p.avg_doc_length_tokens << ','
        << csv_field(lemmas) << '\n';
  }
  return out.str();
}

AgreementReport pairwise_iaa(std::span<const AnnotatedDocument> docs_a,
                             std::span<const AnnotatedDocument> docs_b, Layer layer,
                             std::pair<std::string, std::string> annotators) {
  if (docs_a.size() != docs_b.size()) {
    throw Error(ErrorCode::kTokenizationMismatch,
                "annotator sets hold " + std::to_string(docs_a.size()) + " and " +
                    std::to_string(docs_b.size()) + " documents");
  }
  LabelSequence all_a;
  LabelSequence all_b;
  for (std::size_t d = 0; d < docs_a.size(); ++d) {
    const auto& a = docs_a[d];
    const auto& b = docs_b[d];
    const std::size_t common = std::min(a.tokens.size(), b.tokens.size());
    for (std::size_t t = 0; t < common; ++t) {
      if (a.tokens[t].text != b.tokens[t].text) {
        throw Error(ErrorCode::kTokenizationMismatch,
                    "document " + std::to_string(d) + " ('" + a.doc_id + "') diverges at token " +
                        std::to_string(t) + ": '" + a.tokens[t].text + "' vs '" +
                        b.tokens[t].text + "'");
      }
    }
    if (a.tokens.size() != b.tokens.size()) {
      throw Error(ErrorCode::kTokenizationMismatch,
                  "document " + std::to_string(d) + " ('" + a.doc_id + "') diverges at token " +
                      std::to_string(common) + ": lengths " + std::to_string(a.tokens.size()) +
                      " and " + std::to_string(b.tokens.size()));
    }
    auto la = to_token_labels(a, layer);
    auto lb = to_token_labels(b, layer);
    all_a.insert(all_a.end(), la.begin(), la.end());
    all_b.insert(all_b.end(), lb.begin(), lb.end());
  }
  AgreementReport report;
  report.layer = layer;
  report.annotator_pair = std::move(annotators);
  report.n_items = all_a.size();
  try {
    report.kappa = cohen_kappa(all_a, all_b);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kUndefined) throw;
  }
  return report;
}

}  // namespace bioevents::metrics
