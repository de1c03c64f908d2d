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

// Per-group event distributions and the per-type decomposition of the
// Jensen-Shannon divergence between two groups.

#ifndef BIOEVENTS_SHIFT_SHIFT_H_
#define BIOEVENTS_SHIFT_SHIFT_H_

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bioevents/core/types.h"

namespace bioevents::shift {

// How an event token becomes a type.
enum class TypeMode { kLemma, kSurface };
std::string_view to_string(TypeMode mode);
TypeMode parse_type_mode(std::string_view s);

struct EventDistribution {
  std::string name;  // group code or a caller-chosen label
  std::optional<GroupLabel> group;
  std::map<std::string, double> freq;  // occurrences per biography
  std::size_t n_biographies = 0;
  std::size_t n_events = 0;
  std::size_t n_types = 0;

  double average_events() const;
  // freq renormalized to sum to 1. Throws kNotNormalized on an empty support.
  std::map<std::string, double> normalized() const;
};

// Lowercased lemma (or surface form) of each event token, counted over the
// documents and divided by their number. Throws kEmptyGroup on no documents.
EventDistribution group_distribution(std::span<const AnnotatedDocument> docs, std::string name,
                                     TypeMode mode = TypeMode::kLemma);

// One distribution per GroupLabel present; ungrouped documents are skipped.
std::map<GroupLabel, EventDistribution> group_distributions(
    std::span<const AnnotatedDocument> docs, TypeMode mode = TypeMode::kLemma);

// Combines two distributions over disjoint biography sets.
EventDistribution merge(const EventDistribution& a, const EventDistribution& b, std::string name);

enum class Side { kFirst, kSecond };
std::string_view to_string(Side side);

struct Contribution {
  std::string type;
  double p1 = 0.0;
  double p2 = 0.0;
  double delta = 0.0;
  Side side = Side::kFirst;  // kSecond iff p2 > p1
};

struct ShiftResult {
  std::string first;
  std::string second;
  double total_jsd = 0.0;
  // Sorted by delta descending, then type.
  std::vector<Contribution> contributions;
};

// Throws kNotNormalized when either side has no events.
ShiftResult jsd_shift(const EventDistribution& d1, const EventDistribution& d2);

// Highest-delta types, optionally restricted to one side. k must be >= 1.
std::vector<Contribution> top_k_shift(const ShiftResult& result, std::size_t k,
                                      std::optional<Side> side = std::nullopt);

struct OverlapStats {
  std::size_t shared = 0;
  double of_first = 0.0;   // shared / |support(first)|
  double of_second = 0.0;  // shared / |support(second)|
};

// Throws kEmptySupport when either support is empty.
OverlapStats overlap_stats(const EventDistribution& d1, const EventDistribution& d2);

struct ReportOptions {
  std::filesystem::path out_dir;
  std::size_t top_k = 20;  // bars per side in each plot
  TypeMode mode = TypeMode::kLemma;
};

struct ReportFiles {
  std::vector<std::filesystem::path> csvs;
  std::vector<std::filesystem::path> plots;
  std::filesystem::path summary;
  std::filesystem::path overlap;
  std::filesystem::path metadata;
};

// Per result: <A>__vs__<B>.csv with columns type,p1,p2,delta,side,rank and
// <A>__vs__<B>.svg. Also summary.csv (group,biographies,events,avg,types),
// overlap.csv and shift_meta.json.
ReportFiles emit_report(std::span<const ShiftResult> results,
                        std::span<const EventDistribution> distributions,
                        const ReportOptions& options);

// Horizontal bar plot: top-k bars per side, the total in the title.
std::string render_svg(const ShiftResult& result, std::size_t top_k);

// Reads a contributions CSV written by emit_report.
std::vector<Contribution> load_shift_csv(const std::filesystem::path& path);

// Reads the total printed into a plot by render_svg.
double plotted_total(const std::filesystem::path& svg_path);

// (focal, other) for every other group present, in group order.
std::vector<std::pair<std::string, std::string>> focal_pairs(
    std::string_view focal, const std::vector<std::string>& names);

}  // namespace bioevents::shift

#endif  // BIOEVENTS_SHIFT_SHIFT_H_
