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

#ifndef BIOEVENTS_TAGGER_ANOVA_H_
#define BIOEVENTS_TAGGER_ANOVA_H_

#include <span>
#include <vector>

namespace bioevents::tagger {

struct AnovaResult {
  double f_statistic = 0.0;
  double p_value = 1.0;
  double ss_between = 0.0;
  double ss_within = 0.0;
  int df_between = 0;
  int df_within = 0;
  // Zero within-group variance: F is +inf (p = 0) when the group means
  // differ, and 0 (p = 1) when they do not.
  bool degenerate = false;
};

// Standard one-way ANOVA. Throws kInsufficientData unless there are at least
// two groups of at least two values each.
AnovaResult one_way_anova(std::span<const std::vector<double>> groups);

AnovaResult anova_significance(const std::vector<double>& runs_a,
                               const std::vector<double>& runs_b);

}  // namespace bioevents::tagger

#endif  // BIOEVENTS_TAGGER_ANOVA_H_
