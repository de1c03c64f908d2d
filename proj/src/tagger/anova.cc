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

#include "bioevents/tagger/anova.h"

#include <boost/math/distributions/fisher_f.hpp>
#include <cmath>
#include <limits>

#include "bioevents/core/error.h"

namespace bioevents::tagger {

AnovaResult one_way_anova(std::span<const std::vector<double>> groups) {
  if (groups.size() < 2) {
    throw Error(ErrorCode::kInsufficientData, "ANOVA needs at least two groups");
  }
  double grand_sum = 0.0;
  std::size_t n = 0;
  for (const auto& g : groups) {
    if (g.size() < 2) {
      throw Error(ErrorCode::kInsufficientData, "every ANOVA group needs at least two values");
    }
    for (double v : g) {
      if (!std::isfinite(v)) throw Error(ErrorCode::kInvalidArgument, "non-finite ANOVA input");
      grand_sum += v;
    }
    n += g.size();
  }
  const double grand_mean = grand_sum / static_cast<double>(n);

  AnovaResult r;
  for (const auto& g : groups) {
    double mean = 0.0;
    for (double v : g) mean += v;
    mean /= static_cast<double>(g.size());
    r.ss_between += static_cast<double>(g.size()) * (mean - grand_mean) * (mean - grand_mean);
    for (double v : g) r.ss_within += (v - mean) * (v - mean);
  }
  r.df_between = static_cast<int>(groups.size()) - 1;
  r.df_within = static_cast<int>(n - groups.size());

  // Rounding noise in the sums of squares is treated as exact zero.
  const double scale = std::max(1.0, grand_mean * grand_mean * static_cast<double>(n));
  const double eps = 64.0 * std::numeric_limits<double>::epsilon() * scale;
  if (r.ss_between < eps) r.ss_between = 0.0;
  if (r.ss_within < eps) r.ss_within = 0.0;

  if (r.ss_within == 0.0) {
    r.degenerate = true;
    if (r.ss_between > 0.0) {
      r.f_statistic = std::numeric_limits<double>::infinity();
      r.p_value = 0.0;
    } else {
      r.f_statistic = 0.0;
      r.p_value = 1.0;
    }
    return r;
  }
  const double ms_between = r.ss_between / r.df_between;
  const double ms_within = r.ss_within / r.df_within;
  r.f_statistic = ms_between / ms_within;
  boost::math::fisher_f dist(r.df_between, r.df_within);
  r.p_value = boost::math::cdf(boost::math::complement(dist, r.f_statistic));
  return r;
}

AnovaResult anova_significance(const std::vector<double>& runs_a,
                               const std::vector<double>& runs_b) {
  const std::vector<double> groups[] = {runs_a, runs_b};
  return one_way_anova(groups);
}

}  // namespace bioevents::tagger
