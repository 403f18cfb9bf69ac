// Copyright 2026 The hazboost Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef HAZBOOST_MODEL_SELECTION_HPP_
#define HAZBOOST_MODEL_SELECTION_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hazboost/boosting.hpp"
#include "hazboost/functional_data.hpp"
#include "hazboost/split_candidates.hpp"

namespace hazboost {

struct CvOptions {
  std::vector<int> l_candidates{1, 2, 3, 4};
  std::vector<int> m_candidates{100, 150, 200, 250, 300};
  int folds = 5;
  double learning_rate = 0.1;
  std::uint64_t seed = 7;
  int quantiles = 10;
  QuantileWeighting weighting = QuantileWeighting::kDuration;
  unsigned threads = 1;
};

struct CvCell {
  int l = 0;
  int m = 0;
  // Held-out risk per fold; empty for skipped folds.
  std::vector<std::optional<double>> fold_risks;
  std::size_t valid_folds = 0;
  // Mean over valid folds; meaningful only when `valid`.
  double mean_risk = 0.0;
  bool valid = false;
};

struct CvReport {
  std::vector<int> l_candidates;
  std::vector<int> m_candidates;
  int folds = 0;
  // Row-major in (L, M).
  std::vector<CvCell> cells;
  int selected_l = 0;
  int selected_m = 0;
  double selected_risk = 0.0;
  std::vector<std::string> warnings;

  const CvCell& cell(int l, int m) const;
};

// Fold index in [0, folds) for every subject from a seeded shuffle; fold
// sizes differ by at most one.
std::vector<int> assign_folds(std::size_t subject_count, int folds,
                              std::uint64_t seed);

// K-fold cross-validation of the held-out likelihood risk. For each L every
// fold is fitted once with max(M) trees and scored at each M along the path.
// The split grid and F0 are derived from each training part.
CvReport kfold_cv(const Dataset& dataset, const CvOptions& options = {});

struct VariableImportance {
  std::string name;
  double raw = 0.0;
  double relative = 0.0;
  std::optional<double> ci_lower;
  std::optional<double> ci_upper;
};

struct ImportanceReport {
  // Index 0 is time, then one entry per covariate column.
  std::vector<VariableImportance> variables;
  // No split anywhere in the model: all scores are 0.
  bool degenerate = false;
};

// Total risk reduction -d of all splits on each variable, scaled so that the
// largest is 100.
ImportanceReport variable_importance(const BoostedHazardModel& model);

struct BootstrapOptions {
  FitOptions fit;
  int resamples = 50;
  std::uint64_t seed = 1;
  int quantiles = 10;
  QuantileWeighting weighting = QuantileWeighting::kDuration;
  unsigned threads = 1;
  // Redraws allowed per resample when it contains no event.
  int max_redraws = 100;
};

// Importance of a fit on the full data with 2.5/97.5 percentile intervals of
// the relative scores over subject-level bootstrap refits.
ImportanceReport bootstrap_importance(const Dataset& dataset,
                                      const BootstrapOptions& options);

// Linear-interpolation percentile of a non-empty sample, p in [0, 1].
double percentile(std::vector<double> values, double p);

}  // namespace hazboost

#endif  // HAZBOOST_MODEL_SELECTION_HPP_
