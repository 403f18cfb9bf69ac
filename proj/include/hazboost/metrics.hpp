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

#ifndef HAZBOOST_METRICS_HPP_
#define HAZBOOST_METRICS_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "hazboost/boosting.hpp"
#include "hazboost/functional_data.hpp"
#include "hazboost/simulation.hpp"

namespace hazboost {

// Root mean squared difference; throws std::invalid_argument on empty or
// mismatched inputs.
double l2_error(std::span<const double> predictions,
                std::span<const double> truths);

struct EvaluationPoint {
  std::size_t subject = 0;
  double t = 0.0;
  std::vector<double> x;
  std::optional<double> true_hazard;
};

// For every subject, `per_subject` times drawn uniformly on (0, T~_i] paired
// with X_i(t) and the true hazard of `family` (relevant covariate in column
// `relevant_column`).
std::vector<EvaluationPoint> sample_evaluation_points(
    const Dataset& dataset, const HazardFamily& family, int per_subject,
    std::uint64_t seed, std::size_t relevant_column = 0);

// Cumulative hazard of a subject over [0, t] along a trajectory covering
// [0, t).
using CumulativeHazardFn =
    std::function<double(const FunctionalSample&, double)>;

CumulativeHazardFn model_cumulative_hazard(const BoostedHazardModel& model);
CumulativeHazardFn true_cumulative_hazard(const HazardFamily& family,
                                          std::size_t relevant_column = 0);

struct AucEstimate {
  double auc = 0.0;
  std::size_t pairs = 0;
};

// Fraction of comparable pairs (i with an event before t, j still followed
// after t) in which i has the lower predicted survival at t, i.e. the larger
// cumulative hazard; ties (relative 1e-12) count one half. Event subjects'
// covariates are carried forward from T~_i to t. Throws std::domain_error
// when no pair is comparable.
AucEstimate auc_t(const CumulativeHazardFn& cumulative_hazard,
                  const Dataset& dataset, double t);
AucEstimate auc_t(const BoostedHazardModel& model, const Dataset& dataset,
                  double t);

// `points` times at the k/(points+1) empirical quantiles of the observed
// event times. Censoring at a fixed horizon puts an atom of T~ there, and
// grid points on it would have no subject left at risk.
std::vector<double> auc_time_grid(const Dataset& dataset, int points);

}  // namespace hazboost

#endif  // HAZBOOST_METRICS_HPP_
