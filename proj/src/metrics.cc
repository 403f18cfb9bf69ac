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

#include "hazboost/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "hazboost/numeric.hpp"

namespace hazboost {

namespace {

constexpr double kTieTolerance = 1e-12;

}  // namespace

double l2_error(std::span<const double> predictions,
                std::span<const double> truths) {
  if (predictions.size() != truths.size()) {
    throw std::invalid_argument("l2_error: length mismatch");
  }
  if (predictions.empty()) throw std::invalid_argument("l2_error: no points");
  CompensatedSum sum;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const double diff = predictions[i] - truths[i];
    sum.add(diff * diff);
  }
  return std::sqrt(sum.value() / static_cast<double>(predictions.size()));
}

std::vector<EvaluationPoint> sample_evaluation_points(
    const Dataset& dataset, const HazardFamily& family, int per_subject,
    std::uint64_t seed, std::size_t relevant_column) {
  if (per_subject < 1) {
    throw std::invalid_argument("per-subject point count must be >= 1");
  }
  std::vector<EvaluationPoint> points;
  points.reserve(dataset.size() * static_cast<std::size_t>(per_subject));
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const FunctionalSample& sample = dataset.samples[i];
    std::mt19937_64 rng = subject_rng(seed, i);
    for (int k = 0; k < per_subject; ++k) {
      EvaluationPoint point;
      point.subject = i;
      point.t = sample.followup * (1.0 - uniform(rng));
      const auto x = sample.values_at(point.t);
      point.x.assign(x.begin(), x.end());
      point.true_hazard = family.value(point.t, point.x.at(relevant_column));
      points.push_back(std::move(point));
    }
  }
  return points;
}

CumulativeHazardFn model_cumulative_hazard(const BoostedHazardModel& model) {
  return [&model](const FunctionalSample& sample, double t) {
    return model.cumulative_hazard(sample, t);
  };
}

CumulativeHazardFn true_cumulative_hazard(const HazardFamily& family,
                                          std::size_t relevant_column) {
  return [family, relevant_column](const FunctionalSample& sample, double t) {
    CompensatedSum total;
    for (const Epoch& epoch : sample.epochs) {
      if (epoch.start >= t) break;
      total.add(family.integrate(epoch.start, std::min(epoch.end, t),
                                 epoch.values.at(relevant_column)));
    }
    return total.value();
  };
}

AucEstimate auc_t(const CumulativeHazardFn& cumulative_hazard,
                  const Dataset& dataset, double t) {
  std::vector<double> cases;
  std::vector<double> controls;
  for (const auto& sample : dataset.samples) {
    if (sample.event && sample.followup < t) {
      cases.push_back(cumulative_hazard(extend_trajectory(sample, t), t));
    } else if (sample.followup > t) {
      controls.push_back(cumulative_hazard(sample, t));
    }
  }
  const std::size_t pairs = cases.size() * controls.size();
  if (pairs == 0) {
    throw std::domain_error("AUC undefined at t: no comparable pairs");
  }
  std::sort(controls.begin(), controls.end());
  // Case i beats control j when its cumulative hazard is larger; within the
  // relative tolerance band the pair is a tie.
  long double score = 0;
  for (const double c : cases) {
    const double low = c * (1.0 - kTieTolerance);
    const double high = c / (1.0 - kTieTolerance);
    const auto below = std::lower_bound(controls.begin(), controls.end(), low);
    const auto through = std::upper_bound(below, controls.end(), high);
    score += static_cast<long double>(below - controls.begin());
    score += 0.5L * static_cast<long double>(through - below);
  }
  return {static_cast<double>(score / static_cast<long double>(pairs)), pairs};
}

AucEstimate auc_t(const BoostedHazardModel& model, const Dataset& dataset,
                  double t) {
  return auc_t(model_cumulative_hazard(model), dataset, t);
}

std::vector<double> auc_time_grid(const Dataset& dataset, int points) {
  if (points < 1) throw std::invalid_argument("auc grid needs >= 1 point");
  std::vector<double> times;
  times.reserve(dataset.size());
  for (const auto& s : dataset.samples) {
    if (s.event) times.push_back(s.followup);
  }
  if (times.empty()) throw std::invalid_argument("auc grid: no observed events");
  std::sort(times.begin(), times.end());
  std::vector<double> grid;
  const std::size_t n = times.size();
  for (int k = 1; k <= points; ++k) {
    // Smallest observed value whose ECDF reaches k/(points+1).
    const std::size_t rank =
        (static_cast<std::size_t>(k) * n + static_cast<std::size_t>(points)) /
        static_cast<std::size_t>(points + 1);
    grid.push_back(times[std::clamp<std::size_t>(rank, 1, n) - 1]);
  }
  return grid;
}

}  // namespace hazboost
