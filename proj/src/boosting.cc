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

#include "hazboost/boosting.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <spdlog/spdlog.h>

#include "hazboost/numeric.hpp"

namespace hazboost {

double BoostedHazardModel::log_hazard(double t,
                                      std::span<const double> x) const {
  double sum = 0.0;
  for (const auto& tree : trees) sum += tree.evaluate(t, x);
  return f0 - nu * sum;
}

double BoostedHazardModel::cumulative_hazard(const FunctionalSample& sample,
                                             double t) const {
  if (t < 0) throw std::out_of_range("cumulative_hazard: negative time");
  if (sample.epochs.empty() || t > sample.epochs.back().end) {
    throw std::out_of_range("trajectory does not reach t");
  }
  CompensatedSum total;
  for_each_piece(sample, grid.time_cuts, t,
                 [&](double lo, double hi, std::span<const double> x) {
                   total.add(std::exp(log_hazard(0.5 * (lo + hi), x)) *
                             (hi - lo));
                 });
  return total.value();
}

LogHazard BoostedHazardModel::as_log_hazard() const {
  return {[this](double t, std::span<const double> x) {
            return log_hazard(t, x);
          },
          grid.time_cuts};
}

BoostedHazardModel BoostedHazardModel::prefix(std::size_t m) const {
  BoostedHazardModel out = *this;
  if (m < out.trees.size()) {
    out.trees.resize(m);
    out.risk_trace.resize(std::min(out.risk_trace.size(), m + 1));
  }
  return out;
}

double init_f0(const Dataset& dataset) {
  const std::size_t events = dataset.event_count();
  if (events == 0) throw std::domain_error("F0 undefined: no observed events");
  return std::log(static_cast<double>(events) / dataset.total_followup());
}

double likelihood_risk(const LogHazard& log_hazard, const Dataset& dataset) {
  std::vector<double> cuts = log_hazard.time_breakpoints;
  std::sort(cuts.begin(), cuts.end());
  CompensatedSum total;
  for (const auto& sample : dataset.samples) {
    for_each_piece(sample, cuts, sample.followup,
                   [&](double lo, double hi, std::span<const double> x) {
                     total.add(std::exp(log_hazard.value(0.5 * (lo + hi), x)) *
                               (hi - lo));
                   });
    if (sample.event) {
      total.add(-log_hazard.value(sample.followup, sample.values_at_followup()));
    }
  }
  return total.value() / static_cast<double>(dataset.size());
}

BoostedHazardModel fit(const Dataset& dataset, const SplitCandidateGrid& grid,
                       const FitOptions& options, const TreeCallback& on_tree) {
  if (options.num_trees < 1) throw std::invalid_argument("fit: M must be >= 1");
  if (options.max_splits < 1) throw std::invalid_argument("fit: L must be >= 1");
  if (!(options.learning_rate > 0 && options.learning_rate <= 1)) {
    throw std::invalid_argument("fit: learning rate must be in (0, 1]");
  }
  BoostedHazardModel model;
  model.schema = dataset.schema;
  model.grid = grid;
  model.f0 = init_f0(dataset);
  model.nu = options.learning_rate;
  model.max_splits = options.max_splits;

  const BinnedCells cells = BinnedCells::build(dataset, grid);
  // Per-cell running sum of tree values, so that the training log-hazard is
  // computed with exactly the arithmetic of BoostedHazardModel::log_hazard.
  std::vector<double> tree_sum(cells.size(), 0.0);
  std::vector<double> f(cells.size(), model.f0);
  model.risk_trace.push_back(cells.risk(f));

  GrowOptions grow;
  grow.max_splits = options.max_splits;
  grow.research_all_leaves = options.research_all_leaves;
  grow.threads = options.threads;
  std::size_t zero_trees = 0;
  for (int m = 0; m < options.num_trees; ++m) {
    GrownTree grown = grow_tree(cells, grid, f, grow);
    if (grown.splits.empty()) ++zero_trees;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      tree_sum[c] += grown.cell_values[c];
      f[c] = model.f0 - model.nu * tree_sum[c];
    }
    const double risk = cells.risk(f);
    const double previous = model.risk_trace.back();
    if (risk > previous + 1e-12 * std::max(1.0, std::abs(previous))) {
      throw std::logic_error("fit: training risk increased at iteration " +
                             std::to_string(m));
    }
    model.risk_trace.push_back(risk);
    model.trees.push_back(std::move(grown.tree));
    if (on_tree) on_tree(static_cast<std::size_t>(m), model.trees.back());
  }
  if (zero_trees > 0) {
    spdlog::info("fit: {} of {} trees admitted no split", zero_trees,
                 options.num_trees);
  }
  return model;
}

double predict_hazard(const BoostedHazardModel& model, double t,
                      std::span<const double> x) {
  model.schema.check_row(x);
  return std::exp(model.log_hazard(t, x));
}

double predict_survival(const BoostedHazardModel& model,
                        const FunctionalSample& sample, double t) {
  if (t == 0) return 1.0;
  return std::exp(-model.cumulative_hazard(sample, t));
}

}  // namespace hazboost
