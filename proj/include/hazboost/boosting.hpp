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

#ifndef HAZBOOST_BOOSTING_HPP_
#define HAZBOOST_BOOSTING_HPP_

#include <cstddef>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "hazboost/binned_cells.hpp"
#include "hazboost/functional_data.hpp"
#include "hazboost/split_candidates.hpp"
#include "hazboost/tree.hpp"

namespace hazboost {

// log-hazard F_M(t, x) = f0 - nu * sum_m g_m(t, x); hazard = exp(F_M).
struct BoostedHazardModel {
  Schema schema;
  SplitCandidateGrid grid;
  double f0 = 0.0;
  double nu = 0.1;
  int max_splits = 1;
  std::vector<RegressionTree> trees;
  // Training risk before the first tree and after each tree (M + 1 values).
  std::vector<double> risk_trace;

  std::size_t tree_count() const { return trees.size(); }

  double log_hazard(double t, std::span<const double> x) const;
  // Integral of the hazard along the trajectory over [0, t]; the trajectory
  // must cover [0, t).
  double cumulative_hazard(const FunctionalSample& sample, double t) const;
  LogHazard as_log_hazard() const;

  // The same model truncated to its first `m` trees.
  BoostedHazardModel prefix(std::size_t m) const;
};

// log(sum Delta_i / sum T~_i); throws std::domain_error without events.
double init_f0(const Dataset& dataset);

// (1/n) sum_i { int_0^{T~_i} e^{F(t, X_i(t))} dt - Delta_i F(T~_i, X_i(T~_i)) },
// the integral taken piecewise over epochs cut at the breakpoints of F.
double likelihood_risk(const LogHazard& log_hazard, const Dataset& dataset);

struct FitOptions {
  int num_trees = 100;
  int max_splits = 1;
  double learning_rate = 0.1;
  unsigned threads = 1;
  bool research_all_leaves = false;
};

// Called after tree m (0-based) has been added.
using TreeCallback = std::function<void(std::size_t, const RegressionTree&)>;

// Runs the boosting loop on a validated (and usually imputed) dataset with
// splits restricted to `grid`. The training risk is checked to be
// non-increasing after every tree.
BoostedHazardModel fit(const Dataset& dataset, const SplitCandidateGrid& grid,
                       const FitOptions& options,
                       const TreeCallback& on_tree = {});

double predict_hazard(const BoostedHazardModel& model, double t,
                      std::span<const double> x);

// exp(-int_0^t hazard(u, X(u)) du); throws std::out_of_range when the
// trajectory does not reach t.
double predict_survival(const BoostedHazardModel& model,
                        const FunctionalSample& sample, double t);

// Text model file: header lines, the grid, the risk trace, then the trees.
void write_model(const BoostedHazardModel& model, std::ostream& out);
void write_model(const BoostedHazardModel& model,
                 const std::filesystem::path& path);
BoostedHazardModel read_model(std::istream& in);
BoostedHazardModel read_model(const std::filesystem::path& path);

}  // namespace hazboost

#endif  // HAZBOOST_BOOSTING_HPP_
