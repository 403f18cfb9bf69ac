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

#include "hazboost/model_selection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

#include <spdlog/spdlog.h>

#include "hazboost/binned_cells.hpp"
#include "hazboost/numeric.hpp"
#include "hazboost/parallel.hpp"
#include "hazboost/simulation.hpp"

namespace hazboost {

namespace {

std::vector<int> sorted_unique(std::vector<int> values, const char* what) {
  if (values.empty()) {
    throw std::invalid_argument(std::string(what) + ": no candidates");
  }
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  if (values.front() < 1) {
    throw std::invalid_argument(std::string(what) + ": candidates must be >= 1");
  }
  return values;
}

// Held-out risk after each M in `checkpoints` along one boosting path.
std::vector<double> path_risks(const Dataset& train, const Dataset& held_out,
                               const CvOptions& options, int l,
                               const std::vector<int>& checkpoints) {
  const SplitCandidateGrid grid =
      build_grid(train, options.quantiles, options.weighting);
  const BinnedCells cells = BinnedCells::build(held_out, grid);
  std::vector<double> tree_sum(cells.size(), 0.0);
  std::vector<double> f(cells.size());
  std::vector<double> risks;
  risks.reserve(checkpoints.size());
  std::size_t next = 0;
  const double f0 = init_f0(train);

  FitOptions fit_options;
  fit_options.num_trees = checkpoints.back();
  fit_options.max_splits = l;
  fit_options.learning_rate = options.learning_rate;
  fit_options.threads = 1;
  fit(train, grid, fit_options,
      [&](std::size_t m, const RegressionTree& tree) {
        for (std::size_t c = 0; c < cells.size(); ++c) {
          tree_sum[c] += tree.evaluate_bins(cells.bins(c));
        }
        if (next < checkpoints.size() &&
            static_cast<int>(m + 1) == checkpoints[next]) {
          for (std::size_t c = 0; c < cells.size(); ++c) {
            f[c] = f0 - options.learning_rate * tree_sum[c];
          }
          risks.push_back(cells.risk(f));
          ++next;
        }
      });
  return risks;
}

}  // namespace

const CvCell& CvReport::cell(int l, int m) const {
  for (const auto& c : cells) {
    if (c.l == l && c.m == m) return c;
  }
  throw std::out_of_range("no CV cell for L=" + std::to_string(l) +
                          ", M=" + std::to_string(m));
}

std::vector<int> assign_folds(std::size_t subject_count, int folds,
                              std::uint64_t seed) {
  if (folds < 2) throw std::invalid_argument("need at least 2 folds");
  if (subject_count < static_cast<std::size_t>(folds)) {
    throw std::invalid_argument("fewer subjects than folds");
  }
  std::vector<std::size_t> order(subject_count);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<int> fold(subject_count);
  for (std::size_t p = 0; p < subject_count; ++p) {
    fold[order[p]] = static_cast<int>(p % static_cast<std::size_t>(folds));
  }
  return fold;
}

CvReport kfold_cv(const Dataset& dataset, const CvOptions& options) {
  CvReport report;
  report.l_candidates = sorted_unique(options.l_candidates, "L");
  report.m_candidates = sorted_unique(options.m_candidates, "M");
  report.folds = options.folds;
  const std::size_t k = static_cast<std::size_t>(options.folds);
  const std::vector<int> fold_of =
      assign_folds(dataset.size(), options.folds, options.seed);

  std::vector<Dataset> train(k);
  std::vector<Dataset> held_out(k);
  std::vector<bool> usable(k, true);
  for (std::size_t f = 0; f < k; ++f) {
    std::vector<std::size_t> in;
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < dataset.size(); ++i) {
      (static_cast<std::size_t>(fold_of[i]) == f ? out : in).push_back(i);
    }
    train[f] = dataset.subset(in);
    held_out[f] = dataset.subset(out);
    if (train[f].event_count() == 0) {
      usable[f] = false;
      report.warnings.push_back("fold " + std::to_string(f) +
                                " skipped: no events in its training part");
      spdlog::warn("cv: {}", report.warnings.back());
    }
  }

  const std::size_t nl = report.l_candidates.size();
  const std::size_t nm = report.m_candidates.size();
  // results[l * k + f] holds the held-out risks at every M.
  std::vector<std::vector<double>> results(nl * k);
  parallel_for(nl * k, options.threads, [&](std::size_t job) {
    const std::size_t f = job % k;
    if (!usable[f]) return;
    results[job] = path_risks(train[f], held_out[f], options,
                              report.l_candidates[job / k],
                              report.m_candidates);
  });

  const std::size_t valid_folds =
      static_cast<std::size_t>(std::count(usable.begin(), usable.end(), true));
  bool any = false;
  for (std::size_t li = 0; li < nl; ++li) {
    for (std::size_t mi = 0; mi < nm; ++mi) {
      CvCell cell;
      cell.l = report.l_candidates[li];
      cell.m = report.m_candidates[mi];
      cell.fold_risks.resize(k);
      CompensatedSum sum;
      for (std::size_t f = 0; f < k; ++f) {
        if (!usable[f]) continue;
        cell.fold_risks[f] = results[li * k + f][mi];
        sum.add(results[li * k + f][mi]);
      }
      cell.valid_folds = valid_folds;
      cell.valid = 2 * valid_folds >= k && valid_folds > 0;
      if (cell.valid) {
        cell.mean_risk = sum.value() / static_cast<double>(valid_folds);
        // Strict improvement only, so ties stay with smaller L, then M.
        if (!any || cell.mean_risk < report.selected_risk) {
          report.selected_l = cell.l;
          report.selected_m = cell.m;
          report.selected_risk = cell.mean_risk;
          any = true;
        }
      }
      report.cells.push_back(std::move(cell));
    }
  }
  if (!any) {
    throw std::runtime_error("cv: fewer than K/2 folds have training events");
  }
  return report;
}

ImportanceReport variable_importance(const BoostedHazardModel& model) {
  const std::size_t axes = model.schema.size() + 1;
  std::vector<CompensatedSum> sums(axes);
  for (const auto& tree : model.trees) {
    for (const auto& node : tree.nodes()) {
      if (node.axis < 0) continue;
      sums.at(static_cast<std::size_t>(node.axis)).add(-node.value);
    }
  }
  ImportanceReport report;
  report.variables.resize(axes);
  double largest = 0.0;
  for (std::size_t a = 0; a < axes; ++a) {
    auto& v = report.variables[a];
    v.name = a == 0 ? std::string("time") : model.schema[a - 1].name;
    v.raw = std::max(0.0, sums[a].value());
    largest = std::max(largest, v.raw);
  }
  report.degenerate = !(largest > 0.0);
  if (!report.degenerate) {
    for (auto& v : report.variables) v.relative = 100.0 * (v.raw / largest);
  }
  return report;
}

double percentile(std::vector<double> values, double p) {
  if (values.empty()) throw std::invalid_argument("percentile of empty set");
  std::sort(values.begin(), values.end());
  const double pos = p * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

ImportanceReport bootstrap_importance(const Dataset& dataset,
                                      const BootstrapOptions& options) {
  if (options.resamples < 2) {
    throw std::invalid_argument("bootstrap needs at least 2 resamples");
  }
  if (dataset.size() == 0) throw std::invalid_argument("no samples");
  FitOptions fit_options = options.fit;
  ImportanceReport report = variable_importance(
      fit(dataset, build_grid(dataset, options.quantiles, options.weighting),
          fit_options));

  const auto b_count = static_cast<std::size_t>(options.resamples);
  std::vector<std::vector<double>> scores(b_count);
  fit_options.threads = 1;
  parallel_for(b_count, options.threads, [&](std::size_t b) {
    std::mt19937_64 rng = subject_rng(options.seed, b);
    std::uniform_int_distribution<std::size_t> pick(0, dataset.size() - 1);
    std::vector<std::size_t> draw(dataset.size());
    for (int attempt = 0;; ++attempt) {
      if (attempt > options.max_redraws) {
        throw std::runtime_error("bootstrap: resample " + std::to_string(b) +
                                 " has no events after repeated redraws");
      }
      for (auto& d : draw) d = pick(rng);
      const bool has_event = std::any_of(draw.begin(), draw.end(), [&](auto i) {
        return dataset.samples[i].event;
      });
      if (has_event) break;
    }
    const Dataset resample = dataset.subset(draw);
    const ImportanceReport r = variable_importance(
        fit(resample,
            build_grid(resample, options.quantiles, options.weighting),
            fit_options));
    for (const auto& v : r.variables) scores[b].push_back(v.relative);
  });

  for (std::size_t a = 0; a < report.variables.size(); ++a) {
    std::vector<double> column;
    column.reserve(b_count);
    for (const auto& s : scores) column.push_back(s[a]);
    report.variables[a].ci_lower = percentile(column, 0.025);
    report.variables[a].ci_upper = percentile(column, 0.975);
  }
  return report;
}

}  // namespace hazboost
