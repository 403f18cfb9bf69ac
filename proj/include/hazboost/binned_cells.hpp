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

#ifndef HAZBOOST_BINNED_CELLS_HPP_
#define HAZBOOST_BINNED_CELLS_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "hazboost/functional_data.hpp"
#include "hazboost/split_candidates.hpp"

namespace hazboost {

// Training view of a dataset on a fixed grid. Every trajectory is cut at
// the grid's time cuts; each resulting piece lies in a single grid cell,
// and pieces (and event points) falling in the same cell are pooled. Any
// function that only splits at grid cuts is constant on a cell, so the
// likelihood risk and all (U, V) statistics are exact sums over cells.
class BinnedCells {
 public:
  static BinnedCells build(const Dataset& dataset,
                           const SplitCandidateGrid& grid);

  std::size_t size() const { return exposure_.size(); }
  std::size_t axis_count() const { return axes_; }
  std::size_t subject_count() const { return subjects_; }

  std::span<const std::uint16_t> bins(std::size_t cell) const {
    return {bins_.data() + cell * axes_, axes_};
  }
  // Total at-risk time spent in the cell.
  double exposure(std::size_t cell) const { return exposure_[cell]; }
  // Number of observed events whose (T~, X(T~)) falls in the cell.
  double events(std::size_t cell) const { return events_[cell]; }

  // Some point of the cell (first one encountered), for evaluating
  // functions given in (t, x) form.
  double representative_time(std::size_t cell) const { return rep_time_[cell]; }
  std::span<const double> representative_values(std::size_t cell) const {
    return {rep_values_.data() + cell * covariates_, covariates_};
  }

  // (1/n) sum_cells [exposure * e^F - events * F] for per-cell log-hazard F.
  double risk(std::span<const double> log_hazard) const;

 private:
  std::size_t axes_ = 0;
  std::size_t covariates_ = 0;
  std::size_t subjects_ = 0;
  std::vector<std::uint16_t> bins_;
  std::vector<double> exposure_;
  std::vector<double> events_;
  std::vector<double> rep_time_;
  std::vector<double> rep_values_;
};

}  // namespace hazboost

#endif  // HAZBOOST_BINNED_CELLS_HPP_
