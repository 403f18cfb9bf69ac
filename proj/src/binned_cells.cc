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

#include "hazboost/binned_cells.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace hazboost {

BinnedCells BinnedCells::build(const Dataset& dataset,
                               const SplitCandidateGrid& grid) {
  const std::size_t p = dataset.schema.size();
  if (grid.covariate_cuts.size() != p) {
    throw std::invalid_argument("grid does not match dataset schema");
  }
  BinnedCells cells;
  cells.axes_ = grid.axis_count();
  cells.covariates_ = p;
  cells.subjects_ = dataset.size();

  std::vector<long double> exposure;
  std::unordered_map<std::string, std::size_t> index_of;
  std::vector<std::uint16_t> key_bins(cells.axes_);
  std::string key(cells.axes_ * sizeof(std::uint16_t), '\0');

  auto cell_for = [&](double t, std::span<const double> values) {
    key_bins[0] = grid.bin_of(kTimeAxis, t);
    for (std::size_t j = 0; j < p; ++j) {
      key_bins[j + 1] = grid.bin_of(static_cast<int>(j + 1), values[j]);
    }
    std::memcpy(key.data(), key_bins.data(), key.size());
    auto [it, inserted] = index_of.try_emplace(key, cells.exposure_.size());
    if (inserted) {
      cells.bins_.insert(cells.bins_.end(), key_bins.begin(), key_bins.end());
      cells.exposure_.push_back(0.0);
      cells.events_.push_back(0.0);
      exposure.push_back(0.0L);
      cells.rep_time_.push_back(t);
      cells.rep_values_.insert(cells.rep_values_.end(), values.begin(),
                               values.end());
    }
    return it->second;
  };

  for (const auto& sample : dataset.samples) {
    for_each_piece(sample, grid.time_cuts, sample.followup,
                   [&](double lo, double hi, std::span<const double> values) {
                     const std::size_t c = cell_for(0.5 * (lo + hi), values);
                     exposure[c] += hi - lo;
                   });
    if (sample.event) {
      const std::size_t c =
          cell_for(sample.followup, sample.values_at_followup());
      cells.events_[c] += 1.0;
    }
  }
  for (std::size_t c = 0; c < exposure.size(); ++c) {
    cells.exposure_[c] = static_cast<double>(exposure[c]);
  }
  return cells;
}

double BinnedCells::risk(std::span<const double> log_hazard) const {
  long double total = 0;
  for (std::size_t c = 0; c < size(); ++c) {
    const double f = log_hazard[c];
    if (exposure_[c] > 0) total += exposure_[c] * std::exp(f);
    if (events_[c] > 0) total -= events_[c] * f;
  }
  return static_cast<double>(total / static_cast<long double>(subjects_));
}

}  // namespace hazboost
