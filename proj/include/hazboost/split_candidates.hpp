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

#ifndef HAZBOOST_SPLIT_CANDIDATES_HPP_
#define HAZBOOST_SPLIT_CANDIDATES_HPP_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "hazboost/functional_data.hpp"

namespace hazboost {

// Axis numbering used throughout: axis 0 is time, axis j + 1 is covariate j.
inline constexpr int kTimeAxis = 0;

// Global threshold grid. A split at cut k of an ordered axis sends values
// <= cuts[k] to the left child. Bin b of an ordered axis holds the values
// with exactly b cuts strictly below them, so value <= cuts[k] iff bin <= k.
struct SplitCandidateGrid {
  std::vector<double> time_cuts;
  // One list per covariate; always empty for categorical columns.
  std::vector<std::vector<double>> covariate_cuts;
  // Dictionary size per covariate; 0 for continuous columns.
  std::vector<std::size_t> label_counts;

  std::size_t axis_count() const { return 1 + covariate_cuts.size(); }
  bool categorical(int axis) const {
    return axis > 0 && label_counts[axis - 1] > 0;
  }
  const std::vector<double>& cuts(int axis) const {
    return axis == kTimeAxis ? time_cuts : covariate_cuts[axis - 1];
  }
  std::size_t bin_count(int axis) const;
  std::uint16_t bin_of(int axis, double value) const;

  // One line per axis, shortest round-trip decimals.
  void write(std::ostream& out) const;
  static SplitCandidateGrid read(std::istream& in);
  std::string to_text() const;
  std::uint64_t hash() const;

  friend bool operator==(const SplitCandidateGrid&,
                         const SplitCandidateGrid&) = default;
};

enum class QuantileWeighting { kDuration, kUnweighted };

// Cuts at the k/num_quantiles quantiles (k = 1..num_quantiles-1) of a
// weighted multiset: the smallest observed value whose weighted CDF reaches
// k/num_quantiles. Duplicates are collapsed and the maximum observed value
// is never a cut, so both sides of every cut hold data.
std::vector<double> quantile_cuts(std::vector<std::pair<double, double>> values,
                                  int num_quantiles);

// Covariate cuts from epoch values (weighted by epoch duration unless
// `weighting` is kUnweighted); time cuts from the pooled positive epoch
// boundaries and follow-up times (unweighted).
SplitCandidateGrid build_grid(
    const Dataset& dataset, int num_quantiles = 10,
    QuantileWeighting weighting = QuantileWeighting::kDuration);

}  // namespace hazboost

#endif  // HAZBOOST_SPLIT_CANDIDATES_HPP_
