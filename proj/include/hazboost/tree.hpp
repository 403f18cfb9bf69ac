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

#ifndef HAZBOOST_TREE_HPP_
#define HAZBOOST_TREE_HPP_

// Regression trees over (time, covariates) grown by exact minimisation of
// the likelihood risk.
//
// For a leaf region A and the current log-hazard F the two sufficient
// statistics are
//   U = (1/n) sum_i int_0^{T~_i} e^{F(t, X_i(t))} 1{(t, X_i(t)) in A} dt
//   V = (1/n) sum_i Delta_i 1{(T~_i, X_i(T~_i)) in A}
// The leaf value log(U/V) minimises e^{-g} U + g V, and replacing a leaf by
// two optimally valued children changes the risk by
//   d = V1 (1 + log(U1/V1)) + V2 (1 + log(U2/V2)) - V (1 + log(U/V)) <= 0.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "hazboost/binned_cells.hpp"
#include "hazboost/functional_data.hpp"
#include "hazboost/split_candidates.hpp"

namespace hazboost {

// Half-open interval (lower, upper].
struct Interval {
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();

  bool contains(double v) const { return lower < v && v <= upper; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

// Axis-aligned region of (t, x^1..x^p): an interval on time and on every
// continuous covariate, a set of admissible labels on every categorical one.
class TimeCovariateCube {
 public:
  static TimeCovariateCube whole_space(const Schema& schema);

  bool contains(double t, std::span<const double> x) const;

  const Interval& interval(int axis) const { return intervals_[axis]; }
  // Admissible labels of a categorical axis (empty for ordered axes).
  const std::vector<bool>& labels(int axis) const { return labels_[axis]; }

  // Sub-cubes on either side of `threshold` on an ordered axis.
  TimeCovariateCube below(int axis, double threshold) const;
  TimeCovariateCube above(int axis, double threshold) const;
  // Sub-cubes {x = label} and {x != label} on a categorical axis.
  TimeCovariateCube with_label(int axis, int label) const;
  TimeCovariateCube without_label(int axis, int label) const;

  std::size_t axis_count() const { return intervals_.size(); }

  friend bool operator==(const TimeCovariateCube&,
                         const TimeCovariateCube&) = default;

 private:
  std::vector<Interval> intervals_;
  std::vector<std::vector<bool>> labels_;
};

// A log-hazard function together with the times at which it may change
// along a trajectory; between consecutive breakpoints (and within an epoch)
// it must be constant.
struct LogHazard {
  std::function<double(double, std::span<const double>)> value;
  std::vector<double> time_breakpoints;

  static LogHazard constant(double c);
};

struct ExposureEvents {
  double u = 0.0;
  double v = 0.0;
};

// Direct evaluation of (U, V) for one region by walking every trajectory.
ExposureEvents accumulate_uv(const TimeCovariateCube& region,
                             const Dataset& dataset,
                             const LogHazard& log_hazard);

// Risk change of a split; requires all four statistics positive.
double split_score(double u1, double v1, double u2, double v2);

// log(U/V); throws std::domain_error unless U > 0 and V > 0.
double leaf_value(double u, double v);

struct SplitEvaluation {
  int leaf = -1;       // node id of the leaf being split
  int axis = kTimeAxis;
  double threshold = 0.0;  // ordered axes: left child is value <= threshold
  int label = -1;          // categorical axes: left child is value == label
  std::uint16_t cut = 0;   // grid cut index (ordered axes)
  double u1 = 0.0, v1 = 0.0, u2 = 0.0, v2 = 0.0;
  double gamma1 = 0.0, gamma2 = 0.0;
  double d = 0.0;

  bool categorical() const { return label >= 0; }
};

// One-vs-rest search over the labels of categorical covariate `column`
// inside `region`. Returns the singleton with the smallest score among
// candidates with positive U and V on both sides (ties go to the lower
// label code), or nothing.
std::optional<SplitEvaluation> best_categorical_split(
    const TimeCovariateCube& region, const Dataset& dataset,
    const LogHazard& log_hazard, std::size_t column);

struct TreeNode {
  int axis = -1;  // -1 marks a leaf
  double threshold = 0.0;
  int label = -1;
  std::uint16_t cut = 0;
  int left = -1;
  int right = -1;
  // Leaf: the tree value on the leaf. Internal node: the split score d.
  double value = 0.0;

  bool leaf() const { return axis < 0; }
};

class RegressionTree {
 public:
  // A single root leaf with value 0.
  RegressionTree();

  const std::vector<TreeNode>& nodes() const { return nodes_; }
  bool zero() const { return nodes_.size() == 1 && nodes_[0].value == 0.0; }
  std::size_t split_count() const { return (nodes_.size() - 1) / 2; }

  int leaf_of(double t, std::span<const double> x) const;
  double evaluate(double t, std::span<const double> x) const {
    return nodes_[leaf_of(t, x)].value;
  }
  // Evaluation on grid bins (see SplitCandidateGrid).
  double evaluate_bins(std::span<const std::uint16_t> bins) const;

  // Replaces leaf split.leaf by two children valued gamma1 / gamma2.
  // Returns the node id of the left child; the right child follows it.
  int split(const SplitEvaluation& split);

  // Leaf regions in preorder with their values.
  std::vector<std::pair<TimeCovariateCube, double>> leaf_regions(
      const Schema& schema) const;

  // Distinct time thresholds used by the tree, sorted.
  std::vector<double> time_thresholds() const;

  // Preorder, one node per line: node_id,kind,axis,threshold|label,value
  void write(std::ostream& out, const Schema& schema) const;
  // Reads `node_count` lines written by write(); grid cut indices are
  // recovered from `grid`.
  static RegressionTree read(std::istream& in, std::size_t node_count,
                             const Schema& schema,
                             const SplitCandidateGrid& grid);

 private:
  std::vector<TreeNode> nodes_;
};

struct GrowOptions {
  int max_splits = 1;
  // Re-search every leaf after each split instead of only the two new ones.
  bool research_all_leaves = false;
  unsigned threads = 1;
};

struct GrownTree {
  RegressionTree tree;
  // Accepted splits in order.
  std::vector<SplitEvaluation> splits;
  // Root statistics under the input log-hazard.
  ExposureEvents root;
  // Tree value on every cell.
  std::vector<double> cell_values;
};

// Best-first growth: starting from the zero tree, repeatedly applies the
// split with the smallest score over all leaves, axes and grid cuts while
// that score is negative, up to max_splits times. Ties go to the earlier
// leaf, then the lower axis, then the lower threshold / label.
GrownTree grow_tree(const BinnedCells& cells, const SplitCandidateGrid& grid,
                    std::span<const double> log_hazard,
                    const GrowOptions& options);

// Convenience form on raw data; `log_hazard` must be constant on every cell
// of `grid`.
GrownTree grow_tree(const Dataset& dataset, const SplitCandidateGrid& grid,
                    const LogHazard& log_hazard, int max_splits);

}  // namespace hazboost

#endif  // HAZBOOST_TREE_HPP_
