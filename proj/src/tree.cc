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

#include "hazboost/tree.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "hazboost/numeric.hpp"
#include "hazboost/parallel.hpp"

namespace hazboost {

TimeCovariateCube TimeCovariateCube::whole_space(const Schema& schema) {
  TimeCovariateCube cube;
  cube.intervals_.resize(schema.size() + 1);
  cube.labels_.resize(schema.size() + 1);
  for (std::size_t j = 0; j < schema.size(); ++j) {
    if (schema[j].categorical()) {
      cube.labels_[j + 1].assign(schema[j].labels.size(), true);
    }
  }
  return cube;
}

bool TimeCovariateCube::contains(double t, std::span<const double> x) const {
  if (!intervals_[0].contains(t)) return false;
  for (std::size_t a = 1; a < intervals_.size(); ++a) {
    const double v = x[a - 1];
    if (!labels_[a].empty()) {
      const auto code = static_cast<std::size_t>(v);
      if (code >= labels_[a].size() || !labels_[a][code]) return false;
    } else if (!intervals_[a].contains(v)) {
      return false;
    }
  }
  return true;
}

TimeCovariateCube TimeCovariateCube::below(int axis, double threshold) const {
  TimeCovariateCube out = *this;
  out.intervals_[axis].upper = std::min(out.intervals_[axis].upper, threshold);
  return out;
}

TimeCovariateCube TimeCovariateCube::above(int axis, double threshold) const {
  TimeCovariateCube out = *this;
  out.intervals_[axis].lower = std::max(out.intervals_[axis].lower, threshold);
  return out;
}

TimeCovariateCube TimeCovariateCube::with_label(int axis, int label) const {
  TimeCovariateCube out = *this;
  auto& admissible = out.labels_[axis];
  for (std::size_t l = 0; l < admissible.size(); ++l) {
    if (static_cast<int>(l) != label) admissible[l] = false;
  }
  return out;
}

TimeCovariateCube TimeCovariateCube::without_label(int axis, int label) const {
  TimeCovariateCube out = *this;
  out.labels_[axis].at(label) = false;
  return out;
}

LogHazard LogHazard::constant(double c) {
  return {[c](double, std::span<const double>) { return c; }, {}};
}

ExposureEvents accumulate_uv(const TimeCovariateCube& region,
                             const Dataset& dataset,
                             const LogHazard& log_hazard) {
  std::vector<double> cuts = log_hazard.time_breakpoints;
  const Interval& window = region.interval(kTimeAxis);
  if (std::isfinite(window.lower)) cuts.push_back(window.lower);
  if (std::isfinite(window.upper)) cuts.push_back(window.upper);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  CompensatedSum u;
  CompensatedSum v;
  for (const auto& sample : dataset.samples) {
    for_each_piece(sample, cuts, sample.followup,
                   [&](double lo, double hi, std::span<const double> x) {
                     const double mid = 0.5 * (lo + hi);
                     if (region.contains(mid, x)) {
                       u.add(std::exp(log_hazard.value(mid, x)) * (hi - lo));
                     }
                   });
    if (sample.event &&
        region.contains(sample.followup, sample.values_at_followup())) {
      v.add(1.0);
    }
  }
  const double n = static_cast<double>(dataset.size());
  return {u.value() / n, v.value() / n};
}

double split_score(double u1, double v1, double u2, double v2) {
  if (!(u1 > 0 && v1 > 0 && u2 > 0 && v2 > 0)) {
    throw std::domain_error("split_score: U and V must be positive");
  }
  // Same value as V1(1+log r1) + V2(1+log r2) - V(1+log r) with r_k = U_k/V_k
  // and r = U/V; the constant terms cancel and each log is taken relative to
  // the merged ratio.
  const double merged = (u1 + u2) / (v1 + v2);
  return v1 * std::log((u1 / v1) / merged) + v2 * std::log((u2 / v2) / merged);
}

double leaf_value(double u, double v) {
  if (!(u > 0 && v > 0)) {
    throw std::domain_error("leaf_value: U and V must be positive");
  }
  return std::log(u / v);
}

std::optional<SplitEvaluation> best_categorical_split(
    const TimeCovariateCube& region, const Dataset& dataset,
    const LogHazard& log_hazard, std::size_t column) {
  if (column >= dataset.schema.size() || !dataset.schema[column].categorical()) {
    throw std::invalid_argument("best_categorical_split: column " +
                                std::to_string(column) + " is not categorical");
  }
  const int axis = static_cast<int>(column + 1);
  const auto& admissible = region.labels(axis);
  std::optional<SplitEvaluation> best;
  for (std::size_t label = 0; label < admissible.size(); ++label) {
    if (!admissible[label]) continue;
    const int code = static_cast<int>(label);
    const auto side1 =
        accumulate_uv(region.with_label(axis, code), dataset, log_hazard);
    const auto side2 =
        accumulate_uv(region.without_label(axis, code), dataset, log_hazard);
    if (!(side1.u > 0 && side1.v > 0 && side2.u > 0 && side2.v > 0)) continue;
    const double d = split_score(side1.u, side1.v, side2.u, side2.v);
    if (best && !(d < best->d)) continue;
    SplitEvaluation s;
    s.axis = axis;
    s.label = code;
    s.u1 = side1.u;
    s.v1 = side1.v;
    s.u2 = side2.u;
    s.v2 = side2.v;
    s.gamma1 = leaf_value(s.u1, s.v1);
    s.gamma2 = leaf_value(s.u2, s.v2);
    s.d = d;
    best = s;
  }
  return best;
}

RegressionTree::RegressionTree() : nodes_(1) {}

int RegressionTree::leaf_of(double t, std::span<const double> x) const {
  int id = 0;
  while (!nodes_[id].leaf()) {
    const TreeNode& node = nodes_[id];
    const double v = node.axis == kTimeAxis ? t : x[node.axis - 1];
    const bool left =
        node.label >= 0 ? v == node.label : v <= node.threshold;
    id = left ? node.left : node.right;
  }
  return id;
}

double RegressionTree::evaluate_bins(std::span<const std::uint16_t> bins) const {
  int id = 0;
  while (!nodes_[id].leaf()) {
    const TreeNode& node = nodes_[id];
    const int b = bins[node.axis];
    const bool left = node.label >= 0 ? b == node.label : b <= node.cut;
    id = left ? node.left : node.right;
  }
  return nodes_[id].value;
}

int RegressionTree::split(const SplitEvaluation& s) {
  if (s.leaf < 0 || s.leaf >= static_cast<int>(nodes_.size()) ||
      !nodes_[s.leaf].leaf()) {
    throw std::invalid_argument("RegressionTree::split: not a leaf");
  }
  const int left = static_cast<int>(nodes_.size());
  TreeNode& node = nodes_[s.leaf];
  node.axis = s.axis;
  node.threshold = s.threshold;
  node.label = s.label;
  node.cut = s.cut;
  node.left = left;
  node.right = left + 1;
  node.value = s.d;
  TreeNode child;
  child.value = s.gamma1;
  nodes_.push_back(child);
  child.value = s.gamma2;
  nodes_.push_back(child);
  return left;
}

std::vector<std::pair<TimeCovariateCube, double>> RegressionTree::leaf_regions(
    const Schema& schema) const {
  std::vector<std::pair<TimeCovariateCube, double>> out;
  std::function<void(int, const TimeCovariateCube&)> visit =
      [&](int id, const TimeCovariateCube& cube) {
        const TreeNode& node = nodes_[id];
        if (node.leaf()) {
          out.emplace_back(cube, node.value);
          return;
        }
        if (node.label >= 0) {
          visit(node.left, cube.with_label(node.axis, node.label));
          visit(node.right, cube.without_label(node.axis, node.label));
        } else {
          visit(node.left, cube.below(node.axis, node.threshold));
          visit(node.right, cube.above(node.axis, node.threshold));
        }
      };
  visit(0, TimeCovariateCube::whole_space(schema));
  return out;
}

std::vector<double> RegressionTree::time_thresholds() const {
  std::vector<double> out;
  for (const auto& node : nodes_) {
    if (!node.leaf() && node.axis == kTimeAxis) out.push_back(node.threshold);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void RegressionTree::write(std::ostream& out, const Schema& schema) const {
  int next_id = 0;
  std::function<void(int)> visit = [&](int id) {
    const TreeNode& node = nodes_[id];
    out << next_id++ << ',';
    if (node.leaf()) {
      out << "leaf,,," << format_double(node.value) << '\n';
      return;
    }
    out << "split," << node.axis << ',';
    if (node.label >= 0) {
      out << schema.columns[node.axis - 1].labels[node.label];
    } else {
      out << format_double(node.threshold);
    }
    out << ',' << format_double(node.value) << '\n';
    visit(node.left);
    visit(node.right);
  };
  visit(0);
}

RegressionTree RegressionTree::read(std::istream& in, std::size_t node_count,
                                    const Schema& schema,
                                    const SplitCandidateGrid& grid) {
  struct Line {
    bool leaf;
    int axis;
    std::string split_value;
    double value;
  };
  std::vector<Line> lines;
  lines.reserve(node_count);
  std::string text;
  for (std::size_t k = 0; k < node_count; ++k) {
    if (!std::getline(in, text)) throw std::runtime_error("tree: truncated");
    std::vector<std::string> f;
    std::stringstream row(text);
    std::string field;
    while (std::getline(row, field, ',')) f.push_back(field);
    if (text.ends_with(',')) f.emplace_back();
    if (f.size() != 5) {
      throw std::runtime_error("tree: malformed node line '" + text + "'");
    }
    if (parse_integer(f[0]) != static_cast<long long>(k)) {
      throw std::runtime_error("tree: node ids must be preorder positions");
    }
    Line line{f[1] == "leaf", -1, f[3], parse_double(f[4])};
    if (!line.leaf) {
      if (f[1] != "split") throw std::runtime_error("tree: bad node kind");
      line.axis = static_cast<int>(parse_integer(f[2]));
      if (line.axis < 0 || line.axis > static_cast<int>(schema.size())) {
        throw std::runtime_error("tree: axis out of range");
      }
    }
    lines.push_back(std::move(line));
  }

  RegressionTree tree;
  tree.nodes_.clear();
  std::size_t pos = 0;
  std::function<int()> build = [&]() -> int {
    if (pos >= lines.size()) throw std::runtime_error("tree: incomplete");
    const Line& line = lines[pos++];
    const int id = static_cast<int>(tree.nodes_.size());
    tree.nodes_.emplace_back();
    if (line.leaf) {
      tree.nodes_[id].value = line.value;
      return id;
    }
    TreeNode node;
    node.axis = line.axis;
    node.value = line.value;
    if (line.axis > 0 && schema[line.axis - 1].categorical()) {
      node.label = schema[line.axis - 1].label_code(line.split_value);
    } else {
      node.threshold = parse_double(line.split_value);
      const auto& cuts = grid.cuts(line.axis);
      const auto it = std::lower_bound(cuts.begin(), cuts.end(), node.threshold);
      if (it == cuts.end() || *it != node.threshold) {
        throw std::runtime_error("tree: threshold " + line.split_value +
                                 " is not on the model grid");
      }
      node.cut = static_cast<std::uint16_t>(it - cuts.begin());
    }
    node.left = build();
    node.right = build();
    tree.nodes_[id] = node;
    return id;
  };
  build();
  if (pos != lines.size()) throw std::runtime_error("tree: trailing nodes");
  return tree;
}

namespace {

struct Bin {
  long double u = 0;
  long double v = 0;
};

class Grower {
 public:
  Grower(const BinnedCells& cells, const SplitCandidateGrid& grid,
         std::span<const double> log_hazard, const GrowOptions& options)
      : cells_(cells), grid_(grid), options_(options) {
    if (log_hazard.size() != cells.size()) {
      throw std::invalid_argument("grow_tree: one log-hazard value per cell");
    }
    if (cells.axis_count() != grid.axis_count()) {
      throw std::invalid_argument("grow_tree: cells and grid disagree");
    }
    const double n = static_cast<double>(cells.subject_count());
    u_.resize(cells.size());
    v_.resize(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
      u_[c] = cells.exposure(c) * std::exp(log_hazard[c]) / n;
      v_[c] = cells.events(c) / n;
    }
    offsets_.resize(grid.axis_count() + 1, 0);
    for (std::size_t a = 0; a < grid.axis_count(); ++a) {
      offsets_[a + 1] = offsets_[a] + grid.bin_count(static_cast<int>(a));
    }
    order_.resize(cells.size());
    std::iota(order_.begin(), order_.end(), 0u);
  }

  GrownTree run() {
    GrownTree out;
    Leaf root{0, 0, order_.size(), std::nullopt};
    {
      long double u = 0, v = 0;
      for (std::size_t c = 0; c < cells_.size(); ++c) {
        u += u_[c];
        v += v_[c];
      }
      out.root = {static_cast<double>(u), static_cast<double>(v)};
    }
    leaves_.push_back(root);
    search(leaves_.back());

    for (int s = 0; s < options_.max_splits; ++s) {
      std::size_t chosen = leaves_.size();
      for (std::size_t k = 0; k < leaves_.size(); ++k) {
        if (!leaves_[k].best) continue;
        if (chosen == leaves_.size() || leaves_[k].best->d < leaves_[chosen].best->d) {
          chosen = k;
        }
      }
      if (chosen == leaves_.size()) break;
      const Leaf parent = leaves_[chosen];
      const SplitEvaluation split = *parent.best;
      const auto mid = std::stable_partition(
          order_.begin() + static_cast<std::ptrdiff_t>(parent.begin),
          order_.begin() + static_cast<std::ptrdiff_t>(parent.end),
          [&](std::uint32_t c) { return goes_left(split, cells_.bins(c)); });
      const std::size_t split_at = static_cast<std::size_t>(mid - order_.begin());
      const int left = out.tree.split(split);
      out.splits.push_back(split);
      leaves_.erase(leaves_.begin() + static_cast<std::ptrdiff_t>(chosen));
      leaves_.push_back({left, parent.begin, split_at, std::nullopt});
      leaves_.push_back({left + 1, split_at, parent.end, std::nullopt});
      if (s + 1 == options_.max_splits) break;
      if (options_.research_all_leaves) {
        for (auto& leaf : leaves_) search(leaf);
      } else {
        search(leaves_[leaves_.size() - 2]);
        search(leaves_.back());
      }
    }

    out.cell_values.assign(cells_.size(), 0.0);
    for (const auto& leaf : leaves_) {
      const double value = out.tree.nodes()[leaf.node].value;
      for (std::size_t k = leaf.begin; k < leaf.end; ++k) {
        out.cell_values[order_[k]] = value;
      }
    }
    return out;
  }

 private:
  struct Leaf {
    int node;
    std::size_t begin;
    std::size_t end;
    std::optional<SplitEvaluation> best;
  };

  static bool goes_left(const SplitEvaluation& s,
                        std::span<const std::uint16_t> bins) {
    const int b = bins[s.axis];
    return s.categorical() ? b == s.label : b <= s.cut;
  }

  void fill_histogram(const Leaf& leaf, std::size_t axis_begin,
                      std::size_t axis_end) {
    for (std::size_t k = leaf.begin; k < leaf.end; ++k) {
      const std::uint32_t c = order_[k];
      const auto bins = cells_.bins(c);
      const double u = u_[c];
      const double v = v_[c];
      for (std::size_t a = axis_begin; a < axis_end; ++a) {
        Bin& bin = histogram_[offsets_[a] + bins[a]];
        bin.u += u;
        bin.v += v;
      }
    }
  }

  void consider(SplitEvaluation& candidate, std::optional<SplitEvaluation>& best,
                long double u1, long double v1, long double u2,
                long double v2) const {
    candidate.u1 = static_cast<double>(u1);
    candidate.v1 = static_cast<double>(v1);
    candidate.u2 = static_cast<double>(u2);
    candidate.v2 = static_cast<double>(v2);
    if (!(candidate.u1 > 0 && candidate.v1 > 0 && candidate.u2 > 0 &&
          candidate.v2 > 0)) {
      return;
    }
    candidate.d = split_score(candidate.u1, candidate.v1, candidate.u2,
                              candidate.v2);
    if (!(candidate.d < 0)) return;
    if (best && !(candidate.d < best->d)) return;
    candidate.gamma1 = leaf_value(candidate.u1, candidate.v1);
    candidate.gamma2 = leaf_value(candidate.u2, candidate.v2);
    best = candidate;
  }

  void search(Leaf& leaf) {
    leaf.best.reset();
    histogram_.assign(offsets_.back(), Bin{});
    const std::size_t axes = grid_.axis_count();
    const std::size_t work = (leaf.end - leaf.begin) * axes;
    const unsigned threads = options_.threads;
    if (threads > 1 && axes > 1 && work > (1u << 16)) {
      const std::size_t chunks = std::min<std::size_t>(threads, axes);
      parallel_for(chunks, threads, [&](std::size_t k) {
        fill_histogram(leaf, k * axes / chunks, (k + 1) * axes / chunks);
      });
    } else {
      fill_histogram(leaf, 0, axes);
    }

    std::vector<long double> suffix_u;
    std::vector<long double> suffix_v;
    for (std::size_t a = 0; a < axes; ++a) {
      const int axis = static_cast<int>(a);
      const Bin* h = histogram_.data() + offsets_[a];
      const std::size_t nb = offsets_[a + 1] - offsets_[a];
      SplitEvaluation candidate;
      candidate.leaf = leaf.node;
      candidate.axis = axis;
      if (grid_.categorical(axis)) {
        for (std::size_t label = 0; label < nb; ++label) {
          long double u2 = 0, v2 = 0;
          for (std::size_t other = 0; other < nb; ++other) {
            if (other == label) continue;
            u2 += h[other].u;
            v2 += h[other].v;
          }
          candidate.label = static_cast<int>(label);
          consider(candidate, leaf.best, h[label].u, h[label].v, u2, v2);
        }
        continue;
      }
      suffix_u.assign(nb + 1, 0);
      suffix_v.assign(nb + 1, 0);
      for (std::size_t b = nb; b-- > 0;) {
        suffix_u[b] = suffix_u[b + 1] + h[b].u;
        suffix_v[b] = suffix_v[b + 1] + h[b].v;
      }
      const auto& cuts = grid_.cuts(axis);
      long double u1 = 0, v1 = 0;
      for (std::size_t k = 0; k + 1 < nb; ++k) {
        u1 += h[k].u;
        v1 += h[k].v;
        candidate.cut = static_cast<std::uint16_t>(k);
        candidate.threshold = cuts[k];
        consider(candidate, leaf.best, u1, v1, suffix_u[k + 1],
                 suffix_v[k + 1]);
      }
    }
  }

  const BinnedCells& cells_;
  const SplitCandidateGrid& grid_;
  GrowOptions options_;
  std::vector<double> u_;
  std::vector<double> v_;
  std::vector<std::size_t> offsets_;
  std::vector<std::uint32_t> order_;
  std::vector<Bin> histogram_;
  std::vector<Leaf> leaves_;
};

}  // namespace

GrownTree grow_tree(const BinnedCells& cells, const SplitCandidateGrid& grid,
                    std::span<const double> log_hazard,
                    const GrowOptions& options) {
  if (options.max_splits < 1) {
    throw std::invalid_argument("grow_tree: max_splits must be >= 1");
  }
  return Grower(cells, grid, log_hazard, options).run();
}

GrownTree grow_tree(const Dataset& dataset, const SplitCandidateGrid& grid,
                    const LogHazard& log_hazard, int max_splits) {
  const BinnedCells cells = BinnedCells::build(dataset, grid);
  std::vector<double> f(cells.size());
  for (std::size_t c = 0; c < cells.size(); ++c) {
    f[c] = log_hazard.value(cells.representative_time(c),
                            cells.representative_values(c));
  }
  GrowOptions options;
  options.max_splits = max_splits;
  return grow_tree(cells, grid, f, options);
}

}  // namespace hazboost
