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

#include "hazboost/split_candidates.hpp"

#include <algorithm>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "hazboost/numeric.hpp"

namespace hazboost {

std::size_t SplitCandidateGrid::bin_count(int axis) const {
  if (categorical(axis)) return label_counts[axis - 1];
  return cuts(axis).size() + 1;
}

std::uint16_t SplitCandidateGrid::bin_of(int axis, double value) const {
  if (categorical(axis)) return static_cast<std::uint16_t>(value);
  const auto& c = cuts(axis);
  return static_cast<std::uint16_t>(
      std::lower_bound(c.begin(), c.end(), value) - c.begin());
}

void SplitCandidateGrid::write(std::ostream& out) const {
  out << "time " << time_cuts.size();
  for (double c : time_cuts) out << ' ' << format_double(c);
  out << '\n';
  for (std::size_t j = 0; j < covariate_cuts.size(); ++j) {
    if (label_counts[j] > 0) {
      out << "labels " << label_counts[j] << '\n';
      continue;
    }
    out << "cuts " << covariate_cuts[j].size();
    for (double c : covariate_cuts[j]) out << ' ' << format_double(c);
    out << '\n';
  }
}

SplitCandidateGrid SplitCandidateGrid::read(std::istream& in) {
  SplitCandidateGrid grid;
  auto read_list = [&](std::istringstream& fields) {
    std::size_t count = 0;
    fields >> count;
    std::vector<double> cuts(count);
    for (auto& c : cuts) {
      std::string token;
      if (!(fields >> token)) throw std::runtime_error("grid: truncated line");
      c = parse_double(token);
    }
    return cuts;
  };
  std::string line;
  bool have_time = false;
  while (std::getline(in, line)) {
    if (trim(line).empty()) break;
    std::istringstream fields(line);
    std::string kind;
    fields >> kind;
    if (kind == "time" && !have_time) {
      grid.time_cuts = read_list(fields);
      have_time = true;
    } else if (kind == "cuts" && have_time) {
      grid.covariate_cuts.push_back(read_list(fields));
      grid.label_counts.push_back(0);
    } else if (kind == "labels" && have_time) {
      std::size_t count = 0;
      fields >> count;
      grid.covariate_cuts.emplace_back();
      grid.label_counts.push_back(count);
    } else {
      throw std::runtime_error("grid: unexpected line '" + line + "'");
    }
  }
  if (!have_time) throw std::runtime_error("grid: missing time line");
  return grid;
}

std::string SplitCandidateGrid::to_text() const {
  std::ostringstream out;
  write(out);
  return out.str();
}

std::uint64_t SplitCandidateGrid::hash() const { return fnv1a_64(to_text()); }

std::vector<double> quantile_cuts(std::vector<std::pair<double, double>> values,
                                  int num_quantiles) {
  if (num_quantiles < 1) {
    throw std::invalid_argument("num_quantiles must be positive");
  }
  std::vector<double> cuts;
  if (values.empty()) return cuts;
  std::sort(values.begin(), values.end());
  // Merge equal values so the CDF is evaluated at distinct points only.
  std::vector<std::pair<double, long double>> merged;
  for (const auto& [v, w] : values) {
    if (!merged.empty() && merged.back().first == v) {
      merged.back().second += w;
    } else {
      merged.emplace_back(v, w);
    }
  }
  long double total = 0;
  for (const auto& [v, w] : merged) total += w;
  if (!(total > 0)) return cuts;
  const double max_value = merged.back().first;
  long double cumulative = 0;
  std::size_t pos = 0;
  for (int k = 1; k < num_quantiles; ++k) {
    // Smallest value with cumulative * q >= k * total.
    while (pos < merged.size() &&
           (cumulative + merged[pos].second) * num_quantiles < k * total) {
      cumulative += merged[pos].second;
      ++pos;
    }
    if (pos >= merged.size()) break;
    const double cut = merged[pos].first;
    if (cut >= max_value) break;
    if (cuts.empty() || cuts.back() < cut) cuts.push_back(cut);
  }
  return cuts;
}

SplitCandidateGrid build_grid(const Dataset& dataset, int num_quantiles,
                              QuantileWeighting weighting) {
  if (num_quantiles < 1 || num_quantiles > 65535) {
    throw std::invalid_argument("num_quantiles must be in [1, 65535]");
  }
  const std::size_t p = dataset.schema.size();
  SplitCandidateGrid grid;
  grid.covariate_cuts.resize(p);
  grid.label_counts.resize(p, 0);

  std::vector<std::pair<double, double>> times;
  for (const auto& sample : dataset.samples) {
    for (const auto& epoch : sample.epochs) {
      if (epoch.start > 0) times.emplace_back(epoch.start, 1.0);
    }
    times.emplace_back(sample.followup, 1.0);
  }
  grid.time_cuts = quantile_cuts(std::move(times), num_quantiles);

  for (std::size_t j = 0; j < p; ++j) {
    const Column& column = dataset.schema[j];
    if (column.categorical()) {
      if (column.labels.size() > 65535) {
        throw std::invalid_argument("too many labels in column " + column.name);
      }
      grid.label_counts[j] = column.labels.size();
      continue;
    }
    std::vector<std::pair<double, double>> values;
    for (const auto& sample : dataset.samples) {
      for (const auto& epoch : sample.epochs) {
        const double w = weighting == QuantileWeighting::kDuration
                             ? epoch.duration()
                             : 1.0;
        values.emplace_back(epoch.values[j], w);
      }
    }
    grid.covariate_cuts[j] = quantile_cuts(std::move(values), num_quantiles);
  }
  return grid;
}

}  // namespace hazboost
