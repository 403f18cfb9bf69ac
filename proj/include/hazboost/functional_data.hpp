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

#ifndef HAZBOOST_FUNCTIONAL_DATA_HPP_
#define HAZBOOST_FUNCTIONAL_DATA_HPP_

// Censored functional survival data: one covariate trajectory per subject,
// stored as contiguous half-open epochs [start, end) on which every
// covariate is constant (last observation carried forward).

#include <algorithm>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hazboost {

enum class ColumnKind { kContinuous, kCategorical };

struct Column {
  std::string name;
  ColumnKind kind = ColumnKind::kContinuous;
  // Dense label dictionary for categorical columns; the code of a label is
  // its index. Empty for continuous columns.
  std::vector<std::string> labels;

  bool categorical() const { return kind == ColumnKind::kCategorical; }
  // Throws std::invalid_argument naming the column for unknown labels.
  int label_code(std::string_view label) const;

  friend bool operator==(const Column&, const Column&) = default;
};

struct Schema {
  std::vector<Column> columns;

  std::size_t size() const { return columns.size(); }
  const Column& operator[](std::size_t j) const { return columns[j]; }
  std::optional<std::size_t> find(std::string_view name) const;

  static Schema continuous(const std::vector<std::string>& names);

  // Parses a categorical field (or a continuous number) into the stored
  // double representation; categorical values are label codes.
  double encode(std::size_t column, std::string_view text) const;
  std::string decode(std::size_t column, double value) const;

  // Checks that a covariate vector has p entries and valid label codes.
  void check_row(std::span<const double> values) const;

  friend bool operator==(const Schema&, const Schema&) = default;
};

struct Epoch {
  double start = 0.0;
  double end = 0.0;
  std::vector<double> values;

  double duration() const { return end - start; }
  friend bool operator==(const Epoch&, const Epoch&) = default;
};

struct FunctionalSample {
  std::string id;
  std::vector<Epoch> epochs;
  double followup = 0.0;
  bool event = false;
  // Covariate reading recorded at the follow-up time itself, if any.
  std::optional<std::vector<double>> terminal_values;

  // X(T~): the terminal reading when present, else the last epoch's values.
  std::span<const double> values_at_followup() const;
  // X(t) for 0 <= t <= followup; t == followup returns X(T~).
  std::span<const double> values_at(double t) const;

  friend bool operator==(const FunctionalSample&,
                         const FunctionalSample&) = default;
};

struct Dataset {
  Schema schema;
  std::vector<FunctionalSample> samples;

  std::size_t size() const { return samples.size(); }
  std::size_t event_count() const;
  double total_followup() const;
  Dataset subset(std::span<const std::size_t> indices) const;
};

// Load/parse failure, carrying the subject id and 1-based line number when
// they are known.
class DataError : public std::runtime_error {
 public:
  DataError(const std::string& message, std::string subject = {},
            std::size_t line = 0);
  const std::string& subject() const { return subject_; }
  std::size_t line() const { return line_; }

 private:
  std::string subject_;
  std::size_t line_;
};

// Reads the long-format CSV
//   id,time,<covariates...>,followup,event
// Covariate columns listed in `categorical` are treated as string labels
// with a dictionary inferred from the data (sorted). Columns absent from the
// header are an error.
Dataset load_dataset(const std::filesystem::path& path,
                     const std::vector<std::string>& categorical = {});
Dataset read_dataset(std::istream& in,
                     const std::vector<std::string>& categorical = {});

// Same, but against a fixed schema (e.g. the one stored with a model):
// header columns must match by name and order, and categorical columns with
// a non-empty dictionary reject labels outside it.
Dataset load_dataset(const std::filesystem::path& path, const Schema& schema);
Dataset read_dataset(std::istream& in, const Schema& schema);

void write_dataset(const Dataset& dataset, std::ostream& out);
void write_dataset(const Dataset& dataset, const std::filesystem::path& path);

// Inserts an epoch boundary halfway between the last pre-terminal
// measurement and T~, carrying the terminal reading on [midpoint, T~).
// Samples without a distinct terminal reading are returned unchanged.
FunctionalSample impute_terminal_jump(FunctionalSample sample);
Dataset impute_terminal_jumps(Dataset dataset);

struct ValidationReport {
  std::vector<std::string> issues;
  bool ok() const { return issues.empty(); }
};

ValidationReport validate(const Dataset& dataset);

// LOCF extension of a trajectory to `until` (>= followup): the last epoch is
// stretched. Used when a survival curve is needed past the observed window.
FunctionalSample extend_trajectory(const FunctionalSample& sample,
                                   double until);

// Visits the pieces of the trajectory on [0, until) after cutting every
// epoch at the sorted `cuts`: fn(start, end, values). Pieces have positive
// length.
template <typename Fn>
void for_each_piece(const FunctionalSample& sample,
                    std::span<const double> cuts, double until, Fn&& fn) {
  auto cut = std::upper_bound(cuts.begin(), cuts.end(), 0.0);
  for (const Epoch& epoch : sample.epochs) {
    if (epoch.start >= until) break;
    const double end = std::min(epoch.end, until);
    double lo = epoch.start;
    while (cut != cuts.end() && *cut <= lo) ++cut;
    while (cut != cuts.end() && *cut < end) {
      if (*cut > lo) {
        fn(lo, *cut, std::span<const double>(epoch.values));
        lo = *cut;
      }
      ++cut;
    }
    if (end > lo) fn(lo, end, std::span<const double>(epoch.values));
  }
}

}  // namespace hazboost

#endif  // HAZBOOST_FUNCTIONAL_DATA_HPP_
