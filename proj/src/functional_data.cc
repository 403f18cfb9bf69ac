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

#include "hazboost/functional_data.hpp"

#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_map>

#include "hazboost/numeric.hpp"

namespace hazboost {

int Column::label_code(std::string_view label) const {
  const auto it = std::find(labels.begin(), labels.end(), trim(label));
  if (it == labels.end()) {
    throw std::invalid_argument("unknown label '" + std::string(trim(label)) +
                                "' in categorical column '" + name + "'");
  }
  return static_cast<int>(it - labels.begin());
}

std::optional<std::size_t> Schema::find(std::string_view name) const {
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (columns[j].name == name) return j;
  }
  return std::nullopt;
}

Schema Schema::continuous(const std::vector<std::string>& names) {
  Schema schema;
  for (const auto& name : names) {
    schema.columns.push_back({name, ColumnKind::kContinuous, {}});
  }
  return schema;
}

double Schema::encode(std::size_t column, std::string_view text) const {
  const Column& c = columns.at(column);
  if (c.categorical()) return static_cast<double>(c.label_code(text));
  return parse_double(text);
}

std::string Schema::decode(std::size_t column, double value) const {
  const Column& c = columns.at(column);
  if (c.categorical()) return c.labels.at(static_cast<std::size_t>(value));
  return format_double(value);
}

void Schema::check_row(std::span<const double> values) const {
  if (values.size() != columns.size()) {
    throw std::invalid_argument("expected " + std::to_string(columns.size()) +
                                " covariates, got " +
                                std::to_string(values.size()));
  }
  for (std::size_t j = 0; j < columns.size(); ++j) {
    const Column& c = columns[j];
    if (!c.categorical()) continue;
    const double v = values[j];
    if (v < 0 || v != std::floor(v) ||
        v >= static_cast<double>(c.labels.size())) {
      throw std::invalid_argument("unknown label code " + format_double(v) +
                                  " in categorical column '" + c.name + "'");
    }
  }
}

std::span<const double> FunctionalSample::values_at_followup() const {
  if (terminal_values) return *terminal_values;
  return epochs.back().values;
}

std::span<const double> FunctionalSample::values_at(double t) const {
  if (t < 0 || epochs.empty()) {
    throw std::out_of_range("values_at: time outside trajectory");
  }
  if (t >= followup) return values_at_followup();
  auto it = std::upper_bound(
      epochs.begin(), epochs.end(), t,
      [](double time, const Epoch& e) { return time < e.start; });
  return std::prev(it)->values;
}

std::size_t Dataset::event_count() const {
  return static_cast<std::size_t>(
      std::count_if(samples.begin(), samples.end(),
                    [](const FunctionalSample& s) { return s.event; }));
}

double Dataset::total_followup() const {
  CompensatedSum total;
  for (const auto& s : samples) total.add(s.followup);
  return total.value();
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
  Dataset out;
  out.schema = schema;
  out.samples.reserve(indices.size());
  for (const std::size_t i : indices) out.samples.push_back(samples.at(i));
  return out;
}

namespace {

std::string located(const std::string& message, const std::string& subject,
                    std::size_t line) {
  std::string out = message;
  if (!subject.empty()) out += " (subject " + subject + ")";
  if (line > 0) out += " at line " + std::to_string(line);
  return out;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t begin = 0;
  for (;;) {
    const auto comma = line.find(',', begin);
    fields.emplace_back(trim(std::string_view(line).substr(
        begin, comma == std::string::npos ? std::string::npos
                                          : comma - begin)));
    if (comma == std::string::npos) break;
    begin = comma + 1;
  }
  return fields;
}

struct RawRow {
  std::size_t line;
  std::vector<std::string> fields;
};

struct Measurement {
  std::size_t line;
  double time;
  std::vector<double> values;
};

struct Terminal {
  std::size_t line;
  double followup;
  bool event;
  std::optional<std::vector<double>> values;
};

struct SubjectRows {
  std::string id;
  std::vector<Measurement> measurements;
  std::optional<Terminal> terminal;
};

// Reads header + rows. When `schema` has no columns the covariate columns
// are taken from the header.
Dataset read_impl(std::istream& in, Schema schema,
                  const std::vector<std::string>& categorical) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) {
      header = split_fields(line);
      break;
    }
  }
  if (header.empty()) throw DataError("no samples");
  if (!header.empty() && header[0].size() >= 3 &&
      header[0].compare(0, 3, "\xEF\xBB\xBF") == 0) {
    header[0] = header[0].substr(3);
  }
  const std::size_t width = header.size();
  if (width < 4 || header[0] != "id" || header[1] != "time" ||
      header[width - 2] != "followup" || header[width - 1] != "event") {
    throw DataError(
        "header must be: id,time,<covariates...>,followup,event", {}, 1);
  }
  const std::size_t p = width - 4;
  if (schema.columns.empty()) {
    for (std::size_t j = 0; j < p; ++j) {
      const std::string& name = header[2 + j];
      const bool is_cat = std::find(categorical.begin(), categorical.end(),
                                    name) != categorical.end();
      schema.columns.push_back(
          {name, is_cat ? ColumnKind::kCategorical : ColumnKind::kContinuous,
           {}});
    }
    for (const auto& name : categorical) {
      if (!schema.find(name)) {
        throw DataError("categorical column '" + name + "' not in header");
      }
    }
  } else {
    if (schema.size() != p) {
      throw DataError("header has " + std::to_string(p) +
                      " covariates, schema expects " +
                      std::to_string(schema.size()));
    }
    for (std::size_t j = 0; j < p; ++j) {
      if (schema.columns[j].name != header[2 + j]) {
        throw DataError("header column '" + header[2 + j] +
                        "' does not match schema column '" +
                        schema.columns[j].name + "'");
      }
    }
  }

  std::vector<RawRow> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto fields = split_fields(line);
    if (fields.size() != width) {
      const std::string id = fields.empty() ? std::string() : fields[0];
      throw DataError(located("malformed row: expected " +
                                  std::to_string(width) + " fields, got " +
                                  std::to_string(fields.size()),
                              id, line_no),
                      id, line_no);
    }
    if (fields[0].empty()) {
      throw DataError(located("malformed row: empty id", {}, line_no), {},
                      line_no);
    }
    rows.push_back({line_no, std::move(fields)});
  }
  if (rows.empty()) throw DataError("no samples");

  // Infer label dictionaries that the schema leaves open.
  for (std::size_t j = 0; j < p; ++j) {
    Column& column = schema.columns[j];
    if (!column.categorical() || !column.labels.empty()) continue;
    std::set<std::string> labels;
    for (const auto& row : rows) {
      if (!row.fields[2 + j].empty()) labels.insert(row.fields[2 + j]);
    }
    column.labels.assign(labels.begin(), labels.end());
  }

  std::vector<SubjectRows> subjects;
  std::unordered_map<std::string, std::size_t> index_of;
  for (const auto& row : rows) {
    const std::string& id = row.fields[0];
    auto [it, inserted] = index_of.try_emplace(id, subjects.size());
    if (inserted) subjects.push_back({id, {}, std::nullopt});
    SubjectRows& subject = subjects[it->second];
    const auto& f = row.fields;
    auto fail = [&](const std::string& message) -> DataError {
      return DataError(located(message, id, row.line), id, row.line);
    };

    std::size_t present = 0;
    for (std::size_t j = 0; j < p; ++j) present += !f[2 + j].empty();
    std::vector<double> values;
    if (present == p) {
      values.resize(p);
      for (std::size_t j = 0; j < p; ++j) {
        try {
          values[j] = schema.encode(j, f[2 + j]);
        } catch (const std::invalid_argument& e) {
          if (schema.columns[j].categorical()) throw fail(e.what());
          throw fail(std::string("malformed row: ") + e.what());
        }
      }
    } else if (present != 0) {
      throw fail("malformed row: covariates partially missing");
    }

    const bool has_followup = !f[width - 2].empty();
    const bool has_event = !f[width - 1].empty();
    if (has_followup != has_event) {
      throw fail("malformed row: followup and event must appear together");
    }
    if (has_followup) {
      if (subject.terminal) throw fail("more than one terminal row");
      Terminal terminal{row.line, 0.0, false, std::nullopt};
      try {
        terminal.followup = parse_double(f[width - 2]);
      } catch (const std::invalid_argument& e) {
        throw fail(std::string("malformed followup: ") + e.what());
      }
      if (f[width - 1] == "1") {
        terminal.event = true;
      } else if (f[width - 1] != "0") {
        throw fail("malformed event indicator '" + f[width - 1] +
                   "' (expected 0 or 1)");
      }
      if (!(terminal.followup > 0) || !std::isfinite(terminal.followup)) {
        throw fail("followup must be positive and finite");
      }
      if (!f[1].empty()) {
        double t = 0;
        try {
          t = parse_double(f[1]);
        } catch (const std::invalid_argument& e) {
          throw fail(std::string("malformed time: ") + e.what());
        }
        if (t != terminal.followup) {
          throw fail("terminal row time differs from followup");
        }
      }
      if (present == p && p > 0) terminal.values = std::move(values);
      subject.terminal = std::move(terminal);
    } else {
      if (f[1].empty()) throw fail("malformed row: measurement without time");
      if (present != p) throw fail("malformed row: measurement without covariates");
      double t = 0;
      try {
        t = parse_double(f[1]);
      } catch (const std::invalid_argument& e) {
        throw fail(std::string("malformed time: ") + e.what());
      }
      if (!std::isfinite(t)) throw fail("malformed time");
      if (!subject.measurements.empty() &&
          !(t > subject.measurements.back().time)) {
        throw fail("non-monotone times within subject");
      }
      subject.measurements.push_back({row.line, t, std::move(values)});
    }
  }

  Dataset dataset;
  dataset.schema = std::move(schema);
  dataset.samples.reserve(subjects.size());
  for (auto& subject : subjects) {
    if (!subject.terminal) {
      throw DataError(located("missing terminal row", subject.id, 0),
                      subject.id);
    }
    const Terminal& terminal = *subject.terminal;
    if (subject.measurements.empty()) {
      throw DataError(located("subject with zero epochs", subject.id,
                              terminal.line),
                      subject.id, terminal.line);
    }
    const Measurement& first = subject.measurements.front();
    if (first.time != 0.0) {
      throw DataError(
          located("first measurement must be at time 0", subject.id,
                  first.line),
          subject.id, first.line);
    }
    const Measurement& last = subject.measurements.back();
    if (!(last.time < terminal.followup)) {
      throw DataError(
          located("measurement at or after followup", subject.id, last.line),
          subject.id, last.line);
    }
    FunctionalSample sample;
    sample.id = subject.id;
    sample.followup = terminal.followup;
    sample.event = terminal.event;
    sample.terminal_values = terminal.values;
    auto& ms = subject.measurements;
    sample.epochs.reserve(ms.size());
    for (std::size_t k = 0; k < ms.size(); ++k) {
      const double end =
          k + 1 < ms.size() ? ms[k + 1].time : terminal.followup;
      sample.epochs.push_back({ms[k].time, end, std::move(ms[k].values)});
    }
    dataset.samples.push_back(std::move(sample));
  }
  return dataset;
}

}  // namespace

DataError::DataError(const std::string& message, std::string subject,
                     std::size_t line)
    : std::runtime_error(message),
      subject_(std::move(subject)),
      line_(line) {}

Dataset read_dataset(std::istream& in,
                     const std::vector<std::string>& categorical) {
  return read_impl(in, Schema{}, categorical);
}

Dataset read_dataset(std::istream& in, const Schema& schema) {
  if (schema.columns.empty()) return read_impl(in, Schema{}, {});
  return read_impl(in, schema, {});
}

Dataset load_dataset(const std::filesystem::path& path,
                     const std::vector<std::string>& categorical) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  return read_dataset(in, categorical);
}

Dataset load_dataset(const std::filesystem::path& path, const Schema& schema) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  return read_dataset(in, schema);
}

void write_dataset(const Dataset& dataset, std::ostream& out) {
  const std::size_t p = dataset.schema.size();
  out << "id,time";
  for (const auto& column : dataset.schema.columns) out << ',' << column.name;
  out << ",followup,event\n";
  for (const auto& sample : dataset.samples) {
    for (const auto& epoch : sample.epochs) {
      out << sample.id << ',' << format_double(epoch.start);
      for (std::size_t j = 0; j < p; ++j) {
        out << ',' << dataset.schema.decode(j, epoch.values[j]);
      }
      out << ",,\n";
    }
    out << sample.id << ',' << format_double(sample.followup);
    for (std::size_t j = 0; j < p; ++j) {
      out << ',';
      if (sample.terminal_values) {
        out << dataset.schema.decode(j, (*sample.terminal_values)[j]);
      }
    }
    out << ',' << format_double(sample.followup) << ','
        << (sample.event ? 1 : 0) << '\n';
  }
}

void write_dataset(const Dataset& dataset, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  write_dataset(dataset, out);
}

FunctionalSample impute_terminal_jump(FunctionalSample sample) {
  if (!sample.terminal_values || sample.epochs.empty()) return sample;
  Epoch& last = sample.epochs.back();
  if (*sample.terminal_values == last.values) return sample;
  const double midpoint = last.start + 0.5 * (sample.followup - last.start);
  if (!(midpoint > last.start && midpoint < sample.followup)) return sample;
  last.end = midpoint;
  sample.epochs.push_back({midpoint, sample.followup, *sample.terminal_values});
  return sample;
}

Dataset impute_terminal_jumps(Dataset dataset) {
  for (auto& sample : dataset.samples) {
    sample = impute_terminal_jump(std::move(sample));
  }
  return dataset;
}

ValidationReport validate(const Dataset& dataset) {
  ValidationReport report;
  auto add = [&](const std::string& message) {
    report.issues.push_back(message);
  };
  if (dataset.samples.empty()) add("no samples");
  for (const auto& s : dataset.samples) {
    const std::string who = "subject " + s.id;
    if (!(s.followup > 0)) {
      add("followup <= 0 at " + who);
    }
    if (s.epochs.empty()) {
      add("no epochs at " + who);
      continue;
    }
    if (s.epochs.front().start != 0.0) {
      add("trajectory does not start at 0 at " + who);
    }
    for (std::size_t k = 0; k < s.epochs.size(); ++k) {
      const Epoch& e = s.epochs[k];
      if (!(e.start < e.end)) {
        add("empty or reversed epoch [" + format_double(e.start) + ", " +
            format_double(e.end) + ") at " + who);
      }
      try {
        dataset.schema.check_row(e.values);
      } catch (const std::invalid_argument& err) {
        add(std::string(err.what()) + " at " + who);
      }
      if (k + 1 < s.epochs.size()) {
        const double next = s.epochs[k + 1].start;
        if (e.end < next) {
          add("gap at " + who + " between " + format_double(e.end) + " and " +
              format_double(next));
        } else if (e.end > next) {
          add("overlap at " + who + " between " + format_double(next) +
              " and " + format_double(e.end));
        }
      }
    }
    if (s.epochs.back().end != s.followup) {
      add("last epoch ends at " + format_double(s.epochs.back().end) +
          " but followup is " + format_double(s.followup) + " at " + who);
    }
    if (s.terminal_values) {
      try {
        dataset.schema.check_row(*s.terminal_values);
      } catch (const std::invalid_argument& err) {
        add(std::string(err.what()) + " in terminal reading at " + who);
      }
    }
  }
  if (!dataset.samples.empty() && dataset.event_count() == 0) {
    add("no observed events; F0 undefined");
  }
  return report;
}

FunctionalSample extend_trajectory(const FunctionalSample& sample,
                                   double until) {
  FunctionalSample out = sample;
  if (until <= sample.followup) return out;
  if (out.terminal_values && *out.terminal_values != out.epochs.back().values) {
    out.epochs.push_back({out.followup, until, *out.terminal_values});
  } else {
    out.epochs.back().end = until;
  }
  out.followup = until;
  out.event = false;
  out.terminal_values.reset();
  return out;
}

}  // namespace hazboost
