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

#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "hazboost/boosting.hpp"
#include "hazboost/numeric.hpp"

namespace hazboost {

namespace {

constexpr int kFormatVersion = 1;

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::size_t begin = 0;
  for (;;) {
    const auto tab = line.find('\t', begin);
    out.push_back(line.substr(begin, tab == std::string::npos
                                         ? std::string::npos
                                         : tab - begin));
    if (tab == std::string::npos) return out;
    begin = tab + 1;
  }
}

std::string expect_line(std::istream& in, const std::string& what) {
  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error("model: unexpected end of file, expected " + what);
  }
  return line;
}

// "key value" header line.
std::string expect_key(std::istream& in, const std::string& key) {
  const std::string line = expect_line(in, key);
  if (line.rfind(key + " ", 0) != 0) {
    throw std::runtime_error("model: expected '" + key + "', got '" + line + "'");
  }
  return line.substr(key.size() + 1);
}

std::string hex(std::uint64_t value) {
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << value;
  return out.str();
}

}  // namespace

void write_model(const BoostedHazardModel& model, std::ostream& out) {
  out << "hazboost-model " << kFormatVersion << '\n';
  out << "p " << model.schema.size() << '\n';
  for (const auto& column : model.schema.columns) {
    if (column.name.find('\t') != std::string::npos) {
      throw std::invalid_argument("column names may not contain tabs");
    }
    out << "column\t" << column.name << '\t'
        << (column.categorical() ? "categorical" : "continuous");
    for (const auto& label : column.labels) {
      if (label.find('\t') != std::string::npos) {
        throw std::invalid_argument("labels may not contain tabs");
      }
      out << '\t' << label;
    }
    out << '\n';
  }
  out << "f0 " << format_double(model.f0) << '\n';
  out << "nu " << format_double(model.nu) << '\n';
  out << "M " << model.trees.size() << '\n';
  out << "L " << model.max_splits << '\n';
  out << "grid_hash " << hex(model.grid.hash()) << '\n';
  model.grid.write(out);
  out << '\n';
  out << "risk_trace " << model.risk_trace.size();
  for (double r : model.risk_trace) out << ' ' << format_double(r);
  out << '\n';
  for (std::size_t m = 0; m < model.trees.size(); ++m) {
    out << "tree " << m << ' ' << model.trees[m].nodes().size() << '\n';
    model.trees[m].write(out, model.schema);
  }
  out << "end\n";
}

void write_model(const BoostedHazardModel& model,
                 const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_model(model, out);
}

BoostedHazardModel read_model(std::istream& in) {
  BoostedHazardModel model;
  const std::string magic = expect_key(in, "hazboost-model");
  if (parse_integer(magic) != kFormatVersion) {
    throw std::runtime_error("model: unsupported version " + magic);
  }
  const long long p = parse_integer(expect_key(in, "p"));
  if (p < 0) throw std::runtime_error("model: negative p");
  for (long long j = 0; j < p; ++j) {
    const auto fields = split_tabs(expect_line(in, "column"));
    if (fields.size() < 3 || fields[0] != "column") {
      throw std::runtime_error("model: malformed column line");
    }
    Column column;
    column.name = fields[1];
    if (fields[2] == "categorical") {
      column.kind = ColumnKind::kCategorical;
      column.labels.assign(fields.begin() + 3, fields.end());
    } else if (fields[2] != "continuous" || fields.size() != 3) {
      throw std::runtime_error("model: malformed column line");
    }
    model.schema.columns.push_back(std::move(column));
  }
  model.f0 = parse_double(expect_key(in, "f0"));
  model.nu = parse_double(expect_key(in, "nu"));
  const long long m = parse_integer(expect_key(in, "M"));
  model.max_splits = static_cast<int>(parse_integer(expect_key(in, "L")));
  const std::string grid_hash = expect_key(in, "grid_hash");
  model.grid = SplitCandidateGrid::read(in);
  if (model.grid.covariate_cuts.size() != model.schema.size()) {
    throw std::runtime_error("model: grid does not match schema");
  }
  if (hex(model.grid.hash()) != grid_hash) {
    throw std::runtime_error("model: grid hash mismatch");
  }
  {
    std::istringstream fields(expect_key(in, "risk_trace"));
    std::size_t count = 0;
    fields >> count;
    model.risk_trace.resize(count);
    for (auto& r : model.risk_trace) {
      std::string token;
      fields >> token;
      r = parse_double(token);
    }
  }
  for (long long k = 0; k < m; ++k) {
    std::istringstream fields(expect_key(in, "tree"));
    long long index = -1;
    std::size_t nodes = 0;
    fields >> index >> nodes;
    if (index != k || nodes == 0) throw std::runtime_error("model: bad tree header");
    model.trees.push_back(
        RegressionTree::read(in, nodes, model.schema, model.grid));
  }
  if (expect_line(in, "end") != "end") {
    throw std::runtime_error("model: missing end marker");
  }
  return model;
}

BoostedHazardModel read_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_model(in);
}

}  // namespace hazboost
