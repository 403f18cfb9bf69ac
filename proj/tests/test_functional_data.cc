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

#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "hazboost/functional_data.hpp"
#include "test_support.hpp"

namespace hazboost {
namespace {

using testing::random_dataset;

Dataset parse(const std::string& text,
              const std::vector<std::string>& categorical = {}) {
  std::istringstream in(text);
  return read_dataset(in, categorical);
}

std::string load_error(const std::string& text, DataError* out = nullptr) {
  try {
    parse(text);
  } catch (const DataError& e) {
    if (out) *out = e;
    return e.what();
  }
  return "";
}

TEST(LoadDataset, BuildsLocfEpochs) {
  const Dataset d = parse(
      "id,time,x,followup,event\n"
      "1,0,0.3,,\n"
      "1,1.0,0.8,,\n"
      "1,,,2.0,0\n");
  ASSERT_EQ(d.size(), 1u);
  const auto& s = d.samples[0];
  ASSERT_EQ(s.epochs.size(), 2u);
  EXPECT_EQ(s.epochs[0], (Epoch{0.0, 1.0, {0.3}}));
  EXPECT_EQ(s.epochs[1], (Epoch{1.0, 2.0, {0.8}}));
  EXPECT_EQ(s.followup, 2.0);
  EXPECT_FALSE(s.event);
  EXPECT_FALSE(s.terminal_values.has_value());
}

TEST(LoadDataset, EmptyFileHasNoSamples) {
  EXPECT_NE(load_error("").find("no samples"), std::string::npos);
  EXPECT_NE(load_error("id,time,x,followup,event\n").find("no samples"),
            std::string::npos);
}

TEST(LoadDataset, TwoSubjectsOneEpochEach) {
  const Dataset d = parse(
      "id,time,x,followup,event\n"
      "a,0,1,,\n"
      "b,0,2,,\n"
      "a,,,1.5,1\n"
      "b,,,2.5,0\n");
  ASSERT_EQ(d.size(), 2u);
  EXPECT_EQ(d.samples[0].epochs.size(), 1u);
  EXPECT_EQ(d.samples[1].epochs.size(), 1u);
  EXPECT_EQ(d.samples[1].epochs[0], (Epoch{0.0, 2.5, {2.0}}));
  EXPECT_EQ(d.event_count(), 1u);
}

TEST(LoadDataset, ReportsSubjectAndLine) {
  DataError e("");
  EXPECT_NE(load_error("id,time,x,followup,event\n"
                       "7,0,1,,\n"
                       "7,0.5,1,,\n"
                       "7,0.4,1,,\n"
                       "7,,,1,1\n",
                       &e)
                .find("non-monotone"),
            std::string::npos);
  EXPECT_EQ(e.subject(), "7");
  EXPECT_EQ(e.line(), 4u);

  EXPECT_NE(load_error("id,time,x,followup,event\n"
                       "3,0,1\n",
                       &e)
                .find("malformed row"),
            std::string::npos);
  EXPECT_EQ(e.line(), 2u);

  EXPECT_NE(load_error("id,time,x,followup,event\n"
                       "3,0,abc,,\n3,,,1,1\n",
                       &e)
                .find("malformed"),
            std::string::npos);

  EXPECT_NE(load_error("id,time,x,followup,event\n"
                       "9,,,1,1\n",
                       &e)
                .find("zero epochs"),
            std::string::npos);
  EXPECT_EQ(e.subject(), "9");

  EXPECT_NE(load_error("id,time,x,followup,event\n9,0,1,,\n")
                .find("missing terminal row"),
            std::string::npos);
  EXPECT_NE(load_error("id,time,x,followup,event\n9,0,1,,\n9,,,1,2\n")
                .find("event indicator"),
            std::string::npos);
  EXPECT_NE(load_error("id,time,x,followup,event\n9,0.1,1,,\n9,,,1,1\n")
                .find("time 0"),
            std::string::npos);
}

TEST(LoadDataset, UnknownCategoricalLabelAgainstSchema) {
  Schema schema;
  schema.columns.push_back({"g", ColumnKind::kCategorical, {"a", "b"}});
  std::istringstream in(
      "id,time,g,followup,event\n1,0,a,,\n1,0.5,c,,\n1,,,1,1\n");
  try {
    read_dataset(in, schema);
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("'g'"), std::string::npos) << e.what();
    EXPECT_EQ(e.subject(), "1");
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(LoadDataset, InfersSortedLabelDictionary) {
  const Dataset d = parse(
      "id,time,g,followup,event\n1,0,zeta,,\n1,0.5,alpha,,\n1,,,1,1\n",
      {"g"});
  ASSERT_TRUE(d.schema[0].categorical());
  EXPECT_EQ(d.schema[0].labels, (std::vector<std::string>{"alpha", "zeta"}));
  EXPECT_EQ(d.samples[0].epochs[0].values[0], 1.0);
}

TEST(Imputation, MidpointJump) {
  const Dataset d = parse(
      "id,time,x,followup,event\n"
      "1,0,0.3,,\n"
      "1,1,0.8,,\n"
      "1,2,0.9,2,1\n");
  const FunctionalSample s = impute_terminal_jump(d.samples[0]);
  ASSERT_EQ(s.epochs.size(), 3u);
  EXPECT_EQ(s.epochs[0], (Epoch{0.0, 1.0, {0.3}}));
  EXPECT_EQ(s.epochs[1], (Epoch{1.0, 1.5, {0.8}}));
  EXPECT_EQ(s.epochs[2], (Epoch{1.5, 2.0, {0.9}}));
}

TEST(Imputation, EqualTerminalReadingIsNoOp) {
  const Dataset d = parse(
      "id,time,x,followup,event\n1,0,0.3,,\n1,1,0.8,,\n1,,0.8,2,1\n");
  EXPECT_EQ(impute_terminal_jump(d.samples[0]), d.samples[0]);
  const Dataset single =
      parse("id,time,x,followup,event\n1,0,0.4,,\n1,,0.4,3,0\n");
  EXPECT_EQ(impute_terminal_jump(single.samples[0]), single.samples[0]);
}

TEST(Imputation, IdempotentAndCoversFollowup) {
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 50; ++rep) {
    testing::RandomDataOptions o;
    o.terminal_readings = true;
    o.labels = 3;
    const Dataset d = random_dataset(rng, o);
    const Dataset once = impute_terminal_jumps(d);
    const Dataset twice = impute_terminal_jumps(once);
    for (std::size_t i = 0; i < d.size(); ++i) {
      EXPECT_EQ(once.samples[i], twice.samples[i]);
      // Sweep the boundaries: union is [0, T~) without overlap.
      const auto& s = once.samples[i];
      double at = 0.0;
      for (const auto& e : s.epochs) {
        EXPECT_EQ(e.start, at);
        EXPECT_LT(e.start, e.end);
        at = e.end;
      }
      EXPECT_EQ(at, s.followup);
      EXPECT_TRUE(std::equal(s.values_at_followup().begin(),
                             s.values_at_followup().end(),
                             s.epochs.back().values.begin()));
    }
    EXPECT_TRUE(validate(once).ok());
  }
}

TEST(Validate, ReportsProblems) {
  Dataset d;
  d.schema = Schema::continuous({"x"});
  d.samples.push_back(testing::flat_sample("a", 2.0, true, {0.1}));
  d.samples.push_back(testing::flat_sample("b", 1.0, false, {0.2}));
  EXPECT_TRUE(validate(d).ok());

  Dataset gap = d;
  gap.samples[0].epochs = {{0.0, 1.0, {0.1}}, {1.5, 2.0, {0.2}}};
  const auto report = validate(gap);
  ASSERT_FALSE(report.ok());
  EXPECT_EQ(report.issues[0].rfind("gap at subject a", 0), 0u)
      << report.issues[0];

  Dataset overlap = d;
  overlap.samples[0].epochs = {{0.0, 1.2, {0.1}}, {1.0, 2.0, {0.2}}};
  EXPECT_NE(validate(overlap).issues.at(0).find("overlap"), std::string::npos);

  Dataset none = d;
  for (auto& s : none.samples) s.event = false;
  const auto r = validate(none);
  ASSERT_EQ(r.issues.size(), 1u);
  EXPECT_EQ(r.issues[0], "no observed events; F0 undefined");

  Dataset bad = d;
  bad.samples[1].followup = 0.0;
  bad.samples[1].epochs[0].end = 0.0;
  bool found = false;
  for (const auto& issue : validate(bad).issues) {
    found |= issue.find("followup <= 0") != std::string::npos;
  }
  EXPECT_TRUE(found);
}

TEST(RoundTrip, WriteThenReadIsFieldExact) {
  std::mt19937_64 rng(5);
  for (int rep = 0; rep < 30; ++rep) {
    testing::RandomDataOptions o;
    o.coarse = rep % 2 == 0;
    o.labels = rep % 3;
    o.terminal_readings = true;
    const Dataset d = random_dataset(rng, o);
    std::ostringstream out;
    write_dataset(d, out);
    std::istringstream in(out.str());
    const Dataset back = read_dataset(in, d.schema);
    EXPECT_EQ(back.schema, d.schema);
    ASSERT_EQ(back.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
      EXPECT_EQ(back.samples[i], d.samples[i]);
    }
  }
}

TEST(Trajectory, ValuesAtAndExtension) {
  FunctionalSample s;
  s.followup = 2.0;
  s.epochs = {{0.0, 1.0, {1.0}}, {1.0, 2.0, {2.0}}};
  EXPECT_EQ(s.values_at(0.5)[0], 1.0);
  EXPECT_EQ(s.values_at(1.0)[0], 2.0);
  EXPECT_EQ(s.values_at(2.0)[0], 2.0);
  const FunctionalSample e = extend_trajectory(s, 3.0);
  EXPECT_EQ(e.followup, 3.0);
  EXPECT_EQ(e.epochs.back(), (Epoch{1.0, 3.0, {2.0}}));
}

TEST(Trajectory, PiecesCutAtGrid) {
  FunctionalSample s;
  s.followup = 2.0;
  s.epochs = {{0.0, 1.0, {1.0}}, {1.0, 2.0, {2.0}}};
  const std::vector<double> cuts{0.5, 1.0, 1.7, 3.0};
  std::vector<std::pair<double, double>> pieces;
  for_each_piece(s, cuts, 2.0, [&](double lo, double hi, auto) {
    pieces.emplace_back(lo, hi);
  });
  const std::vector<std::pair<double, double>> expected{
      {0.0, 0.5}, {0.5, 1.0}, {1.0, 1.7}, {1.7, 2.0}};
  EXPECT_EQ(pieces, expected);
}

}  // namespace
}  // namespace hazboost
