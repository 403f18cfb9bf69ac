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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Sub-check details are printed indented above each verdict.

#include <spdlog/spdlog.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "hazboost/boosting.hpp"
#include "hazboost/metrics.hpp"
#include "hazboost/model_selection.hpp"
#include "hazboost/simulation.hpp"
#include "hazboost/split_candidates.hpp"
#include "hazboost/tree.hpp"
#include "test_support.hpp"

namespace hazboost {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

unsigned worker_threads() {
  return std::max(1u, std::thread::hardware_concurrency());
}

int failures = 0;

void verdict(int number, const std::string& name, bool pass,
             const std::string& detail) {
  std::printf("%s criterion %d (%s): %s\n", pass ? "PASS" : "FAIL", number,
              name.c_str(), detail.c_str());
  std::fflush(stdout);
  failures += !pass;
}

void note(const std::string& line) {
  std::printf("  %s\n", line.c_str());
  std::fflush(stdout);
}

std::string fmt(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

// simulate train/test, 5-fold CV over L and M, train, evaluate err_L2.
struct Pipeline {
  SimulationSpec spec;
  Dataset train;
  Dataset test;
  CvReport cv;
  BoostedHazardModel model;
  double err = 0.0;
  double seconds = 0.0;
};

Pipeline run_pipeline(const std::string& family, int irrelevant) {
  const auto start = Clock::now();
  Pipeline p;
  p.spec = SimulationSpec{HazardFamily::parse(family), 5000, irrelevant, 10.0,
                          1, false};
  p.train = impute_terminal_jumps(simulate(p.spec, worker_threads()));
  SimulationSpec test_spec = p.spec;
  test_spec.seed = 2;
  p.test = impute_terminal_jumps(simulate(test_spec, worker_threads()));

  CvOptions cv;
  cv.threads = worker_threads();
  p.cv = kfold_cv(p.train, cv);
  FitOptions options;
  options.num_trees = p.cv.selected_m;
  options.max_splits = p.cv.selected_l;
  options.threads = worker_threads();
  p.model = fit(p.train, build_grid(p.train, cv.quantiles), options);

  const auto points = sample_evaluation_points(p.test, p.spec.family, 1, 3);
  std::vector<double> predicted, truth;
  for (const auto& point : points) {
    predicted.push_back(predict_hazard(p.model, point.t, point.x));
    truth.push_back(*point.true_hazard);
  }
  p.err = l2_error(predicted, truth);
  p.seconds = seconds_since(start);
  note(family + ", " + std::to_string(irrelevant) +
       " irrelevant: CV selected L=" + std::to_string(p.cv.selected_l) +
       " M=" + std::to_string(p.cv.selected_m) + ", err_L2=" + fmt(p.err) +
       " on " + std::to_string(points.size()) + " points, " +
       fmt(p.seconds, 3) + " s");
  return p;
}

// ---- criterion 5 --------------------------------------------------------

bool check_gamma_optimality(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> log10u(-3.0, 1.0);
  double worst = -1.0;
  for (int k = 0; k < 1000; ++k) {
    const double u = std::pow(10.0, log10u(rng));
    const double v = std::pow(10.0, log10u(rng));
    const auto leaf_risk = [&](double g) { return u * std::exp(-g) + v * g; };
    const double closed = leaf_risk(leaf_value(u, v));
    double grid_min = leaf_risk(-10.0);
    for (int s = 1; s <= 200000; ++s) {
      grid_min = std::min(grid_min, leaf_risk(-10.0 + s * 1e-4));
    }
    worst = std::max(worst, closed - grid_min);
  }
  note("gamma: max(closed-form risk - grid minimum) = " + fmt(worst) +
       " over 1000 (U, V) pairs");
  return worst <= 0.0;
}

bool check_split_sign(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> log10u(-4.0, 2.0);
  const auto draw = [&] { return std::pow(10.0, log10u(rng)); };
  double max_d = -INFINITY, max_equal = 0.0;
  for (int k = 0; k < 100000; ++k) {
    const double u1 = draw(), v1 = draw(), u2 = draw(), v2 = draw();
    max_d = std::max(max_d, split_score(u1, v1, u2, v2));
    const double ratio = u1 / v1;
    max_equal = std::max(max_equal,
                         std::abs(split_score(u1, v1, ratio * v2, v2)));
  }
  note("split score: max d = " + fmt(max_d) + " over 1e5 draws, max |d| = " +
       fmt(max_equal) + " at equal ratios");
  return max_d <= 0.0 && max_equal < 1e-12;
}

Dataset random_dataset_with_events(std::mt19937_64& rng,
                                   testing::RandomDataOptions o) {
  for (;;) {
    Dataset d = testing::random_dataset(rng, o);
    if (d.event_count() > 0) return d;
  }
}

bool check_risk_oracle(std::mt19937_64& rng) {
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    testing::RandomDataOptions o;
    o.n = 5 + k % 26;
    o.continuous = 1 + k % 3;
    o.labels = k % 4 == 0 ? 3 : 0;
    const Dataset d = random_dataset_with_events(rng, o);
    FitOptions options;
    options.num_trees = 10;
    options.max_splits = 1 + k % 4;
    options.learning_rate = k % 2 ? 0.1 : 1.0;
    const BoostedHazardModel model = fit(d, build_grid(d, 5), options);
    for (std::size_t m = 0; m <= model.tree_count(); ++m) {
      const BoostedHazardModel head = model.prefix(m);
      const double direct = testing::oracle_risk(head.as_log_hazard(), d);
      worst = std::max(worst, testing::relative_gap(model.risk_trace[m], direct));
    }
  }
  note("risk bookkeeping vs direct evaluation: max relative gap " +
       fmt(worst) + " over 100 datasets");
  return worst <= 1e-9;
}

bool check_descent_and_f0(std::mt19937_64& rng) {
  int increases = 0, f0_failures = 0;
  for (int k = 0; k < 20; ++k) {
    testing::RandomDataOptions o;
    o.n = 30;
    o.continuous = 1 + k % 3;
    const Dataset d = random_dataset_with_events(rng, o);
    FitOptions options;
    options.num_trees = 100;
    options.max_splits = 1 + k % 4;
    const BoostedHazardModel model = fit(d, build_grid(d, 10), options);
    for (std::size_t m = 1; m < model.risk_trace.size(); ++m) {
      increases += model.risk_trace[m] > model.risk_trace[m - 1];
    }
    const double f0 = init_f0(d);
    const double at = likelihood_risk(LogHazard::constant(f0), d);
    for (double delta : {-1e-3, 1e-3}) {
      f0_failures += !(likelihood_risk(LogHazard::constant(f0 + delta), d) > at);
    }
  }
  note("descent: " + std::to_string(increases) +
       " risk increases over 20 x 100 iterations");
  note("F0: " + std::to_string(f0_failures) +
       " of 40 perturbations failed to increase risk");
  return increases == 0 && f0_failures == 0;
}

bool check_auc_scale_invariance() {
  const SimulationSpec spec{HazardFamily::parse("lambda1"), 800, 0, 10.0, 4,
                            false};
  const Dataset d = impute_terminal_jumps(simulate(spec));
  FitOptions options;
  options.num_trees = 40;
  options.max_splits = 2;
  const BoostedHazardModel model = fit(d, build_grid(d, 10), options);
  const CumulativeHazardFn base = model_cumulative_hazard(model);
  int mismatches = 0, compared = 0;
  for (double t : auc_time_grid(d, 20)) {
    const double ref = auc_t(base, d, t).auc;
    for (double c : {0.5, 2.0, 10.0}) {
      const CumulativeHazardFn scaled = [&](const FunctionalSample& s,
                                            double u) { return c * base(s, u); };
      mismatches += auc_t(scaled, d, t).auc != ref;
      ++compared;
    }
  }
  note("AUC scale invariance: " + std::to_string(mismatches) + " of " +
       std::to_string(compared) + " (t, c) pairs differ");
  return mismatches == 0;
}

bool check_sampler_ks() {
  bool ok = true;
  const double critical = testing::kKsCritical / std::sqrt(1e5);
  for (const char* name : {"lambda1", "lambda2", "lambda3", "lambda4"}) {
    const HazardFamily f = HazardFamily::parse(name);
    const double x = 0.4;
    const std::vector<Epoch> path{{0.0, f.horizon(), {x}}};
    std::mt19937_64 rng(4);
    std::vector<double> draws;
    draws.reserve(100000);
    for (int k = 0; k < 100000; ++k) {
      draws.push_back(sample_event_time(path, f, rng).time);
    }
    const double d = testing::ks_distance(
        draws, f.horizon(), [&](double a, double b) {
          return b > a ? testing::gauss_legendre(f, a, b, x, 4) : 0.0;
        });
    note(std::string("KS ") + name + ": D = " + fmt(d) + " (1% critical " +
         fmt(critical) + ")");
    ok = ok && d < critical;
  }
  return ok;
}

void criterion_5() {
  const auto start = Clock::now();
  std::mt19937_64 rng(2024);
  bool ok = check_gamma_optimality(rng);
  ok = check_split_sign(rng) && ok;
  ok = check_risk_oracle(rng) && ok;
  ok = check_descent_and_f0(rng) && ok;
  ok = check_auc_scale_invariance() && ok;
  ok = check_sampler_ks() && ok;
  const double elapsed = seconds_since(start);
  verdict(5, "property suite", ok && elapsed < 120.0,
          std::string(ok ? "all properties hold" : "a property failed") +
              ", " + fmt(elapsed, 3) + " s (limit 120 s)");
}

// ---- criterion 6 --------------------------------------------------------

void criterion_6() {
  int top_two = 0;
  SimulationSpec first_spec;
  FitOptions first_options;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const SimulationSpec spec{HazardFamily::parse("lambda1"), 2000, 20, 10.0,
                              100 + seed, false};
    const Dataset d = impute_terminal_jumps(simulate(spec, worker_threads()));
    CvOptions cv;
    cv.threads = worker_threads();
    const CvReport report = kfold_cv(d, cv);
    FitOptions options;
    options.num_trees = report.selected_m;
    options.max_splits = report.selected_l;
    options.threads = worker_threads();
    const BoostedHazardModel model = fit(d, build_grid(d, cv.quantiles), options);
    auto ranked = variable_importance(model).variables;
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& a, const auto& b) { return a.raw > b.raw; });
    const bool hit = ranked.size() >= 3 && ranked[1].raw > ranked[2].raw &&
                     ((ranked[0].name == "time" && ranked[1].name == "x") ||
                      (ranked[0].name == "x" && ranked[1].name == "time"));
    top_two += hit;
    note("seed " + std::to_string(seed) + ": L=" + std::to_string(options.max_splits) +
         " M=" + std::to_string(options.num_trees) + ", top: " + ranked[0].name +
         " " + fmt(ranked[0].relative) + ", " + ranked[1].name + " " +
         fmt(ranked[1].relative) + ", next: " + ranked[2].name + " " +
         fmt(ranked[2].relative));
    if (seed == 1) {
      first_spec = spec;
      first_options = options;
    }
  }

  const Dataset d = impute_terminal_jumps(simulate(first_spec, worker_threads()));
  BootstrapOptions boot;
  boot.fit = first_options;
  boot.resamples = 50;
  boot.threads = worker_threads();
  const ImportanceReport ci = bootstrap_importance(d, boot);
  bool intervals_ok = !ci.variables.empty();
  double x_lower = NAN, noise_upper = 0.0;
  for (const auto& v : ci.variables) {
    if (v.name == "x") x_lower = v.ci_lower.value_or(NAN);
    if (v.name != "x" && v.name != "time") {
      noise_upper = std::max(noise_upper, v.ci_upper.value_or(INFINITY));
    }
    intervals_ok = intervals_ok && v.ci_lower && v.ci_upper &&
                   std::isfinite(*v.ci_lower) && std::isfinite(*v.ci_upper) &&
                   0.0 <= *v.ci_lower && *v.ci_lower <= *v.ci_upper &&
                   *v.ci_upper <= 100.0;
    if (v.name == "time" || v.name == "x") {
      note("bootstrap B=50: " + v.name + " relative " + fmt(v.relative) +
           ", 95% interval [" + fmt(v.ci_lower.value_or(NAN)) + ", " +
           fmt(v.ci_upper.value_or(NAN)) + "]");
    }
  }
  note("bootstrap B=50: largest irrelevant upper bound " + fmt(noise_upper));
  const bool separated = x_lower > noise_upper;
  verdict(6, "variable importance",
          top_two >= 9 && intervals_ok && separated,
          "time and x ranked top-2 in " + std::to_string(top_two) +
              " of 10 seeds (need 9); bootstrap intervals " +
              (intervals_ok ? "well-formed" : "malformed") + ", x interval " +
              (separated ? "above" : "not above") +
              " every irrelevant upper bound");
}

int run() {
  spdlog::set_level(spdlog::level::warn);

  const Pipeline lambda1 = run_pipeline("lambda1", 0);
  verdict(1, "lambda1 reproduction",
          lambda1.err >= 0.12 && lambda1.err <= 0.26 && lambda1.seconds < 900.0,
          "err_L2=" + fmt(lambda1.err) + " (band [0.12, 0.26]), pipeline " +
              fmt(lambda1.seconds, 3) + " s (limit 900 s)");

  {
    const Pipeline with20 = run_pipeline("lambda1", 20);
    const Pipeline with40 = run_pipeline("lambda1", 40);
    const double limit = 1.6 * lambda1.err;
    verdict(2, "irrelevant covariates", with40.err <= limit,
            "err_L2 0/20/40 irrelevant = " + fmt(lambda1.err) + "/" +
                fmt(with20.err) + "/" + fmt(with40.err) +
                ", need err(40) <= " + fmt(limit));
  }

  {
    const Pipeline lambda4 = run_pipeline("lambda4", 0);
    verdict(3, "lambda4 reproduction",
            lambda4.err >= 0.03 && lambda4.err <= 0.09,
            "err_L2=" + fmt(lambda4.err) + " (band [0.03, 0.09])");
  }

  {
    const CumulativeHazardFn model_fn = model_cumulative_hazard(lambda1.model);
    const CumulativeHazardFn true_fn =
        true_cumulative_hazard(lambda1.spec.family);
    double worst = 0.0;
    int undefined = 0;
    for (double t : auc_time_grid(lambda1.test, 20)) {
      try {
        const double a = auc_t(model_fn, lambda1.test, t).auc;
        const double b = auc_t(true_fn, lambda1.test, t).auc;
        note("t=" + fmt(t) + ": AUC model " + fmt(a) + ", true " + fmt(b));
        worst = std::max(worst, std::abs(a - b));
      } catch (const std::domain_error&) {
        ++undefined;
      }
    }
    verdict(4, "AUC parity", worst <= 0.05 && undefined == 0,
            "max |AUC_model - AUC_true| = " + fmt(worst) +
                " over 20 grid points (limit 0.05), " +
                std::to_string(undefined) + " undefined");
  }

  criterion_5();
  criterion_6();

  std::printf("summary: %d of 6 criteria failed\n", failures);
  return failures ? 1 : 0;
}

}  // namespace
}  // namespace hazboost

int main() {
  try {
    return hazboost::run();
  } catch (const std::exception& e) {
    std::printf("FAIL acceptance suite aborted: %s\n", e.what());
    return 1;
  }
}
