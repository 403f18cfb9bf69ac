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

#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include "hazboost/boosting.hpp"
#include "hazboost/functional_data.hpp"
#include "hazboost/metrics.hpp"
#include "hazboost/model_selection.hpp"
#include "hazboost/numeric.hpp"
#include "hazboost/parallel.hpp"
#include "hazboost/simulation.hpp"
#include "hazboost/split_candidates.hpp"

namespace hazboost::cli {

namespace {

const std::vector<std::string> kSubcommands{
    "simulate", "train", "cv", "predict", "evaluate", "importance", "validate"};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Installs a logger writing to `err` for the duration of one run.
class ScopedLogger {
 public:
  ScopedLogger(std::ostream& err, bool verbose)
      : previous_(spdlog::default_logger()) {
    auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err, true);
    auto logger = std::make_shared<spdlog::logger>("hazboost", sink);
    if (verbose) {
      logger->set_pattern("%Y-%m-%dT%H:%M:%S.%e%z [%l] %v");
      logger->set_level(spdlog::level::debug);
    } else {
      logger->set_pattern("[%l] %v");
      logger->set_level(spdlog::level::warn);
    }
    spdlog::set_default_logger(logger);
  }
  ~ScopedLogger() { spdlog::set_default_logger(previous_); }
  ScopedLogger(const ScopedLogger&) = delete;
  ScopedLogger& operator=(const ScopedLogger&) = delete;

 private:
  std::shared_ptr<spdlog::logger> previous_;
};

// Writes to the file at `path`, or to `fallback` when the path is empty.
class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw std::runtime_error("cannot open " + path);
      stream_ = &file_;
    }
  }
  std::ostream& operator*() { return *stream_; }
  void finish() {
    stream_->flush();
    if (!*stream_) throw std::runtime_error("write failed");
  }

 private:
  std::ofstream file_;
  std::ostream* stream_;
};

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto t = trim(item);
    if (!t.empty()) items.emplace_back(t);
  }
  return items;
}

int parse_int(std::string_view text, const std::string& what) {
  try {
    return static_cast<int>(parse_integer(trim(text)));
  } catch (const std::exception&) {
    throw UsageError("bad integer in " + what + ": '" + std::string(text) + "'");
  }
}

std::vector<int> parse_int_list(const std::string& text,
                                const std::string& what) {
  std::vector<int> values;
  for (const auto& item : split_list(text)) values.push_back(parse_int(item, what));
  if (values.empty()) throw UsageError(what + " is empty");
  return values;
}

// "a:b:s" (inclusive range with step) or a comma list.
std::vector<int> parse_int_range(const std::string& text,
                                 const std::string& what) {
  if (text.find(':') == std::string::npos) return parse_int_list(text, what);
  std::vector<std::string> parts;
  std::stringstream in(text);
  std::string part;
  while (std::getline(in, part, ':')) parts.push_back(part);
  if (parts.size() != 3) throw UsageError(what + " must be start:stop:step");
  const int start = parse_int(parts[0], what);
  const int stop = parse_int(parts[1], what);
  const int step = parse_int(parts[2], what);
  if (step < 1 || stop < start) throw UsageError(what + ": empty range");
  std::vector<int> values;
  for (int v = start; v <= stop; v += step) values.push_back(v);
  return values;
}

std::vector<double> parse_double_list(const std::string& text,
                                      const std::string& what) {
  std::vector<double> values;
  for (const auto& item : split_list(text)) {
    try {
      values.push_back(parse_double(item));
    } catch (const std::exception&) {
      throw UsageError("bad number in " + what + ": '" + item + "'");
    }
  }
  return values;
}

// Loads and validates; when `require_events` is false the missing-event
// issue is tolerated.
std::optional<Dataset> load_checked(const std::string& path,
                                    const std::vector<std::string>& categorical,
                                    const Schema* schema, bool impute,
                                    bool require_events, std::ostream& err) {
  Dataset data = schema ? load_dataset(path, *schema)
                        : load_dataset(path, categorical);
  ValidationReport report = validate(data);
  if (!require_events) {
    std::erase_if(report.issues, [](const std::string& issue) {
      return issue.starts_with("no observed events");
    });
  }
  if (!report.ok()) {
    for (const auto& issue : report.issues) err << issue << '\n';
    return std::nullopt;
  }
  spdlog::info("loaded {}: {} subjects, {} events", path, data.size(),
               data.event_count());
  if (impute) data = impute_terminal_jumps(std::move(data));
  return data;
}

std::string number(double value) { return format_double(value); }

struct Common {
  unsigned threads = 1;
  bool verbose = false;
  std::string config;
};

struct SimulateArgs {
  std::string family;
  int n = 5000;
  int irrelevant = 0;
  double rate = 10.0;
  std::uint64_t seed = 42;
  std::optional<double> horizon;
  bool uniform_censoring = false;
  std::string out;
  std::string truth;
};

struct DataArgs {
  std::string data;
  std::string categorical;
  bool no_impute = false;
  int quantiles = 10;
  bool unweighted = false;

  QuantileWeighting weighting() const {
    return unweighted ? QuantileWeighting::kUnweighted
                      : QuantileWeighting::kDuration;
  }
};

struct TrainArgs {
  DataArgs data;
  int m = 100;
  int l = 1;
  double nu = 0.1;
  std::string dump_grid;
  std::string out;
};

struct CvArgs {
  DataArgs data;
  std::string l = "1,2,3,4";
  std::string m = "100:300:50";
  int k = 5;
  double nu = 0.1;
  std::uint64_t seed = 7;
  std::string out;
};

struct PredictArgs {
  std::string model;
  std::string data;
  bool no_impute = false;
  std::string out;
};

struct EvaluateArgs {
  std::string model;
  std::string data;
  std::string truth;
  std::string metrics = "l2,auc";
  int auc_grid = 20;
  std::string auc_times;
  int points_per_subject = 1;
  std::uint64_t seed = 1;
  bool no_impute = false;
  std::string out;
};

struct ImportanceArgs {
  std::string model;
  int bootstrap = 0;
  std::uint64_t seed = 1;
  std::string data;
  int quantiles = 10;
  bool unweighted = false;
  bool no_impute = false;
  std::string out;
};

struct ValidateArgs {
  std::string data;
  std::string categorical;
};

void add_data_options(CLI::App* cmd, DataArgs& a) {
  cmd->add_option("--data", a.data, "Training data CSV")->required();
  cmd->add_option("--categorical", a.categorical,
                  "Comma-separated categorical column names");
  cmd->add_flag("--no-impute", a.no_impute,
                "Skip the terminal-jump imputation");
  cmd->add_option("--quantiles", a.quantiles,
                  "Quantile count of the split candidate grid")
      ->capture_default_str()
      ->check(CLI::Range(1, 65535));
  cmd->add_flag("--unweighted-quantiles", a.unweighted,
                "Covariate quantiles over epochs instead of exposure time");
}

int do_simulate(const SimulateArgs& a, const Common& c, std::ostream& out) {
  HazardFamily family = HazardFamily::parse(a.family);
  if (a.horizon) {
    if (!(*a.horizon > 0)) throw UsageError("--horizon must be positive");
    family = HazardFamily(family.kind(), *a.horizon, family.constant());
  }
  SimulationSpec spec{family, a.n, a.irrelevant, a.rate, a.seed,
                      a.uniform_censoring};
  const Dataset data = simulate(spec, c.threads);
  spdlog::info("simulated {} subjects from {}, {} events", data.size(),
               family.name(), data.event_count());
  Output o(a.out, out);
  write_dataset(data, *o);
  o.finish();
  if (!a.truth.empty()) write_truth(spec, a.truth);
  return kOk;
}

int do_train(const TrainArgs& a, const Common& c, std::ostream& out,
             std::ostream& err) {
  const auto data = load_checked(a.data.data, split_list(a.data.categorical),
                                 nullptr, !a.data.no_impute, true, err);
  if (!data) return kValidationError;
  const SplitCandidateGrid grid =
      build_grid(*data, a.data.quantiles, a.data.weighting());
  if (!a.dump_grid.empty()) {
    std::ofstream dump(a.dump_grid);
    if (!dump) throw std::runtime_error("cannot open " + a.dump_grid);
    grid.write(dump);
  }
  FitOptions options;
  options.num_trees = a.m;
  options.max_splits = a.l;
  options.learning_rate = a.nu;
  options.threads = c.threads;
  const BoostedHazardModel model = fit(*data, grid, options);
  spdlog::info("trained M={} L={} nu={}: risk {} -> {}", a.m, a.l, a.nu,
               model.risk_trace.front(), model.risk_trace.back());
  Output o(a.out, out);
  write_model(model, *o);
  o.finish();
  return kOk;
}

int do_cv(const CvArgs& a, const Common& c, std::ostream& out,
          std::ostream& err) {
  CvOptions options;
  options.l_candidates = parse_int_list(a.l, "--l");
  options.m_candidates = parse_int_range(a.m, "--m");
  options.folds = a.k;
  options.learning_rate = a.nu;
  options.seed = a.seed;
  options.quantiles = a.data.quantiles;
  options.weighting = a.data.weighting();
  options.threads = c.threads;
  const auto data = load_checked(a.data.data, split_list(a.data.categorical),
                                 nullptr, !a.data.no_impute, true, err);
  if (!data) return kValidationError;
  const CvReport report = kfold_cv(*data, options);
  Output o(a.out, out);
  *o << "l,m,mean_risk,valid_folds,selected";
  for (int f = 1; f <= report.folds; ++f) *o << ",fold_" << f;
  *o << '\n';
  for (const auto& cell : report.cells) {
    const bool selected =
        cell.l == report.selected_l && cell.m == report.selected_m;
    *o << cell.l << ',' << cell.m << ','
       << (cell.valid ? number(cell.mean_risk) : "NA") << ','
       << cell.valid_folds << ',' << (selected ? 1 : 0);
    for (const auto& r : cell.fold_risks) *o << ',' << (r ? number(*r) : "NA");
    *o << '\n';
  }
  o.finish();
  spdlog::info("selected L={} M={} (mean held-out risk {})",
               report.selected_l, report.selected_m, report.selected_risk);
  return kOk;
}

int do_predict(const PredictArgs& a, std::ostream& out, std::ostream& err) {
  const BoostedHazardModel model = read_model(std::filesystem::path(a.model));
  const auto data =
      load_checked(a.data, {}, &model.schema, !a.no_impute, false, err);
  if (!data) return kValidationError;
  Output o(a.out, out);
  *o << "id,start,end,hazard,cumulative_hazard\n";
  for (const auto& sample : data->samples) {
    CompensatedSum cumulative;
    for_each_piece(sample, model.grid.time_cuts, sample.followup,
                   [&](double lo, double hi, std::span<const double> x) {
                     const double h = predict_hazard(model, lo, x);
                     cumulative.add(h * (hi - lo));
                     *o << sample.id << ',' << number(lo) << ',' << number(hi)
                        << ',' << number(h) << ','
                        << number(cumulative.value()) << '\n';
                   });
  }
  o.finish();
  return kOk;
}

int do_evaluate(const EvaluateArgs& a, std::ostream& out, std::ostream& err) {
  bool want_l2 = false;
  bool want_auc = false;
  for (const auto& m : split_list(a.metrics)) {
    if (m == "l2") {
      want_l2 = true;
    } else if (m == "auc") {
      want_auc = true;
    } else {
      throw UsageError("unknown metric '" + m + "'");
    }
  }
  if (!want_l2 && !want_auc) throw UsageError("--metrics is empty");
  if (want_l2 && a.truth.empty()) throw UsageError("l2 needs --truth");
  if (a.auc_grid < 1) throw UsageError("--auc-grid must be >= 1");

  const BoostedHazardModel model = read_model(std::filesystem::path(a.model));
  const auto data =
      load_checked(a.data, {}, &model.schema, !a.no_impute, false, err);
  if (!data) return kValidationError;
  std::optional<HazardFamily> family;
  std::size_t relevant = 0;
  if (!a.truth.empty()) {
    family = read_truth(a.truth).family;
    relevant = model.schema.find("x").value_or(0);
  }

  Output o(a.out, out);
  *o << "metric,t,value,pair_count\n";
  if (want_l2) {
    const auto points = sample_evaluation_points(*data, *family,
                                                 a.points_per_subject, a.seed,
                                                 relevant);
    std::vector<double> predicted;
    std::vector<double> truth;
    for (const auto& p : points) {
      predicted.push_back(predict_hazard(model, p.t, p.x));
      truth.push_back(*p.true_hazard);
    }
    *o << "l2,," << number(l2_error(predicted, truth)) << ','
       << points.size() << '\n';
  }
  if (want_auc) {
    const std::vector<double> times =
        a.auc_times.empty() ? auc_time_grid(*data, a.auc_grid)
                            : parse_double_list(a.auc_times, "--auc-times");
    const auto emit = [&](const char* name, const CumulativeHazardFn& fn,
                          double t) {
      try {
        const AucEstimate e = auc_t(fn, *data, t);
        *o << name << ',' << number(t) << ',' << number(e.auc) << ','
           << e.pairs << '\n';
      } catch (const std::domain_error& ex) {
        spdlog::warn("{} at t={}: {}", name, t, ex.what());
        *o << name << ',' << number(t) << ",NA,0\n";
      }
    };
    const CumulativeHazardFn model_fn = model_cumulative_hazard(model);
    for (double t : times) emit("auc", model_fn, t);
    if (family) {
      const CumulativeHazardFn true_fn =
          true_cumulative_hazard(*family, relevant);
      for (double t : times) emit("auc_true", true_fn, t);
    }
  }
  o.finish();
  return kOk;
}

int do_importance(const ImportanceArgs& a, const Common& c, std::ostream& out,
                  std::ostream& err) {
  const BoostedHazardModel model = read_model(std::filesystem::path(a.model));
  ImportanceReport report;
  if (a.bootstrap > 0) {
    if (a.data.empty()) throw UsageError("--bootstrap needs --data");
    if (a.bootstrap < 2) throw UsageError("--bootstrap must be >= 2");
    const auto data =
        load_checked(a.data, {}, &model.schema, !a.no_impute, true, err);
    if (!data) return kValidationError;
    BootstrapOptions options;
    options.fit.num_trees = static_cast<int>(model.tree_count());
    options.fit.max_splits = model.max_splits;
    options.fit.learning_rate = model.nu;
    options.resamples = a.bootstrap;
    options.seed = a.seed;
    options.quantiles = a.quantiles;
    options.weighting = a.unweighted ? QuantileWeighting::kUnweighted
                                     : QuantileWeighting::kDuration;
    options.threads = c.threads;
    report = bootstrap_importance(*data, options);
  } else {
    report = variable_importance(model);
  }
  if (report.degenerate) {
    spdlog::warn("model has no splits; all importance scores are 0");
  }
  Output o(a.out, out);
  *o << "variable,raw,relative,ci_lower,ci_upper\n";
  for (const auto& v : report.variables) {
    *o << v.name << ',' << number(v.raw) << ',' << number(v.relative) << ','
       << (v.ci_lower ? number(*v.ci_lower) : "") << ','
       << (v.ci_upper ? number(*v.ci_upper) : "") << '\n';
  }
  o.finish();
  return kOk;
}

int do_validate(const ValidateArgs& a, std::ostream& out, std::ostream& err) {
  const Dataset data = load_dataset(a.data, split_list(a.categorical));
  const ValidationReport report = validate(data);
  for (const auto& issue : report.issues) err << issue << '\n';
  if (!report.ok()) return kValidationError;
  out << "ok: " << data.size() << " subjects, " << data.event_count()
      << " events\n";
  return kOk;
}

}  // namespace

std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
    } else if (args[i].starts_with("--config=")) {
      path = args[i].substr(9);
    }
  }
  if (path.empty()) return args;
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file " + path);

  const auto given = [&](const std::string& key) {
    return std::any_of(args.begin(), args.end(), [&](const std::string& a) {
      return a == "--" + key || a.starts_with("--" + key + "=");
    });
  };
  std::vector<std::string> extra;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto text = trim(line);
    if (text.empty() || text.front() == '#') continue;
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) {
      throw UsageError(path + ":" + std::to_string(number) +
                       ": expected key=value");
    }
    std::string key(trim(text.substr(0, eq)));
    while (key.starts_with("-")) key.erase(0, 1);
    if (key.empty() || key == "config") {
      throw UsageError(path + ":" + std::to_string(number) + ": bad key");
    }
    if (given(key)) continue;
    extra.push_back("--" + key + "=" + std::string(trim(text.substr(eq + 1))));
  }

  std::vector<std::string> expanded = args;
  auto at = std::find_if(expanded.begin(), expanded.end(), [](const auto& a) {
    return std::find(kSubcommands.begin(), kSubcommands.end(), a) !=
           kSubcommands.end();
  });
  if (at != expanded.end()) ++at;
  expanded.insert(at, extra.begin(), extra.end());
  return expanded;
}

int run(const std::vector<std::string>& raw_args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Boosted nonparametric hazard estimation with time-dependent "
               "covariates",
               "hazboost"};
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  common.threads = default_thread_count();
  app.add_option("--threads", common.threads,
                 "Worker threads (default: HAZBOOST_THREADS or all cores)")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  app.add_flag("--verbose", common.verbose,
               "Log progress with ISO-8601 timestamps");
  app.add_option("--config", common.config,
                 "key=value file supplying flags; the command line wins");

  SimulateArgs sim;
  auto* simulate_cmd =
      app.add_subcommand("simulate", "Simulate trajectories from a hazard");
  simulate_cmd
      ->add_option("--family", sim.family,
                   "lambda1|lambda2|lambda3|lambda4|constant[:c]")
      ->required();
  simulate_cmd->add_option("--n", sim.n, "Subjects")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  simulate_cmd->add_option("--irrelevant", sim.irrelevant,
                           "Extra N(0,1) covariates")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  simulate_cmd->add_option("--rate", sim.rate, "Covariate jumps per unit time")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  simulate_cmd->add_option("--seed", sim.seed, "Random seed")
      ->capture_default_str();
  simulate_cmd->add_option("--horizon", sim.horizon,
                           "Override the family's horizon");
  simulate_cmd->add_flag("--uniform-censoring", sim.uniform_censoring,
                         "Also censor at an independent U(0, horizon) time");
  simulate_cmd->add_option("--out", sim.out, "Data CSV (default: stdout)");
  simulate_cmd->add_option("--truth", sim.truth, "Truth file to write");

  TrainArgs train;
  auto* train_cmd = app.add_subcommand("train", "Fit a boosted hazard model");
  add_data_options(train_cmd, train.data);
  train_cmd->add_option("--m", train.m, "Trees (M)")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  train_cmd->add_option("--l", train.l, "Splits per tree (L)")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  train_cmd->add_option("--nu", train.nu, "Learning rate")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  train_cmd->add_option("--dump-grid", train.dump_grid,
                        "Write the split candidate grid to this file");
  train_cmd->add_option("--out", train.out, "Model file")->required();

  CvArgs cv;
  auto* cv_cmd =
      app.add_subcommand("cv", "K-fold cross-validation over (L, M)");
  add_data_options(cv_cmd, cv.data);
  cv_cmd->add_option("--l", cv.l, "L candidates, comma list")
      ->capture_default_str();
  cv_cmd->add_option("--m", cv.m, "M candidates, start:stop:step or list")
      ->capture_default_str();
  cv_cmd->add_option("--k", cv.k, "Folds")
      ->capture_default_str()
      ->check(CLI::Range(2, 1 << 30));
  cv_cmd->add_option("--nu", cv.nu, "Learning rate")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  cv_cmd->add_option("--seed", cv.seed, "Fold shuffle seed")
      ->capture_default_str();
  cv_cmd->add_option("--out", cv.out, "Risk grid CSV (default: stdout)");

  PredictArgs predict;
  auto* predict_cmd = app.add_subcommand(
      "predict", "Piecewise hazard and cumulative hazard along trajectories");
  predict_cmd->add_option("--model", predict.model, "Model file")->required();
  predict_cmd->add_option("--data", predict.data, "Data CSV")->required();
  predict_cmd->add_flag("--no-impute", predict.no_impute,
                        "Skip the terminal-jump imputation");
  predict_cmd->add_option("--out", predict.out, "CSV (default: stdout)");

  EvaluateArgs evaluate;
  auto* evaluate_cmd =
      app.add_subcommand("evaluate", "L2 error and time-dependent AUC");
  evaluate_cmd->add_option("--model", evaluate.model, "Model file")
      ->required();
  evaluate_cmd->add_option("--data", evaluate.data, "Test data CSV")
      ->required();
  evaluate_cmd->add_option("--truth", evaluate.truth,
                           "Truth file from simulate");
  evaluate_cmd->add_option("--metrics", evaluate.metrics, "l2 and/or auc")
      ->capture_default_str();
  evaluate_cmd->add_option("--auc-grid", evaluate.auc_grid,
                           "AUC time points at event-time quantiles")
      ->capture_default_str();
  evaluate_cmd->add_option("--auc-times", evaluate.auc_times,
                           "Explicit comma list of AUC times");
  evaluate_cmd->add_option("--points-per-subject",
                           evaluate.points_per_subject,
                           "L2 evaluation points per subject")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  evaluate_cmd->add_option("--seed", evaluate.seed, "Evaluation point seed")
      ->capture_default_str();
  evaluate_cmd->add_flag("--no-impute", evaluate.no_impute,
                         "Skip the terminal-jump imputation");
  evaluate_cmd->add_option("--out", evaluate.out, "CSV (default: stdout)");

  ImportanceArgs importance;
  auto* importance_cmd =
      app.add_subcommand("importance", "Variable importance scores");
  importance_cmd->add_option("--model", importance.model, "Model file")
      ->required();
  importance_cmd->add_option("--bootstrap", importance.bootstrap,
                             "Bootstrap resamples for CIs (0 = none)")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  importance_cmd->add_option("--seed", importance.seed, "Bootstrap seed")
      ->capture_default_str();
  importance_cmd->add_option("--data", importance.data,
                             "Training data CSV (needed for --bootstrap)");
  importance_cmd->add_option("--quantiles", importance.quantiles,
                             "Quantile count for bootstrap refits")
      ->capture_default_str()
      ->check(CLI::Range(1, 65535));
  importance_cmd->add_flag("--unweighted-quantiles", importance.unweighted,
                           "Covariate quantiles over epochs");
  importance_cmd->add_flag("--no-impute", importance.no_impute,
                           "Skip the terminal-jump imputation");
  importance_cmd->add_option("--out", importance.out, "CSV (default: stdout)");

  ValidateArgs check;
  auto* validate_cmd =
      app.add_subcommand("validate", "Check a data file and list problems");
  validate_cmd->add_option("--data", check.data, "Data CSV")->required();
  validate_cmd->add_option("--categorical", check.categorical,
                           "Comma-separated categorical column names");

  try {
    std::vector<std::string> args = expand_config(raw_args);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageError;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }

  ScopedLogger logger(err, common.verbose);
  try {
    if (*simulate_cmd) return do_simulate(sim, common, out);
    if (*train_cmd) return do_train(train, common, out, err);
    if (*cv_cmd) return do_cv(cv, common, out, err);
    if (*predict_cmd) return do_predict(predict, out, err);
    if (*evaluate_cmd) return do_evaluate(evaluate, out, err);
    if (*importance_cmd) return do_importance(importance, common, out, err);
    if (*validate_cmd) return do_validate(check, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n' << app.help();
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kValidationError;
  }
  return kUsageError;
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace hazboost::cli
