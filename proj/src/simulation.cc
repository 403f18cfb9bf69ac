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

#include "hazboost/simulation.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <stdexcept>

#include "hazboost/numeric.hpp"
#include "hazboost/parallel.hpp"

namespace hazboost {

namespace {

double normal_pdf(double z) {
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double simpson(double fa, double fm, double fb, double a, double b) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double simpson_step(const std::function<double(double)>& f, double a, double b,
                    double fa, double fm, double fb, double whole, double tol,
                    int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson(fa, flm, fm, a, m);
  const double right = simpson(fm, frm, fb, m, b);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol, int max_depth) {
  if (b <= a) return 0.0;
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  return simpson_step(f, a, b, fa, fm, fb, simpson(fa, fm, fb, a, b), tol,
                      max_depth);
}

HazardFamily::HazardFamily(HazardKind kind, double horizon, double constant)
    : kind_(kind), horizon_(horizon), constant_(constant) {
  if (!(horizon > 0)) throw std::invalid_argument("horizon must be positive");
  if (kind == HazardKind::kConstant && !(constant > 0)) {
    throw std::invalid_argument("constant hazard must be positive");
  }
}

HazardFamily HazardFamily::parse(std::string_view name) {
  name = trim(name);
  if (name == "lambda1" || name == "beta2") return {HazardKind::kBeta2, 1.0};
  if (name == "lambda2" || name == "beta4") return {HazardKind::kBeta4, 1.0};
  if (name == "lambda3" || name == "lognormal") {
    return {HazardKind::kLognormal, 5.0};
  }
  if (name == "lambda4" || name == "cosine") return {HazardKind::kCosine, 5.0};
  if (name == "constant") return {HazardKind::kConstant, 5.0, 1.0};
  if (name.rfind("constant:", 0) == 0) {
    return {HazardKind::kConstant, 5.0, parse_double(name.substr(9))};
  }
  throw std::invalid_argument("unknown hazard family '" + std::string(name) +
                              "'");
}

std::string HazardFamily::name() const {
  switch (kind_) {
    case HazardKind::kBeta2:
      return "lambda1";
    case HazardKind::kBeta4:
      return "lambda2";
    case HazardKind::kLognormal:
      return "lambda3";
    case HazardKind::kCosine:
      return "lambda4";
    case HazardKind::kConstant:
      return "constant:" + format_double(constant_);
  }
  return {};
}

double HazardFamily::value(double t, double x) const {
  if (!(t > 0 && t <= horizon_)) {
    throw std::out_of_range("hazard evaluated outside (0, horizon]");
  }
  return value_unchecked(t, x);
}

double HazardFamily::value_unchecked(double t, double x) const {
  switch (kind_) {
    case HazardKind::kBeta2: {
      // Beta(2,2) density 6u(1-u) in both arguments.
      return 36.0 * t * (1.0 - t) * x * (1.0 - x);
    }
    case HazardKind::kBeta4: {
      // Beta(4,4) density 140 u^3 (1-u)^3.
      const double a = t * (1.0 - t);
      const double b = x * (1.0 - x);
      return 140.0 * a * a * a * 140.0 * b * b * b;
    }
    case HazardKind::kLognormal: {
      if (t <= 0) return 0.0;
      const double z = std::log(t) - x;
      return normal_pdf(z) / (t * normal_cdf(-z));
    }
    case HazardKind::kCosine: {
      if (t <= 0) return 0.0;
      return 1.5 * std::sqrt(t) *
             std::exp(-0.5 * std::cos(2.0 * std::numbers::pi * x) - 1.5);
    }
    case HazardKind::kConstant:
      return constant_;
  }
  return 0.0;
}

double HazardFamily::integrate(double a, double b, double x, double tol) const {
  if (kind_ == HazardKind::kConstant) return constant_ * (b - a);
  return adaptive_simpson([&](double s) { return value_unchecked(s, x); }, a,
                          b, tol);
}

Schema simulation_schema(int irrelevant) {
  std::vector<std::string> names{"x"};
  for (int k = 1; k <= irrelevant; ++k) names.push_back("z" + std::to_string(k));
  return Schema::continuous(names);
}

std::vector<Epoch> sample_trajectory(const SimulationSpec& spec,
                                     std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double horizon = spec.family.horizon();
  auto draw_values = [&] {
    std::vector<double> values(1 + static_cast<std::size_t>(spec.irrelevant));
    values[0] = 1.0 - uniform(rng);  // U(0, 1]
    for (int k = 1; k <= spec.irrelevant; ++k) values[k] = normal(rng);
    return values;
  };
  std::vector<Epoch> epochs;
  double start = 0.0;
  for (;;) {
    double end = horizon;
    if (spec.jump_rate > 0) {
      std::exponential_distribution<double> gap(spec.jump_rate);
      end = std::min(horizon, start + gap(rng));
    }
    if (!(end > start)) end = horizon;  // degenerate zero gap
    epochs.push_back({start, end, draw_values()});
    if (end >= horizon) break;
    start = end;
  }
  return epochs;
}

EventDraw event_time_for_uniform(std::span<const Epoch> trajectory,
                                 const HazardFamily& family, double u) {
  if (!(u > 0 && u < 1)) throw std::invalid_argument("u must be in (0, 1)");
  const double target = -std::log(u);
  const double horizon = family.horizon();
  double cumulative = 0.0;
  for (const Epoch& epoch : trajectory) {
    const double a = epoch.start;
    const double b = std::min(epoch.end, horizon);
    if (!(b > a)) continue;
    const double x = epoch.values.at(0);
    const double piece = family.integrate(a, b, x);
    if (cumulative + piece < target) {
      cumulative += piece;
      continue;
    }
    // Root of int_a^tau lambda = remaining on [a, b]: Newton steps kept
    // inside a shrinking bracket, bisection when Newton leaves it.
    const double remaining = target - cumulative;
    double lo = a;
    double hi = b;
    double tau = piece > 0 ? a + (b - a) * (remaining / piece) : 0.5 * (a + b);
    for (int iter = 0; iter < 200; ++iter) {
      const double gap = family.integrate(a, tau, x) - remaining;
      if (gap > 0) {
        hi = tau;
      } else {
        lo = tau;
      }
      const double slope = family.value_unchecked(tau, x);
      double next = slope > 0 ? tau - gap / slope : 0.5 * (lo + hi);
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      const double step = std::abs(next - tau);
      tau = next;
      if (step < 1e-10 || hi - lo < 1e-10) break;
    }
    if (!(tau > 0)) tau = std::nextafter(0.0, 1.0);
    // T~ == horizon is reserved for administrative censoring.
    if (tau >= horizon) tau = std::nextafter(horizon, 0.0);
    return {tau, true};
  }
  return {horizon, false};
}

EventDraw sample_event_time(std::span<const Epoch> trajectory,
                            const HazardFamily& family, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  double u = 0.0;
  do {
    u = uniform(rng);
  } while (!(u > 0.0));
  return event_time_for_uniform(trajectory, family, u);
}

std::mt19937_64 subject_rng(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

Dataset simulate(const SimulationSpec& spec, unsigned threads) {
  if (spec.n < 1) throw std::invalid_argument("simulate: n must be >= 1");
  if (spec.irrelevant < 0) {
    throw std::invalid_argument("simulate: irrelevant must be >= 0");
  }
  if (!(spec.jump_rate >= 0)) {
    throw std::invalid_argument("simulate: jump rate must be >= 0");
  }
  Dataset dataset;
  dataset.schema = simulation_schema(spec.irrelevant);
  dataset.samples.resize(static_cast<std::size_t>(spec.n));
  parallel_for(dataset.samples.size(), threads, [&](std::size_t i) {
    std::mt19937_64 rng = subject_rng(spec.seed, i);
    std::vector<Epoch> path = sample_trajectory(spec, rng);
    EventDraw draw = sample_event_time(path, spec.family, rng);
    if (spec.uniform_censoring) {
      std::uniform_real_distribution<double> uniform(0.0, 1.0);
      const double censor = spec.family.horizon() * (1.0 - uniform(rng));
      if (censor < draw.time) draw = {censor, false};
    }
    FunctionalSample& sample = dataset.samples[i];
    sample.id = std::to_string(i + 1);
    sample.followup = draw.time;
    sample.event = draw.event;
    for (auto& epoch : path) {
      if (epoch.start >= draw.time) break;
      epoch.end = std::min(epoch.end, draw.time);
      sample.epochs.push_back(std::move(epoch));
    }
    sample.epochs.back().end = draw.time;
    sample.terminal_values = sample.epochs.back().values;
  });
  return dataset;
}

void write_truth(const SimulationSpec& spec, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "family=" << spec.family.name() << '\n'
      << "horizon=" << format_double(spec.family.horizon()) << '\n'
      << "relevant_column=x\n"
      << "n=" << spec.n << '\n'
      << "irrelevant=" << spec.irrelevant << '\n'
      << "rate=" << format_double(spec.jump_rate) << '\n'
      << "seed=" << spec.seed << '\n'
      << "uniform_censoring=" << (spec.uniform_censoring ? 1 : 0) << '\n';
}

SimulationSpec read_truth(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (trim(line).empty() || line[0] == '#') continue;
    if (eq == std::string::npos) {
      throw std::runtime_error("truth file: malformed line '" + line + "'");
    }
    kv[std::string(trim(line.substr(0, eq)))] =
        std::string(trim(line.substr(eq + 1)));
  }
  if (!kv.count("family")) throw std::runtime_error("truth file: no family");
  SimulationSpec spec;
  HazardFamily family = HazardFamily::parse(kv["family"]);
  if (kv.count("horizon")) {
    family = HazardFamily(family.kind(), parse_double(kv["horizon"]),
                          family.constant());
  }
  spec.family = family;
  if (kv.count("n")) spec.n = static_cast<int>(parse_integer(kv["n"]));
  if (kv.count("irrelevant")) {
    spec.irrelevant = static_cast<int>(parse_integer(kv["irrelevant"]));
  }
  if (kv.count("rate")) spec.jump_rate = parse_double(kv["rate"]);
  if (kv.count("seed")) {
    spec.seed = static_cast<std::uint64_t>(std::stoull(kv["seed"]));
  }
  if (kv.count("uniform_censoring")) {
    spec.uniform_censoring = kv["uniform_censoring"] == "1";
  }
  return spec;
}

}  // namespace hazboost
