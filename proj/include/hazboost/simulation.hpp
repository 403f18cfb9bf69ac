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

#ifndef HAZBOOST_SIMULATION_HPP_
#define HAZBOOST_SIMULATION_HPP_

// Synthetic benchmark data: piecewise-constant covariate paths with one
// relevant covariate x ~ U(0,1] per epoch, optional N(0,1) noise
// covariates, and event times drawn from a known hazard lambda(t, x) by
// inverting the cumulative hazard.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hazboost/functional_data.hpp"

namespace hazboost {

enum class HazardKind { kBeta2, kBeta4, kLognormal, kCosine, kConstant };

class HazardFamily {
 public:
  HazardFamily() = default;
  HazardFamily(HazardKind kind, double horizon, double constant = 1.0);

  // lambda1..lambda4 (or beta2, beta4, lognormal, cosine) with their
  // default horizons 1, 1, 5, 5; "constant:<c>" has horizon 5 unless given.
  static HazardFamily parse(std::string_view name);

  HazardKind kind() const { return kind_; }
  double horizon() const { return horizon_; }
  double constant() const { return constant_; }
  std::string name() const;

  // lambda(t, x); throws std::out_of_range unless 0 < t <= horizon.
  double value(double t, double x) const;
  // Same formula without the domain check; the t -> 0 limit at t <= 0.
  double value_unchecked(double t, double x) const;

  // int_a^b lambda(s, x) ds by adaptive Simpson to absolute tolerance `tol`.
  double integrate(double a, double b, double x, double tol = 1e-10) const;

 private:
  HazardKind kind_ = HazardKind::kBeta2;
  double horizon_ = 1.0;
  double constant_ = 1.0;
};

// Adaptive Simpson quadrature with Richardson correction.
double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol, int max_depth = 50);

struct SimulationSpec {
  HazardFamily family;
  int n = 5000;
  int irrelevant = 0;
  // Mean number of covariate jumps per unit time (Poisson process).
  double jump_rate = 10.0;
  std::uint64_t seed = 42;
  // Also censor at an independent U(0, horizon) time.
  bool uniform_censoring = false;
};

// Column 0 is the relevant covariate "x"; noise columns are z1..zK.
Schema simulation_schema(int irrelevant);

// Epochs over [0, horizon); values follow simulation_schema.
std::vector<Epoch> sample_trajectory(const SimulationSpec& spec,
                                     std::mt19937_64& rng);

struct EventDraw {
  double time = 0.0;
  bool event = false;
};

// Solves Lambda(T) = -log(u) along the trajectory (relevant covariate in
// column 0); returns (horizon, false) when Lambda(horizon) < -log(u).
EventDraw event_time_for_uniform(std::span<const Epoch> trajectory,
                                 const HazardFamily& family, double u);
EventDraw sample_event_time(std::span<const Epoch> trajectory,
                            const HazardFamily& family, std::mt19937_64& rng);

// Independent engine for subject `index`.
std::mt19937_64 subject_rng(std::uint64_t seed, std::uint64_t index);

Dataset simulate(const SimulationSpec& spec, unsigned threads = 1);

// key=value text recording the family and simulation settings.
void write_truth(const SimulationSpec& spec, const std::filesystem::path& path);
SimulationSpec read_truth(const std::filesystem::path& path);

}  // namespace hazboost

#endif  // HAZBOOST_SIMULATION_HPP_
