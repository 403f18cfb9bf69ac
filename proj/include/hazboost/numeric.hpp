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

#ifndef HAZBOOST_NUMERIC_HPP_
#define HAZBOOST_NUMERIC_HPP_

#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>

namespace hazboost {

// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      compensation_ += (sum_ - t) + x;
    } else {
      compensation_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);

// Strict parse of a whole field; throws std::invalid_argument on junk.
double parse_double(std::string_view text);
long long parse_integer(std::string_view text);

std::string_view trim(std::string_view text);

// 64-bit FNV-1a, used to fingerprint split grids.
std::uint64_t fnv1a_64(std::string_view bytes);

}  // namespace hazboost

#endif  // HAZBOOST_NUMERIC_HPP_
