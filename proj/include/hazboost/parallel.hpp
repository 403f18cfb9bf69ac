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

#ifndef HAZBOOST_PARALLEL_HPP_
#define HAZBOOST_PARALLEL_HPP_

#include <cstddef>
#include <functional>

namespace hazboost {

// Worker count from HAZBOOST_THREADS when set, else the hardware
// concurrency (at least 1).
unsigned default_thread_count();

// Runs body(i) for i in [0, count) on up to `threads` workers. Each index is
// visited exactly once; callers write results into pre-sized slots so the
// output does not depend on scheduling. The first exception thrown by any
// worker is rethrown on the calling thread.
void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& body);

}  // namespace hazboost

#endif  // HAZBOOST_PARALLEL_HPP_
