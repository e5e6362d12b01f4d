// Copyright 2026 The sls-rl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SLS_STATS_HPP_
#define SLS_STATS_HPP_

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "json.hpp"

namespace sls {

// mean / population standard deviation / min / max.
struct Summary {
  double mean = 0.0;
  double stdev = 0.0;
  double min = 0.0;
  double max = 0.0;
  int count = 0;
};

inline Summary Summarize(std::span<const double> xs) {
  if (xs.empty()) throw std::invalid_argument("cannot summarize an empty series");
  Summary s;
  s.count = static_cast<int>(xs.size());
  double sum = 0.0;
  for (double x : xs) sum += x;
  s.mean = sum / s.count;
  double sq = 0.0;
  for (double x : xs) sq += (x - s.mean) * (x - s.mean);
  s.stdev = std::sqrt(sq / s.count);
  auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
  s.min = *lo;
  s.max = *hi;
  return s;
}

inline nlohmann::json ToJson(const Summary& s) {
  return {{"mean", s.mean},
          {"stdev", s.stdev},
          {"min", s.min},
          {"max", s.max},
          {"count", s.count}};
}

// Trailing moving average; one output per full window, so the result has
// xs.size() - window + 1 points.
inline std::vector<double> MovingAverage(std::span<const double> xs,
                                         int window) {
  if (window < 1) throw std::invalid_argument("window must be >= 1");
  if (xs.size() < static_cast<std::size_t>(window)) {
    throw std::invalid_argument("series shorter than the window");
  }
  std::vector<double> out;
  out.reserve(xs.size() - window + 1);
  for (std::size_t end = window; end <= xs.size(); ++end) {
    double sum = 0.0;
    for (std::size_t i = end - window; i < end; ++i) sum += xs[i];
    out.push_back(sum / window);
  }
  return out;
}

}  // namespace sls

#endif  // SLS_STATS_HPP_
