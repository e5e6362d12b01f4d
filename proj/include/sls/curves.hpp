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

// Learning curves: moving averages of reward and steps written as CSV and a
// minimal standalone SVG line chart per metric.

#ifndef SLS_CURVES_HPP_
#define SLS_CURVES_HPP_

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "sls/stats.hpp"
#include "sls/training.hpp"

namespace sls {

struct Curve {
  std::string metric;
  int window = 1;
  std::vector<int> episodes;  // episode index at the end of each window
  std::vector<double> values;
};

inline Curve MakeCurve(std::string metric, const std::vector<int>& episodes,
                       const std::vector<double>& raw, int window) {
  if (raw.empty()) throw std::invalid_argument("empty metrics stream");
  Curve c;
  c.metric = std::move(metric);
  c.window = window;
  c.values = MovingAverage(raw, window);
  c.episodes.assign(episodes.begin() + (window - 1), episodes.end());
  return c;
}

inline std::vector<Curve> CurvesFromMetrics(const std::vector<EpisodeStats>& m,
                                            int window) {
  if (m.empty()) throw std::invalid_argument("empty metrics stream");
  std::vector<int> ep;
  std::vector<double> reward, steps;
  for (const auto& s : m) {
    ep.push_back(s.episode);
    reward.push_back(s.reward);
    steps.push_back(s.steps);
  }
  return {MakeCurve("reward", ep, reward, window),
          MakeCurve("steps", ep, steps, window)};
}

inline std::string CurveCsv(const Curve& c) {
  std::ostringstream os;
  os.precision(10);
  os << "episode," << c.metric << "_ma" << c.window << '\n';
  for (std::size_t i = 0; i < c.values.size(); ++i) {
    os << c.episodes[i] << ',' << c.values[i] << '\n';
  }
  return os.str();
}

inline std::string CurveSvg(const Curve& c, int width = 640, int height = 360) {
  constexpr double kPad = 48.0;
  const auto [lo_it, hi_it] = std::minmax_element(c.values.begin(), c.values.end());
  double lo = *lo_it, hi = *hi_it;
  if (hi - lo < 1e-12) {
    lo -= 1.0;
    hi += 1.0;
  }
  const double x0 = c.episodes.front();
  const double x1 = std::max<double>(c.episodes.back(), x0 + 1);
  auto px = [&](double x) { return kPad + (x - x0) / (x1 - x0) * (width - 2 * kPad); };
  auto py = [&](double y) { return height - kPad - (y - lo) / (hi - lo) * (height - 2 * kPad); };

  std::ostringstream os;
  os.precision(6);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
     << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << ' ' << height
     << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
     << "<text x=\"" << kPad << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\">"
     << c.metric << " (moving average, window " << c.window << ")</text>\n"
     << "<line x1=\"" << kPad << "\" y1=\"" << height - kPad << "\" x2=\""
     << width - kPad << "\" y2=\"" << height - kPad << "\" stroke=\"black\"/>\n"
     << "<line x1=\"" << kPad << "\" y1=\"" << kPad << "\" x2=\"" << kPad
     << "\" y2=\"" << height - kPad << "\" stroke=\"black\"/>\n";
  auto label = [&](double x, double y, const std::string& text, const char* anchor) {
    os << "<text x=\"" << x << "\" y=\"" << y << "\" font-family=\"sans-serif\" "
       << "font-size=\"11\" text-anchor=\"" << anchor << "\">" << text << "</text>\n";
  };
  auto fmt = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return std::string(buf);
  };
  label(kPad - 4, py(hi) + 4, fmt(hi), "end");
  label(kPad - 4, py(lo) + 4, fmt(lo), "end");
  label(px(x0), height - kPad + 16, fmt(x0), "middle");
  label(px(x1), height - kPad + 16, fmt(x1), "middle");
  os << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < c.values.size(); ++i) {
    if (i) os << ' ';
    os << px(c.episodes[i]) << ',' << py(c.values[i]);
  }
  os << "\"/>\n</svg>\n";
  return os.str();
}

// Writes <dir>/<metric>.csv and <dir>/<metric>.svg for every curve and
// returns the written paths.
inline std::vector<std::filesystem::path> WriteCurves(
    const std::vector<Curve>& curves, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;
  for (const auto& c : curves) {
    for (const auto& [ext, body] :
         {std::pair{".csv", CurveCsv(c)}, std::pair{".svg", CurveSvg(c)}}) {
      const auto path = dir / (c.metric + ext);
      std::ofstream os(path, std::ios::trunc);
      if (!(os << body)) throw std::runtime_error("cannot write " + path.string());
      written.push_back(path);
    }
  }
  return written;
}

}  // namespace sls

#endif  // SLS_CURVES_HPP_
