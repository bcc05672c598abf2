// Copyright 2026 The aggroute Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "aggroute/results.hpp"

namespace aggroute {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 360.0;
constexpr double kLeft = 60.0;
constexpr double kRight = 20.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 50.0;
constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string header(const std::string& title) {
  return fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {0} {1}\" width=\"{0}\" height=\"{1}\" "
      "font-family=\"sans-serif\" font-size=\"12\">\n"
      "<rect width=\"{0}\" height=\"{1}\" fill=\"white\"/>\n"
      "<text x=\"{2}\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">{3}</text>\n",
      kWidth, kHeight, kWidth / 2.0, escape(title));
}

std::string axes(double x_max, double y_lo, double y_hi, const std::string& y_label) {
  const double x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;
  std::string out = fmt::format(
      "<path d=\"M{:.2f},{:.2f} L{:.2f},{:.2f} L{:.2f},{:.2f}\" fill=\"none\" stroke=\"black\"/>\n", x0, y1, x0, y0,
      x1, y0);
  for (int k = 0; k <= 4; ++k) {
    const double v = y_lo + (y_hi - y_lo) * k / 4.0;
    const double y = y0 - (y0 - y1) * k / 4.0;
    out += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"end\">{:.2f}</text>\n", x0 - 6, y + 4, v);
  }
  out += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">1</text>\n", x0, y0 + 16);
  out += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">{}</text>\n", x1, y0 + 16,
                     static_cast<long>(x_max));
  out += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">Decision round</text>\n",
                     (x0 + x1) / 2.0, kHeight - 12);
  out += fmt::format("<text x=\"14\" y=\"{:.2f}\" transform=\"rotate(-90 14 {:.2f})\" text-anchor=\"middle\">{}</text>\n",
                     (y0 + y1) / 2.0, (y0 + y1) / 2.0, escape(y_label));
  return out;
}

double x_at(std::size_t index, std::size_t count) {
  const double x0 = kLeft, x1 = kWidth - kRight;
  if (count <= 1) return (x0 + x1) / 2.0;
  return x0 + (x1 - x0) * static_cast<double>(index) / static_cast<double>(count - 1);
}

double y_at(double v, double lo, double hi, double top = kTop, double bottom = kHeight - kBottom) {
  return bottom - (bottom - top) * (v - lo) / (hi - lo);
}

}  // namespace

std::string normalized_chart_svg(const std::vector<ChartSeries>& series, const std::string& title) {
  std::size_t rounds = 1;
  double hi = 1.0;
  double lo = 1.0;
  for (const ChartSeries& s : series) {
    rounds = std::max(rounds, s.values.size());
    for (const auto& v : s.values) {
      if (!v || !std::isfinite(*v)) continue;
      hi = std::max(hi, *v);
      lo = std::min(lo, *v);
    }
  }
  lo = std::floor(std::min(lo, 0.5) * 10.0) / 10.0;
  hi = std::ceil(hi * 10.0) / 10.0;
  if (hi <= lo) hi = lo + 1.0;

  std::string out = header(title) + axes(static_cast<double>(rounds), lo, hi, "Normalized energy");
  for (std::size_t k = 0; k < series.size(); ++k) {
    const char* color = kColors[k % std::size(kColors)];
    const ChartSeries& s = series[k];
    std::string path;
    bool pen_down = false;
    for (std::size_t i = 0; i < s.values.size(); ++i) {
      const auto& v = s.values[i];
      if (!v || !std::isfinite(*v)) {
        pen_down = false;
        continue;
      }
      path += fmt::format("{}{:.2f},{:.2f} ", pen_down ? "L" : "M", x_at(i, rounds), y_at(*v, lo, hi));
      out += fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"2\" fill=\"{}\"/>\n", x_at(i, rounds),
                         y_at(*v, lo, hi), color);
      pen_down = true;
    }
    if (!path.empty()) out += fmt::format("<path d=\"{}\" fill=\"none\" stroke=\"{}\"/>\n", path, color);
    const double ly = kTop + 14.0 * static_cast<double>(k);
    out += fmt::format("<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"12\" height=\"3\" fill=\"{}\"/>\n",
                       kWidth - kRight - 150, ly - 4, color);
    out += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\">{}</text>\n", kWidth - kRight - 132, ly, escape(s.label));
  }
  return out + "</svg>\n";
}

std::string aggregator_chart_svg(const std::vector<std::vector<bool>>& roles, const std::string& title) {
  const std::size_t rounds = std::max<std::size_t>(roles.size(), 1);
  std::size_t n = 0;
  for (const auto& row : roles) n = std::max(n, row.size());
  std::string out = header(title);
  const double x0 = kLeft, x1 = kWidth - kRight;
  const double band = n ? (kHeight - kTop - kBottom) / static_cast<double>(n) : 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double top = kTop + band * static_cast<double>(i) + 6.0;
    const double bottom = kTop + band * static_cast<double>(i + 1) - 6.0;
    const char* color = kColors[i % std::size(kColors)];
    out += fmt::format("<path d=\"M{:.2f},{:.2f} L{:.2f},{:.2f}\" stroke=\"#bbbbbb\"/>\n", x0, bottom, x1, bottom);
    out += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"end\">UAV {}</text>\n", x0 - 6,
                       (top + bottom) / 2.0 + 4, i + 1);
    std::string path;
    const double step = (x1 - x0) / static_cast<double>(rounds);
    for (std::size_t k = 0; k < roles.size(); ++k) {
      const bool on = i < roles[k].size() && roles[k][i];
      const double y = on ? top : bottom;
      const double xa = x0 + step * static_cast<double>(k);
      path += fmt::format("{}{:.2f},{:.2f} L{:.2f},{:.2f} ", k ? "L" : "M", xa, y, xa + step, y);
    }
    if (!path.empty()) out += fmt::format("<path d=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"2\"/>\n", path, color);
  }
  out += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\">Decision round (1 to {})</text>\n",
                     (x0 + x1) / 2.0, kHeight - 12, roles.size());
  return out + "</svg>\n";
}

}  // namespace aggroute
