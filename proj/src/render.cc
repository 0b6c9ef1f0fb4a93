// src/render.cc

// Copyright 2026  The strongcrowd Authors

// See ../../COPYING for clarification regarding multiple authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "strongcrowd/render.h"

#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

namespace strongcrowd {

namespace {

constexpr double kPxPerSecond = 6.0;
constexpr double kLeft = 130.0;
constexpr double kTop = 30.0;
constexpr double kLaneHeight = 50.0;

std::string Num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

void Bar(std::ostringstream &os, double x0, double x1, double y, double h,
         const char *fill, const std::string &title) {
  os << "<rect x=\"" << Num(kLeft + x0 * kPxPerSecond) << "\" y=\"" << Num(y)
     << "\" width=\"" << Num((x1 - x0) * kPxPerSecond) << "\" height=\""
     << Num(h) << "\" fill=\"" << fill << "\"><title>" << title
     << "</title></rect>\n";
}

}  // namespace

std::string render_timeline(const std::string &file_id, double duration,
                            std::span<const EventInstance> truth,
                            std::span<const EventInstance> estimated,
                            const FrameOpinionCounts *counts) {
  std::set<std::string> labels;
  for (const auto &e : truth) labels.insert(e.label);
  for (const auto &e : estimated) labels.insert(e.label);
  if (counts)
    for (const auto &[label, lane] : counts->active) labels.insert(label);

  const double width = kLeft + duration * kPxPerSecond + 20.0;
  const double height = kTop + kLaneHeight * labels.size() + 30.0;
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << Num(width)
     << "\" height=\"" << Num(height) << "\" font-family=\"sans-serif\" "
     << "font-size=\"11\">\n";
  os << "<text x=\"4\" y=\"16\" font-size=\"13\">" << file_id
     << ": ground truth (green), estimate (orange), opinions (grey)</text>\n";

  const double axis_y = kTop + kLaneHeight * labels.size() + 4.0;
  for (int t = 0; t <= static_cast<int>(duration); t += 10) {
    const double x = kLeft + t * kPxPerSecond;
    os << "<line x1=\"" << Num(x) << "\" y1=\"" << Num(kTop) << "\" x2=\""
       << Num(x) << "\" y2=\"" << Num(axis_y) << "\" stroke=\"#ddd\"/>\n";
    os << "<text x=\"" << Num(x) << "\" y=\"" << Num(axis_y + 12)
       << "\" text-anchor=\"middle\">" << t << "</text>\n";
  }

  int lane = 0;
  for (const auto &label : labels) {
    const double y = kTop + kLaneHeight * lane++;
    os << "<g class=\"lane\" data-class=\"" << label << "\">\n";
    os << "<text x=\"4\" y=\"" << Num(y + 26) << "\">" << label << "</text>\n";
    for (const auto &e : truth)
      if (e.label == label)
        Bar(os, e.onset, e.offset, y + 4, 10, "#3a9a4a",
            "truth " + Num(e.onset) + "-" + Num(e.offset));
    for (const auto &e : estimated)
      if (e.label == label)
        Bar(os, e.onset, e.offset, y + 16, 10, "#e8891c",
            "estimate " + Num(e.onset) + "-" + Num(e.offset));
    if (counts) {
      auto it = counts->active.find(label);
      for (std::size_t t = 0; it != counts->active.end() &&
                              t < counts->available.size();
           ++t) {
        const int avail = counts->available[t];
        const int act = it->second[t];
        const double share = avail > 0 ? static_cast<double>(act) / avail : 0.0;
        const double x0 = t * counts->frame_len;
        os << "<rect x=\"" << Num(kLeft + x0 * kPxPerSecond) << "\" y=\""
           << Num(y + 28) << "\" width=\""
           << Num(counts->frame_len * kPxPerSecond) << "\" height=\"12\" "
           << "fill=\"#333\" fill-opacity=\"" << Num(share) << "\"><title>"
           << act << "/" << avail << "</title></rect>\n";
      }
    }
    os << "</g>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace strongcrowd
