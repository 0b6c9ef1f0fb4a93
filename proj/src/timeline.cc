// src/timeline.cc

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

#include "strongcrowd/timeline.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "strongcrowd/errors.h"

namespace strongcrowd {

namespace {

constexpr double kTimeEps = 1e-9;

std::string Describe(const EventInstance &e) {
  std::ostringstream os;
  os << "(" << (e.file_id.empty() ? "?" : e.file_id) << ", " << e.label
     << ", " << e.onset << ", " << e.offset << ")";
  return os.str();
}

}  // namespace

bool FrameActivity::IsActive(const std::string &label,
                             std::size_t frame) const {
  auto it = grid.find(label);
  return it != grid.end() && frame < it->second.size() && it->second[frame];
}

std::vector<std::size_t> FrameActivity::ActiveFrames(
    const std::string &label) const {
  std::vector<std::size_t> frames;
  auto it = grid.find(label);
  if (it == grid.end()) return frames;
  for (std::size_t t = 0; t < it->second.size(); ++t)
    if (it->second[t]) frames.push_back(t);
  return frames;
}

std::size_t FrameActivity::CountActive() const {
  std::size_t n = 0;
  for (const auto &[label, lane] : grid)
    n += std::count(lane.begin(), lane.end(), std::uint8_t{1});
  return n;
}

double Overlap(double a0, double a1, double b0, double b1) {
  return std::max(0.0, std::min(a1, b1) - std::max(a0, b0));
}

std::size_t NumFrames(double duration, double frame_len) {
  if (duration <= 0.0) return 0;
  return static_cast<std::size_t>(std::floor(duration / frame_len + kTimeEps));
}

void ValidateEvents(std::span<const EventInstance> events, double duration) {
  for (const auto &e : events) {
    if (!(e.onset >= 0.0))
      throw InputError("event " + Describe(e) + " has negative onset");
    if (!(e.offset > e.onset))
      throw InputError("event " + Describe(e) + " has offset <= onset");
    if (e.offset > duration + kTimeEps) {
      std::ostringstream os;
      os << "event " << Describe(e) << " exceeds file duration " << duration;
      throw InputError(os.str());
    }
    if (e.salience && (*e.salience < 0.0 || *e.salience > 1.0))
      throw InputError("event " + Describe(e) + " has salience outside [0,1]");
  }
  std::vector<const EventInstance *> sorted;
  for (const auto &e : events) sorted.push_back(&e);
  std::sort(sorted.begin(), sorted.end(), [](auto *a, auto *b) {
    if (a->file_id != b->file_id) return a->file_id < b->file_id;
    if (a->label != b->label) return a->label < b->label;
    return a->onset < b->onset;
  });
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    const auto &prev = *sorted[i - 1];
    const auto &cur = *sorted[i];
    if (prev.file_id == cur.file_id && prev.label == cur.label &&
        cur.onset < prev.offset - kTimeEps)
      throw InputError("events " + Describe(prev) + " and " + Describe(cur) +
                       " of the same class overlap");
  }
}

FrameActivity quantize_events_to_frames(std::span<const EventInstance> events,
                                        double duration, double frame_len,
                                        double min_overlap,
                                        std::span<const std::string> vocabulary) {
  if (!(frame_len > 0.0)) throw ConfigError("frame_len must be positive");
  if (min_overlap < 0.0) throw ConfigError("min_overlap must be >= 0");
  FrameActivity activity;
  activity.frame_len = frame_len;
  activity.num_frames = NumFrames(duration, frame_len);
  for (const auto &label : vocabulary)
    activity.grid[label].assign(activity.num_frames, 0);
  if (!events.empty()) activity.file_id = events.front().file_id;

  for (const auto &e : events) {
    if (e.file_id != activity.file_id)
      throw InputError("quantize_events_to_frames: events from files '" +
                       activity.file_id + "' and '" + e.file_id + "' mixed");
    if (e.offset > duration + kTimeEps || e.onset < 0.0 ||
        !(e.offset > e.onset))
      throw InputError("event " + Describe(e) +
                       " is invalid for a file of the given duration");
    auto &lane = activity.grid[e.label];
    lane.resize(activity.num_frames, 0);
    if (activity.num_frames == 0) continue;
    const auto first = static_cast<std::size_t>(std::floor(e.onset / frame_len));
    for (std::size_t t = first; t < activity.num_frames; ++t) {
      const double f0 = static_cast<double>(t) * frame_len;
      if (f0 >= e.offset) break;
      if (Overlap(e.onset, e.offset, f0, f0 + frame_len) > min_overlap)
        lane[t] = 1;
    }
  }
  return activity;
}

std::vector<EventInstance> extract_events_from_frames(
    const FrameActivity &activity) {
  std::vector<EventInstance> events;
  for (const auto &[label, lane] : activity.grid) {
    std::size_t t = 0;
    while (t < lane.size()) {
      if (!lane[t]) {
        ++t;
        continue;
      }
      std::size_t end = t;
      while (end < lane.size() && lane[end]) ++end;
      EventInstance e;
      e.file_id = activity.file_id;
      e.label = label;
      e.onset = static_cast<double>(t) * activity.frame_len;
      e.offset = static_cast<double>(end) * activity.frame_len;
      events.push_back(std::move(e));
      t = end;
    }
  }
  std::stable_sort(events.begin(), events.end(),
                   [](const EventInstance &a, const EventInstance &b) {
                     if (a.onset != b.onset) return a.onset < b.onset;
                     return a.label < b.label;
                   });
  return events;
}

std::vector<SegmentSpec> segment_timeline(const std::string &file_id,
                                          double duration, int length,
                                          int hop) {
  if (length <= 0) throw ConfigError("segment length must be positive");
  if (hop <= 0) throw ConfigError("segment hop must be positive");
  std::vector<SegmentSpec> segments;
  if (duration + kTimeEps < length) return segments;
  const int last_start =
      static_cast<int>(std::floor(duration - length + kTimeEps));
  for (int start = 0; start <= last_start; start += hop)
    segments.push_back({file_id, start, length});
  return segments;
}

TagSet segment_ground_truth_tags(std::span<const EventInstance> events,
                                 const SegmentSpec &segment,
                                 double min_overlap) {
  TagSet tags;
  for (const auto &e : events) {
    if (e.file_id != segment.file_id) continue;
    if (Overlap(e.onset, e.offset, segment.start, segment.End()) > min_overlap)
      tags.insert(e.label);
  }
  return tags;
}

std::map<std::string, double> segment_salience(
    std::span<const EventInstance> events, const SegmentSpec &segment) {
  std::map<std::string, std::pair<double, double>> acc;  // weighted sum, weight
  for (const auto &e : events) {
    if (e.file_id != segment.file_id) continue;
    const double w = Overlap(e.onset, e.offset, segment.start, segment.End());
    if (w <= 0.0) continue;
    auto &[sum, weight] = acc[e.label];
    sum += w * e.salience.value_or(1.0);
    weight += w;
  }
  std::map<std::string, double> out;
  for (const auto &[label, sw] : acc) out[label] = sw.first / sw.second;
  return out;
}

void SortEvents(std::vector<EventInstance> &events) {
  std::stable_sort(events.begin(), events.end(),
                   [](const EventInstance &a, const EventInstance &b) {
                     if (a.file_id != b.file_id) return a.file_id < b.file_id;
                     if (a.onset != b.onset) return a.onset < b.onset;
                     if (a.offset != b.offset) return a.offset < b.offset;
                     return a.label < b.label;
                   });
}

}  // namespace strongcrowd
