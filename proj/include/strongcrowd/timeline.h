// include/strongcrowd/timeline.h

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

#ifndef STRONGCROWD_TIMELINE_H_
#define STRONGCROWD_TIMELINE_H_

// Interval and frame algebra shared by the whole pipeline.  All intervals
// are half-open, [onset, offset).

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace strongcrowd {

// A set of class labels, e.g. the tags a worker selected for one segment.
using TagSet = std::set<std::string>;

// One strong label.
struct EventInstance {
  std::string file_id;
  std::string label;
  double onset = 0.0;
  double offset = 0.0;
  // Perceptibility in [0, 1]; only the annotator simulator reads it.
  std::optional<double> salience;

  double Duration() const { return offset - onset; }
  bool operator==(const EventInstance &) const = default;
};

// One fixed-length segment of a file, on the integer-second grid.
struct SegmentSpec {
  std::string file_id;
  int start = 0;
  int length = 10;

  int End() const { return start + length; }
  auto operator<=>(const SegmentSpec &) const = default;
};

// Per-class boolean activity on a regular frame grid; frame t covers
// [t * frame_len, (t + 1) * frame_len).
struct FrameActivity {
  std::string file_id;
  double frame_len = 1.0;
  std::size_t num_frames = 0;
  std::map<std::string, std::vector<std::uint8_t>> grid;

  bool IsActive(const std::string &label, std::size_t frame) const;
  // Frames active for `label`, in increasing order.
  std::vector<std::size_t> ActiveFrames(const std::string &label) const;
  std::size_t CountActive() const;
};

// Length of the intersection of [a0, a1) and [b0, b1); zero when disjoint.
double Overlap(double a0, double a1, double b0, double b1);

// Number of whole frames of length frame_len in `duration` seconds.
std::size_t NumFrames(double duration, double frame_len);

// Checks onset >= 0, offset > onset, offset <= duration, salience in [0, 1],
// and that no two events of the same file and class overlap.  Throws
// InputError naming the offending event.
void ValidateEvents(std::span<const EventInstance> events, double duration);

// Frame t is active for class c iff an event of class c overlaps frame t by
// more than min_overlap seconds.  `vocabulary` pre-creates lanes for classes
// that may have no events.  Events must all belong to one file.
FrameActivity quantize_events_to_frames(
    std::span<const EventInstance> events, double duration,
    double frame_len = 1.0, double min_overlap = 0.0,
    std::span<const std::string> vocabulary = {});

// Each maximal run of active frames becomes one event spanning the run.
// Output is sorted by (onset, label).
std::vector<EventInstance> extract_events_from_frames(
    const FrameActivity &activity);

// Full-length segments with starts 0, hop, 2*hop, ..., in order.  Returns an
// empty list when duration < length.
std::vector<SegmentSpec> segment_timeline(const std::string &file_id,
                                          double duration, int length,
                                          int hop);

// The oracle weak label of a segment: classes with an event overlapping the
// segment by more than min_overlap seconds.
TagSet segment_ground_truth_tags(std::span<const EventInstance> events,
                                 const SegmentSpec &segment,
                                 double min_overlap = 0.0);

// Overlap-weighted mean salience per class over the events touching the
// segment.  Events without a salience count as fully salient.
std::map<std::string, double> segment_salience(
    std::span<const EventInstance> events, const SegmentSpec &segment);

// Sorts by (file, onset, offset, label).
void SortEvents(std::vector<EventInstance> &events);

}  // namespace strongcrowd

#endif  // STRONGCROWD_TIMELINE_H_
