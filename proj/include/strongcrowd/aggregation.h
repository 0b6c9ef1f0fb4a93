// include/strongcrowd/aggregation.h

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

#ifndef STRONGCROWD_AGGREGATION_H_
#define STRONGCROWD_AGGREGATION_H_

// From weak segment tags to strong labels: stack the opinions of every
// segment covering a frame, keep frames where the share of "active" opinions
// reaches tau, and turn runs of kept frames into events.

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "strongcrowd/annotator.h"
#include "strongcrowd/campaign.h"
#include "strongcrowd/timeline.h"

namespace strongcrowd {

// Classes tagged by strictly more than half of the opinions.
TagSet majority_tags(std::span<const TagSet> opinions);
// Classes tagged by at least one opinion.
TagSet union_tags(std::span<const TagSet> opinions);

// All opinions (tag sets) given for one segment.
struct SegmentOpinions {
  SegmentSpec segment;
  std::vector<TagSet> opinions;
};

// Per-frame opinion counts of one file.  Every opinion covers every class,
// so the available count is shared by all classes.
struct FrameOpinionCounts {
  std::string file_id;
  double frame_len = 1.0;
  std::vector<int> available;
  std::map<std::string, std::vector<int>> active;

  std::size_t num_frames() const { return available.size(); }
};

// Frame t receives the opinions of every segment containing it.  Lanes are
// created for every vocabulary class.  A segment of another file, or one
// that does not fit in `duration`, is an InputError.
FrameOpinionCounts stack_opinions(const std::string &file_id, double duration,
                                  std::span<const SegmentOpinions> segments,
                                  std::span<const std::string> vocabulary,
                                  double frame_len = 1.0);

// Frame active iff available > 0 and active / available >= tau.
FrameActivity binarize(const FrameOpinionCounts &counts, double tau);

enum class ModeKind { kAllAnnotators, kCompetenceFiltered, kMaceTags };

struct AggregationMode {
  ModeKind kind = ModeKind::kAllAnnotators;
  double competence_threshold = 0.6;  // kCompetenceFiltered only
  double tau = 0.8;

  static AggregationMode AllAnnotators(double tau = 0.8);
  static AggregationMode CompetenceFiltered(double threshold = 0.6,
                                            double tau = 0.8);
  static AggregationMode MaceTags(double tau = 0.8);

  // "all", "filtered", "mace"
  std::string Name() const;
  static AggregationMode Parse(const std::string &name, double tau,
                               double competence_threshold);
  void Validate() const;
};

// What competence estimation contributes to aggregation.
struct MaceOutputs {
  std::map<std::string, double> competence;
  std::map<SegmentSpec, TagSet> tags;
};

struct FileEstimate {
  FrameOpinionCounts counts;
  FrameActivity activity;
  std::vector<EventInstance> events;
};

// The opinion source a mode stacks, grouped by segment: raw annotations for
// kAllAnnotators, annotations of workers above the competence threshold for
// kCompetenceFiltered, and one predicted tag set per segment for kMaceTags.
std::vector<SegmentOpinions> OpinionSource(
    std::span<const SegmentAnnotation> annotations, const MaceOutputs *mace,
    const AggregationMode &mode);

// extract_events_from_frames(binarize(stack_opinions(...))) for every file.
// Opinions on files not in `files` are an InputError.  `mace` may be null
// for kAllAnnotators.
std::map<std::string, FileEstimate> estimate_strong_labels(
    std::span<const FileInfo> files,
    std::span<const SegmentAnnotation> annotations, const MaceOutputs *mace,
    const AggregationMode &mode, std::span<const std::string> vocabulary);

}  // namespace strongcrowd

#endif  // STRONGCROWD_AGGREGATION_H_
