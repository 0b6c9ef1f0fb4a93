// src/aggregation.cc

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

#include "strongcrowd/aggregation.h"

#include <cmath>

#include "strongcrowd/errors.h"
#include "strongcrowd/mace.h"

namespace strongcrowd {

namespace {

std::map<std::string, int> CountTags(std::span<const TagSet> opinions) {
  std::map<std::string, int> counts;
  for (const auto &tags : opinions)
    for (const auto &t : tags) ++counts[t];
  return counts;
}

}  // namespace

TagSet majority_tags(std::span<const TagSet> opinions) {
  TagSet out;
  for (const auto &[label, n] : CountTags(opinions))
    if (2 * n > static_cast<int>(opinions.size())) out.insert(label);
  return out;
}

TagSet union_tags(std::span<const TagSet> opinions) {
  TagSet out;
  for (const auto &tags : opinions) out.insert(tags.begin(), tags.end());
  return out;
}

FrameOpinionCounts stack_opinions(const std::string &file_id, double duration,
                                  std::span<const SegmentOpinions> segments,
                                  std::span<const std::string> vocabulary,
                                  double frame_len) {
  FrameOpinionCounts counts;
  counts.file_id = file_id;
  counts.frame_len = frame_len;
  const std::size_t n = NumFrames(duration, frame_len);
  counts.available.assign(n, 0);
  for (const auto &label : vocabulary) counts.active[label].assign(n, 0);

  for (const auto &so : segments) {
    const auto &seg = so.segment;
    if (seg.file_id != file_id)
      throw InputError("segment of unknown file '" + seg.file_id +
                       "' stacked onto '" + file_id + "'");
    if (seg.start < 0 || seg.End() > duration + 1e-9)
      throw InputError("segment " + file_id + "@" + std::to_string(seg.start) +
                       " does not fit the file");
    // Frames lying inside [start, end).
    const auto first = static_cast<std::size_t>(
        std::ceil(seg.start / frame_len - 1e-9));
    const auto last = static_cast<std::size_t>(
        std::floor(seg.End() / frame_len + 1e-9));
    const int k = static_cast<int>(so.opinions.size());
    for (std::size_t t = first; t < last && t < n; ++t) counts.available[t] += k;
    for (const auto &tags : so.opinions) {
      for (const auto &label : tags) {
        auto &lane = counts.active[label];
        lane.resize(n, 0);
        for (std::size_t t = first; t < last && t < n; ++t) ++lane[t];
      }
    }
  }
  return counts;
}

FrameActivity binarize(const FrameOpinionCounts &counts, double tau) {
  if (!(tau > 0.0 && tau <= 1.0)) throw ConfigError("tau must be in (0,1]");
  FrameActivity activity;
  activity.file_id = counts.file_id;
  activity.frame_len = counts.frame_len;
  activity.num_frames = counts.num_frames();
  for (const auto &[label, lane] : counts.active) {
    auto &out = activity.grid[label];
    out.assign(activity.num_frames, 0);
    for (std::size_t t = 0; t < activity.num_frames; ++t) {
      const int avail = counts.available[t];
      if (avail > 0 && static_cast<double>(lane[t]) / avail >= tau) out[t] = 1;
    }
  }
  return activity;
}

AggregationMode AggregationMode::AllAnnotators(double tau) {
  return {ModeKind::kAllAnnotators, 0.6, tau};
}
AggregationMode AggregationMode::CompetenceFiltered(double threshold,
                                                    double tau) {
  return {ModeKind::kCompetenceFiltered, threshold, tau};
}
AggregationMode AggregationMode::MaceTags(double tau) {
  return {ModeKind::kMaceTags, 0.6, tau};
}

std::string AggregationMode::Name() const {
  switch (kind) {
    case ModeKind::kAllAnnotators: return "all";
    case ModeKind::kCompetenceFiltered: return "filtered";
    case ModeKind::kMaceTags: return "mace";
  }
  return "?";
}

AggregationMode AggregationMode::Parse(const std::string &name, double tau,
                                       double competence_threshold) {
  AggregationMode m;
  if (name == "all") m = AllAnnotators(tau);
  else if (name == "filtered") m = CompetenceFiltered(competence_threshold, tau);
  else if (name == "mace") m = MaceTags(tau);
  else throw ConfigError("unknown aggregation mode '" + name +
                         "' (expected all, filtered or mace)");
  m.Validate();
  return m;
}

void AggregationMode::Validate() const {
  if (!(tau > 0.0 && tau <= 1.0)) throw ConfigError("tau must be in (0,1]");
  if (competence_threshold < 0.0 || competence_threshold > 1.0)
    throw ConfigError("competence threshold must be in [0,1]");
}

std::vector<SegmentOpinions> OpinionSource(
    std::span<const SegmentAnnotation> annotations, const MaceOutputs *mace,
    const AggregationMode &mode) {
  std::vector<SegmentOpinions> out;
  if (mode.kind == ModeKind::kMaceTags) {
    if (!mace) throw InputError("mode 'mace' needs MACE tag predictions");
    for (const auto &[seg, tags] : mace->tags) out.push_back({seg, {tags}});
    return out;
  }
  std::vector<SegmentAnnotation> filtered;
  std::span<const SegmentAnnotation> source = annotations;
  if (mode.kind == ModeKind::kCompetenceFiltered) {
    if (!mace) throw InputError("mode 'filtered' needs competence estimates");
    filtered = filter_by_competence(annotations, mace->competence,
                                    mode.competence_threshold);
    source = filtered;
  }
  for (const auto &[seg, group] : GroupBySegment(source)) {
    SegmentOpinions so{seg, {}};
    for (const auto *a : group) so.opinions.push_back(a->tags);
    out.push_back(std::move(so));
  }
  return out;
}

std::map<std::string, FileEstimate> estimate_strong_labels(
    std::span<const FileInfo> files,
    std::span<const SegmentAnnotation> annotations, const MaceOutputs *mace,
    const AggregationMode &mode, std::span<const std::string> vocabulary) {
  mode.Validate();
  std::map<std::string, std::vector<SegmentOpinions>> by_file;
  for (const auto &f : files) by_file[f.file_id];
  for (auto &so : OpinionSource(annotations, mace, mode)) {
    auto it = by_file.find(so.segment.file_id);
    if (it == by_file.end())
      throw InputError("opinions reference unknown file '" +
                       so.segment.file_id + "'");
    it->second.push_back(std::move(so));
  }
  std::map<std::string, FileEstimate> out;
  for (const auto &f : files) {
    FileEstimate est;
    est.counts = stack_opinions(f.file_id, f.duration, by_file[f.file_id],
                                vocabulary);
    est.activity = binarize(est.counts, mode.tau);
    est.events = extract_events_from_frames(est.activity);
    out[f.file_id] = std::move(est);
  }
  return out;
}

}  // namespace strongcrowd
