// tests/aggregation_test.cc

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

#include <cmath>

#include "doctest.h"
#include "oracles.h"
#include "strongcrowd/aggregation.h"
#include "strongcrowd/errors.h"
#include "strongcrowd/rng.h"

using namespace strongcrowd;

namespace {

const std::vector<std::string> kVocab{"A", "B"};

// `workers` perfect opinions on every segment of the file.
std::vector<SegmentAnnotation> PerfectAnnotations(
    const std::vector<EventInstance> &truth, const std::string &file,
    double duration, int workers) {
  std::vector<SegmentAnnotation> out;
  for (const auto &seg : segment_timeline(file, duration, 10, 1))
    for (int w = 0; w < workers; ++w)
      out.push_back({"w" + std::to_string(w), seg,
                     segment_ground_truth_tags(truth, seg)});
  return out;
}

std::vector<TagSet> Opinions(int n, int with_dog) {
  std::vector<TagSet> v(n);
  for (int i = 0; i < with_dog; ++i) v[i].insert("dog");
  return v;
}

}  // namespace

TEST_CASE("majority and union") {
  auto five3 = Opinions(5, 3), five2 = Opinions(5, 2), four2 = Opinions(4, 2);
  CHECK(majority_tags(five3) == TagSet{"dog"});
  CHECK(majority_tags(five2).empty());
  CHECK(majority_tags(four2).empty());
  auto five1 = Opinions(5, 1);
  CHECK(union_tags(five1) == TagSet{"dog"});
  CHECK(union_tags(std::vector<TagSet>{}).empty());
}

TEST_CASE("binarize thresholds") {
  FrameOpinionCounts c;
  c.available = {10, 10, 0, 5};
  c.active["A"] = {8, 7, 0, 5};
  auto act = binarize(c, 0.8);
  CHECK(act.IsActive("A", 0));
  CHECK_FALSE(act.IsActive("A", 1));
  CHECK_FALSE(act.IsActive("A", 2));
  CHECK(act.IsActive("A", 3));
  CHECK_THROWS_AS(binarize(c, 0.0), ConfigError);
  CHECK_THROWS_AS(binarize(c, 1.5), ConfigError);
}

TEST_CASE("worked example: (A,12,15) in 30 s at tau 0.8 gives (A,10,17)") {
  std::vector<EventInstance> truth{{"f", "A", 12, 15, std::nullopt}};
  std::vector<FileInfo> files{{"f", 30}};
  auto ann = PerfectAnnotations(truth, "f", 30, 1);
  auto est = estimate_strong_labels(files, ann, nullptr,
                                    AggregationMode::AllAnnotators(0.8), kVocab);
  REQUIRE(est.at("f").events.size() == 1);
  const auto &e = est.at("f").events[0];
  CHECK(e.label == "A");
  CHECK(e.onset == 10.0);
  CHECK(e.offset == 17.0);
  // Direct count: frame 10 is covered by starts 1..10, of which 3..10 (8)
  // overlap the event; frame 9 by starts 0..9, of which 3..9 (7).
  const auto &counts = est.at("f").counts;
  CHECK(counts.available[10] == 10);
  CHECK(counts.active.at("A")[10] == 8);
  CHECK(counts.active.at("A")[9] == 7);
}

TEST_CASE("availability equals covering-segment arithmetic") {
  std::vector<EventInstance> truth;
  auto ann = PerfectAnnotations(truth, "f", 180, 5);
  std::vector<SegmentOpinions> so;
  for (const auto &[seg, group] : GroupBySegment(ann)) {
    SegmentOpinions s{seg, {}};
    for (const auto *a : group) s.opinions.push_back(a->tags);
    so.push_back(s);
  }
  auto c = stack_opinions("f", 180, so, kVocab);
  REQUIRE(c.num_frames() == 180);
  for (int t = 0; t < 180; ++t) {
    const int covering = std::min(t, 170) - std::max(0, t - 9) + 1;
    CHECK(c.available[t] == 5 * covering);
    if (t >= 9 && t <= 170) CHECK(c.available[t] == 50);
  }
  std::vector<SegmentOpinions> wrong{{{"g", 0, 10}, {}}};
  CHECK_THROWS_AS(stack_opinions("f", 180, wrong, kVocab), InputError);
  std::vector<SegmentOpinions> beyond{{{"f", 175, 10}, {}}};
  CHECK_THROWS_AS(stack_opinions("f", 180, beyond, kVocab), InputError);
}

TEST_CASE("mode MaceTags: one opinion per segment") {
  std::vector<EventInstance> truth{{"f", "A", 50, 53, std::nullopt}};
  std::vector<FileInfo> files{{"f", 180}};
  auto ann = PerfectAnnotations(truth, "f", 180, 5);
  MaceOutputs mace;
  for (const auto &seg : segment_timeline("f", 180, 10, 1))
    mace.tags[seg] = segment_ground_truth_tags(truth, seg);
  auto est = estimate_strong_labels(files, ann, &mace,
                                    AggregationMode::MaceTags(0.8), kVocab);
  const auto &c = est.at("f").counts;
  CHECK(c.available[0] == 1);
  CHECK(c.available[90] == 10);
  REQUIRE(est.at("f").events.size() == 1);
  CHECK(est.at("f").events[0].onset == 48.0);
  CHECK(est.at("f").events[0].offset == 55.0);
  CHECK_THROWS_AS(estimate_strong_labels(files, ann, nullptr,
                                         AggregationMode::MaceTags(), kVocab),
                  InputError);
}

TEST_CASE("mode CompetenceFiltered drops low-competence workers") {
  std::vector<FileInfo> files{{"f", 30}};
  std::vector<SegmentAnnotation> ann;
  for (const auto &seg : segment_timeline("f", 30, 10, 1)) {
    ann.push_back({"good", seg, {}});
    ann.push_back({"bad", seg, {"A"}});
  }
  MaceOutputs mace;
  mace.competence = {{"good", 0.9}, {"bad", 0.1}};
  auto all = estimate_strong_labels(files, ann, &mace,
                                    AggregationMode::AllAnnotators(0.5), kVocab);
  auto filt = estimate_strong_labels(
      files, ann, &mace, AggregationMode::CompetenceFiltered(0.6, 0.5), kVocab);
  CHECK(all.at("f").events.size() == 1);
  CHECK(filt.at("f").events.empty());
  CHECK(filt.at("f").counts.available[15] == 10);
}

TEST_CASE("perfect annotators at tau 1 reproduce quantized truth") {
  // Events clear of the edges and of each other, so every frame inside
  // them is seen by full stacks of annotators.
  std::vector<EventInstance> truth{{"f", "A", 13.4, 18.2, std::nullopt},
                                   {"f", "A", 30, 31, std::nullopt},
                                   {"f", "B", 20.5, 40, std::nullopt}};
  std::vector<FileInfo> files{{"f", 60}};
  auto ann = PerfectAnnotations(truth, "f", 60, 3);
  auto est = estimate_strong_labels(files, ann, nullptr,
                                    AggregationMode::AllAnnotators(1.0), kVocab);
  auto expect = extract_events_from_frames(quantize_events_to_frames(truth, 60));
  CHECK(est.at("f").events == expect);
}

TEST_CASE("property: boundary extension law for isolated interior events") {
  Rng rng(31);
  for (double tau : {0.5, 0.8, 0.9, 1.0}) {
    const int extend = static_cast<int>(std::floor((1.0 - tau) * 10 + 1e-9));
    for (int trial = 0; trial < 50; ++trial) {
      // Clear of the first and last 19 s, where frames have fewer covering
      // segments.
      const int on = 19 + static_cast<int>(rng.Below(40));
      const int off = on + 1 + static_cast<int>(rng.Below(10));
      std::vector<EventInstance> truth{{"f", "A", double(on), double(off), {}}};
      std::vector<FileInfo> files{{"f", 100}};
      auto ann = PerfectAnnotations(truth, "f", 100, 1);
      auto est = estimate_strong_labels(
          files, ann, nullptr, AggregationMode::AllAnnotators(tau), kVocab);
      REQUIRE(est.at("f").events.size() == 1);
      CHECK(est.at("f").events[0].onset == on - extend);
      CHECK(est.at("f").events[0].offset == off + extend);
    }
  }
}

TEST_CASE("close same-class events merge under stacking") {
  // Gap of 4 frames < 2 x extension: the two events join.
  std::vector<EventInstance> truth{{"f", "A", 20, 22, {}}, {"f", "A", 26, 28, {}}};
  std::vector<FileInfo> files{{"f", 60}};
  auto ann = PerfectAnnotations(truth, "f", 60, 1);
  auto est = estimate_strong_labels(files, ann, nullptr,
                                    AggregationMode::AllAnnotators(0.8), kVocab);
  REQUIRE(est.at("f").events.size() == 1);
  CHECK(est.at("f").events[0].onset == 18.0);
  CHECK(est.at("f").events[0].offset == 30.0);
}

TEST_CASE("property: active frames are antitone in tau") {
  Rng rng(8);
  FrameOpinionCounts c;
  for (int t = 0; t < 200; ++t) {
    const int avail = static_cast<int>(rng.Below(51));
    c.available.push_back(avail);
    c.active["A"].push_back(avail ? static_cast<int>(rng.Below(avail + 1)) : 0);
  }
  FrameActivity prev = binarize(c, 0.05);
  for (double tau = 0.1; tau <= 1.0 + 1e-9; tau += 0.05) {
    auto act = binarize(c, std::min(tau, 1.0));
    for (std::size_t t = 0; t < 200; ++t)
      if (act.IsActive("A", t)) CHECK(prev.IsActive("A", t));
    prev = act;
  }
}

TEST_CASE("empty annotations give no events") {
  std::vector<FileInfo> files{{"f", 30}};
  auto est = estimate_strong_labels(files, {}, nullptr,
                                    AggregationMode::AllAnnotators(), kVocab);
  CHECK(est.at("f").events.empty());
  CHECK(est.at("f").counts.available[5] == 0);
}

TEST_CASE("AggregationMode names") {
  CHECK(AggregationMode::Parse("all", 0.8, 0.6).kind == ModeKind::kAllAnnotators);
  CHECK(AggregationMode::Parse("filtered", 0.8, 0.7).competence_threshold == 0.7);
  CHECK(AggregationMode::MaceTags().Name() == "mace");
  CHECK_THROWS_AS(AggregationMode::Parse("median", 0.8, 0.6), ConfigError);
  CHECK_THROWS_AS(AggregationMode::Parse("all", 0.0, 0.6), ConfigError);
}
