// tests/timeline_test.cc

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

#include "doctest.h"
#include "oracles.h"
#include "strongcrowd/errors.h"
#include "strongcrowd/rng.h"
#include "strongcrowd/timeline.h"

using namespace strongcrowd;

namespace {

EventInstance Ev(const std::string &label, double on, double off,
                 const std::string &file = "f") {
  return {file, label, on, off, std::nullopt};
}

std::vector<std::size_t> Range(std::size_t a, std::size_t b) {
  std::vector<std::size_t> v;
  for (std::size_t i = a; i < b; ++i) v.push_back(i);
  return v;
}

}  // namespace

TEST_CASE("quantize: aligned and unaligned events") {
  std::vector<EventInstance> ev{Ev("A", 12.0, 15.0)};
  auto act = quantize_events_to_frames(ev, 30.0);
  CHECK(act.num_frames == 30);
  CHECK(act.ActiveFrames("A") == Range(12, 15));

  ev = {Ev("A", 12.3, 15.2)};
  CHECK(quantize_events_to_frames(ev, 30.0).ActiveFrames("A") == Range(12, 16));

  auto empty = quantize_events_to_frames({}, 30.0);
  CHECK(empty.CountActive() == 0);
  CHECK(empty.num_frames == 30);
}

TEST_CASE("quantize: min_overlap and vocabulary") {
  std::vector<EventInstance> ev{Ev("A", 12.9, 15.05)};
  CHECK(quantize_events_to_frames(ev, 30.0, 1.0, 0.2).ActiveFrames("A") ==
        Range(13, 15));
  std::vector<std::string> vocab{"A", "B"};
  auto act = quantize_events_to_frames(ev, 30.0, 1.0, 0.0, vocab);
  CHECK(act.grid.count("B") == 1);
  CHECK(act.ActiveFrames("B").empty());
}

TEST_CASE("quantize: rejects events past the end and mixed files") {
  std::vector<EventInstance> ev{Ev("A", 25.0, 31.0)};
  CHECK_THROWS_AS(quantize_events_to_frames(ev, 30.0), InputError);
  ev = {Ev("A", 1, 2, "f"), Ev("A", 3, 4, "g")};
  CHECK_THROWS_AS(quantize_events_to_frames(ev, 30.0), InputError);
}

TEST_CASE("ValidateEvents: same-class overlap and bad intervals") {
  std::vector<EventInstance> ok{Ev("A", 1, 3), Ev("A", 3, 5), Ev("B", 2, 4)};
  CHECK_NOTHROW(ValidateEvents(ok, 10.0));
  std::vector<EventInstance> overlap{Ev("A", 1, 3), Ev("A", 2.5, 5)};
  CHECK_THROWS_AS(ValidateEvents(overlap, 10.0), InputError);
  std::vector<EventInstance> inverted{Ev("A", 3, 3)};
  CHECK_THROWS_AS(ValidateEvents(inverted, 10.0), InputError);
}

TEST_CASE("extract: runs become events") {
  FrameActivity act;
  act.file_id = "f";
  act.num_frames = 30;
  act.grid["A"].assign(30, 0);
  for (int t : {12, 13, 14}) act.grid["A"][t] = 1;
  auto ev = extract_events_from_frames(act);
  REQUIRE(ev.size() == 1);
  CHECK(ev[0] == Ev("A", 12.0, 15.0));

  act.grid["A"].assign(30, 0);
  act.grid["A"][3] = act.grid["A"][5] = 1;
  ev = extract_events_from_frames(act);
  REQUIRE(ev.size() == 2);
  CHECK(ev[0] == Ev("A", 3.0, 4.0));
  CHECK(ev[1] == Ev("A", 5.0, 6.0));

  act.grid["A"].assign(30, 0);
  CHECK(extract_events_from_frames(act).empty());

  act.grid["A"].assign(30, 1);
  ev = extract_events_from_frames(act);
  REQUIRE(ev.size() == 1);
  CHECK(ev[0] == Ev("A", 0.0, 30.0));
}

TEST_CASE("property: quantize/extract round trip") {
  Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const double duration = 20 + rng.Below(40);
    std::vector<EventInstance> ev;
    for (const char *label : {"A", "B"}) {
      double t = rng.Uniform(0, 3);
      while (true) {
        const double on = t, off = on + rng.Uniform(0.2, 6);
        if (off > duration) break;
        ev.push_back(Ev(label, on, off));
        t = off + rng.Uniform(0, 4);
      }
    }
    auto once = extract_events_from_frames(quantize_events_to_frames(ev, duration));
    auto twice =
        extract_events_from_frames(quantize_events_to_frames(once, duration));
    CHECK(once == twice);
    // Frame-aligned lists come back unchanged (after merging touching runs,
    // which the aligned generator below never produces).
    std::vector<EventInstance> aligned;
    for (const auto &e : once) aligned.push_back(e);
    CHECK(extract_events_from_frames(quantize_events_to_frames(aligned, duration)) ==
          aligned);
    // Nonzero-overlap rule against a direct interval check.
    auto act = quantize_events_to_frames(ev, duration);
    for (const char *label : {"A", "B"})
      for (std::size_t t = 0; t < act.num_frames; ++t)
        CHECK(act.IsActive(label, t) == oracle::Covers(ev, label, t, t + 1.0));
  }
}

TEST_CASE("segment_timeline counts") {
  CHECK(segment_timeline("f", 180, 10, 1).size() == 171);
  auto one = segment_timeline("f", 10, 10, 1);
  REQUIRE(one.size() == 1);
  CHECK(one[0].start == 0);
  auto segs = segment_timeline("f", 30, 10, 1);
  REQUIRE(segs.size() == 21);
  CHECK(segs.front().start == 0);
  CHECK(segs.back().start == 20);
  CHECK(segment_timeline("f", 9, 10, 1).empty());
}

TEST_CASE("property: segment count formula and frame coverage") {
  for (int duration = 10; duration <= 60; duration += 7)
    for (int length : {1, 5, 10})
      for (int hop : {1, 2, 3}) {
        if (duration < length) continue;
        auto segs = segment_timeline("f", duration, length, hop);
        CHECK(segs.size() ==
              static_cast<std::size_t>((duration - length) / hop + 1));
        for (const auto &s : segs) {
          CHECK(s.start % hop == 0);
          CHECK(s.End() <= duration);
        }
      }
  // Interior frames at hop 1 are covered by exactly `length` segments.
  auto segs = segment_timeline("f", 180, 10, 1);
  const int last_start = segs.back().start;
  for (int t = 0; t < 180; ++t) {
    int covering = 0;
    for (const auto &s : segs)
      if (s.start <= t && t < s.End()) ++covering;
    const int lo = std::max(0, t - 10 + 1), hi = std::min(t, last_start);
    CHECK(covering == hi - lo + 1);
    if (t >= 9 && t <= last_start) CHECK(covering == 10);
  }
}

TEST_CASE("segment_ground_truth_tags") {
  std::vector<EventInstance> ev{Ev("A", 12, 15)};
  CHECK(segment_ground_truth_tags(ev, {"f", 3, 10}) == TagSet{"A"});
  CHECK(segment_ground_truth_tags(ev, {"f", 2, 10}).empty());
  ev.push_back(Ev("B", 0, 30));
  CHECK(segment_ground_truth_tags(ev, {"f", 5, 10}) == TagSet{"A", "B"});
  // min_overlap: [12,13) overlaps by exactly 1 s.
  CHECK(segment_ground_truth_tags(ev, {"f", 3, 10}, 1.0) == TagSet{"B"});
}

TEST_CASE("property: tags agree with direct interval intersection") {
  Rng rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<EventInstance> ev;
    for (const char *label : {"A", "B", "C"}) {
      const double on = rng.Uniform(0, 50);
      ev.push_back(Ev(label, on, on + rng.Uniform(0.1, 10)));
    }
    for (const auto &seg : segment_timeline("f", 60, 10, 1)) {
      TagSet expect;
      for (const char *label : {"A", "B", "C"})
        if (oracle::Covers(ev, label, seg.start, seg.End())) expect.insert(label);
      CHECK(segment_ground_truth_tags(ev, seg) == expect);
    }
  }
}

TEST_CASE("segment_salience is overlap weighted") {
  std::vector<EventInstance> ev{{"f", "A", 0, 4, 0.2}, {"f", "A", 6, 8, 0.8},
                                {"f", "B", 0, 1, std::nullopt}};
  auto s = segment_salience(ev, {"f", 0, 10});
  CHECK(s["A"] == doctest::Approx((4 * 0.2 + 2 * 0.8) / 6).epsilon(1e-12));
  CHECK(s["B"] == 1.0);
}

TEST_CASE("SortEvents orders by file, onset, offset, label") {
  std::vector<EventInstance> ev{Ev("B", 1, 2), Ev("A", 1, 2), Ev("A", 0, 5, "e")};
  SortEvents(ev);
  CHECK(ev[0].file_id == "e");
  CHECK(ev[1].label == "A");
  CHECK(ev[2].label == "B");
}
