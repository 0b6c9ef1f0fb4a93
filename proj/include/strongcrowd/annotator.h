// include/strongcrowd/annotator.h

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

#ifndef STRONGCROWD_ANNOTATOR_H_
#define STRONGCROWD_ANNOTATOR_H_

// Crowd worker simulator.  Each class of a segment is answered
// independently: with probability 1 - trust the worker spams and says "yes"
// with its class-specific spam rate; otherwise it answers from perception,
// missing present classes more often when they are faint and occasionally
// tagging an absent one.

#include <map>
#include <span>
#include <string>
#include <vector>

#include "strongcrowd/campaign.h"
#include "strongcrowd/rng.h"
#include "strongcrowd/timeline.h"

namespace strongcrowd {

struct WorkerProfile {
  std::string worker_id;
  std::string population;
  double trust = 1.0;
  // P(yes) while spamming, indexed like the vocabulary.
  std::vector<double> spam_yes;
  double miss_prob = 0.0;
  double salience_slope = 0.0;
  double false_alarm_prob = 0.0;

  void Validate() const;
};

// A worker's answer for one segment.  Empty tags mean "none of the above".
struct SegmentAnnotation {
  std::string worker_id;
  SegmentSpec segment;
  TagSet tags;
  bool operator==(const SegmentAnnotation &) const = default;
};

struct Subpopulation {
  std::string name;
  double fraction = 0.0;
  double trust_lo = 0.0, trust_hi = 1.0;
  // Per-worker spam rate, shared by all classes, drawn from this range.
  double spam_yes_lo = 0.0, spam_yes_hi = 0.5;
};

struct PopulationMix {
  std::vector<Subpopulation> groups;
  double miss_prob = 0.05;
  double salience_slope = 0.2;
  double false_alarm_prob = 0.01;

  // diligent 0.4 (trust 0.85-1), average 0.5 (0.5-0.85), spammer 0.1 (0-0.15).
  static PopulationMix Default();
  // Fractions must be non-negative and sum to one (1e-9); throws ConfigError.
  void Validate() const;
};

// Each worker picks a subpopulation by its fraction, then trust and spam
// rate uniformly within the group's ranges.
std::vector<WorkerProfile> sample_worker_pool(
    int n, const PopulationMix &mix, std::span<const std::string> vocabulary,
    Rng &rng);

// Two uniforms are consumed per class, in vocabulary order, whichever branch
// is taken; streams stay aligned across parameter changes.  Classes missing
// from `salience` are treated as fully salient.
SegmentAnnotation annotate(const WorkerProfile &worker,
                           std::span<const std::string> vocabulary,
                           const SegmentSpec &segment, const TagSet &truth_tags,
                           const std::map<std::string, double> &salience,
                           Rng &rng);

// Probability that a trusting worker says "yes" to a present class.
double DetectionProbability(const WorkerProfile &worker, double salience);

// One annotation per (hit, assigned worker).  Every pair draws from its own
// stream derived from `seed`, so the output does not depend on iteration
// order.  Output is sorted by (segment, worker).
std::vector<SegmentAnnotation> simulate_campaign(
    std::span<const Hit> hits, std::span<const WorkerProfile> workers,
    std::span<const EventInstance> truth,
    std::span<const std::string> vocabulary, std::uint64_t seed);

// Annotations grouped by segment, in segment order.
std::map<SegmentSpec, std::vector<const SegmentAnnotation *>> GroupBySegment(
    std::span<const SegmentAnnotation> annotations);

}  // namespace strongcrowd

#endif  // STRONGCROWD_ANNOTATOR_H_
