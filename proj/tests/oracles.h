// tests/oracles.h

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

//
// Independent reference implementations used only by the tests.  They favour
// obviousness over speed and share no code with the library beyond its plain
// data types.

#ifndef STRONGCROWD_TESTS_ORACLES_H_
#define STRONGCROWD_TESTS_ORACLES_H_

#include <string>
#include <utility>
#include <vector>

#include "strongcrowd/campaign.h"
#include "strongcrowd/timeline.h"

namespace oracle {

// One item's opinions: (worker index, answered yes).
using ItemOpinions = std::vector<std::pair<int, bool>>;

struct Enumeration {
  std::vector<double> posterior_yes;
  double log_likelihood = 0.0;
  std::vector<double> trust, spam, spam_yes, spam_no;  // expected counts
};

// Sums the joint probability of every (true label, spam indicators)
// configuration of every item.
Enumeration EnumerateLatents(const std::vector<ItemOpinions> &items,
                             const std::vector<double> &trust,
                             const std::vector<double> &spam_yes,
                             double prior_yes = 0.5);

// Pairwise check of a worker assignment; returns one message per violation.
std::vector<std::string> CampaignViolations(
    const std::vector<strongcrowd::Hit> &hits, int workers_per_hit,
    int max_hits_per_worker, double min_separation);

// Largest number of simultaneously active events, by sweeping sorted
// boundaries (offsets before onsets at equal times).
int MaxPolyphony(const std::vector<strongcrowd::EventInstance> &events);

// Nominal alpha from explicit ordered pairs.  values[i] lists the answers
// (0/1) given on item i.
struct Alpha {
  double alpha = 0.0, observed = 0.0, expected = 0.0;
};
Alpha PairwiseAlpha(const std::vector<std::vector<int>> &values);

// True when some event of `label` intersects [t0, t1) with positive length.
bool Covers(const std::vector<strongcrowd::EventInstance> &events,
            const std::string &label, double t0, double t1);

}  // namespace oracle

#endif  // STRONGCROWD_TESTS_ORACLES_H_
