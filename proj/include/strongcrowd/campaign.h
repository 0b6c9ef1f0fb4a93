// include/strongcrowd/campaign.h

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

#ifndef STRONGCROWD_CAMPAIGN_H_
#define STRONGCROWD_CAMPAIGN_H_

#include <span>
#include <string>
#include <vector>

#include "strongcrowd/rng.h"
#include "strongcrowd/timeline.h"

namespace strongcrowd {

struct FileInfo {
  std::string file_id;
  double duration = 0.0;
  bool operator==(const FileInfo &) const = default;
};

struct CampaignConfig {
  int length = 10;
  int hop = 1;
  int workers_per_hit = 5;
  int worker_pool_size = 680;
  int max_hits_per_worker = 50;
  // A worker never receives two segments of one file whose starts differ by
  // less than this.
  double min_separation = 15.0;

  void Validate() const;
};

// One unit annotation task: a segment and the workers that tag it.
struct Hit {
  int hit_id = 0;
  SegmentSpec segment;
  std::vector<std::string> workers;
  bool operator==(const Hit &) const = default;
};

// "W0000", "W0001", ...
std::string WorkerName(int index);

// Every full-length segment of every file becomes one hit, numbered in
// (file, start) order, with workers_per_hit distinct workers drawn from a
// pool of worker_pool_size.  Files are visited in random order and each
// file's hits left to right; every hit takes the least loaded eligible
// workers (random tie-break).  A hit that still cannot be filled triggers a
// bounded augmenting search that moves workers between hits.
//
// Throws AssignmentError naming the binding constraint when the constraints
// cannot be met.
std::vector<Hit> build_campaign(std::span<const FileInfo> files,
                                const CampaignConfig &config, Rng &rng);

}  // namespace strongcrowd

#endif  // STRONGCROWD_CAMPAIGN_H_
