// src/annotator.cc

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

#include "strongcrowd/annotator.h"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "strongcrowd/errors.h"

namespace strongcrowd {

namespace {

bool IsProbability(double p) { return p >= 0.0 && p <= 1.0; }

}  // namespace

void WorkerProfile::Validate() const {
  if (!IsProbability(trust) || !IsProbability(miss_prob) ||
      !IsProbability(false_alarm_prob))
    throw ConfigError("worker " + worker_id + ": probability outside [0,1]");
  if (salience_slope < 0.0)
    throw ConfigError("worker " + worker_id + ": negative salience_slope");
  for (double p : spam_yes)
    if (!IsProbability(p))
      throw ConfigError("worker " + worker_id + ": spam rate outside [0,1]");
}

PopulationMix PopulationMix::Default() {
  PopulationMix mix;
  mix.groups = {
      {"diligent", 0.4, 0.85, 1.0, 0.0, 0.5},
      {"average", 0.5, 0.5, 0.85, 0.0, 0.5},
      {"spammer", 0.1, 0.0, 0.15, 0.0, 0.5},
  };
  return mix;
}

void PopulationMix::Validate() const {
  if (groups.empty()) throw ConfigError("population mix is empty");
  double total = 0.0;
  for (const auto &g : groups) {
    if (g.fraction < 0.0)
      throw ConfigError("subpopulation " + g.name + " has negative fraction");
    if (!IsProbability(g.trust_lo) || !IsProbability(g.trust_hi) ||
        g.trust_lo > g.trust_hi)
      throw ConfigError("subpopulation " + g.name + " has bad trust range");
    if (!IsProbability(g.spam_yes_lo) || !IsProbability(g.spam_yes_hi) ||
        g.spam_yes_lo > g.spam_yes_hi)
      throw ConfigError("subpopulation " + g.name + " has bad spam range");
    total += g.fraction;
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw ConfigError("population fractions must sum to 1");
  if (!IsProbability(miss_prob) || !IsProbability(false_alarm_prob) ||
      salience_slope < 0.0)
    throw ConfigError("population perception parameters out of range");
}

std::vector<WorkerProfile> sample_worker_pool(
    int n, const PopulationMix &mix, std::span<const std::string> vocabulary,
    Rng &rng) {
  mix.Validate();
  if (n < 0) throw ConfigError("worker pool size must be >= 0");
  std::vector<WorkerProfile> pool;
  pool.reserve(n);
  for (int i = 0; i < n; ++i) {
    double u = rng.Uniform();
    std::size_t g = 0;
    while (g + 1 < mix.groups.size() && u >= mix.groups[g].fraction) {
      u -= mix.groups[g].fraction;
      ++g;
    }
    const auto &group = mix.groups[g];
    WorkerProfile w;
    w.worker_id = WorkerName(i);
    w.population = group.name;
    w.trust = rng.Uniform(group.trust_lo, group.trust_hi);
    w.spam_yes.assign(vocabulary.size(),
                      rng.Uniform(group.spam_yes_lo, group.spam_yes_hi));
    w.miss_prob = mix.miss_prob;
    w.salience_slope = mix.salience_slope;
    w.false_alarm_prob = mix.false_alarm_prob;
    pool.push_back(std::move(w));
  }
  return pool;
}

double DetectionProbability(const WorkerProfile &worker, double salience) {
  const double miss = std::min(
      1.0, worker.miss_prob + worker.salience_slope * (1.0 - salience));
  return 1.0 - std::max(0.0, miss);
}

SegmentAnnotation annotate(const WorkerProfile &worker,
                           std::span<const std::string> vocabulary,
                           const SegmentSpec &segment, const TagSet &truth_tags,
                           const std::map<std::string, double> &salience,
                           Rng &rng) {
  SegmentAnnotation out;
  out.worker_id = worker.worker_id;
  out.segment = segment;
  for (std::size_t c = 0; c < vocabulary.size(); ++c) {
    const std::string &label = vocabulary[c];
    const bool spamming = rng.Uniform() >= worker.trust;
    const double u = rng.Uniform();
    double p_yes;
    if (spamming) {
      p_yes = c < worker.spam_yes.size() ? worker.spam_yes[c] : 0.0;
    } else if (truth_tags.count(label)) {
      auto it = salience.find(label);
      p_yes = DetectionProbability(worker,
                                   it == salience.end() ? 1.0 : it->second);
    } else {
      p_yes = worker.false_alarm_prob;
    }
    if (u < p_yes) out.tags.insert(label);
  }
  return out;
}

std::vector<SegmentAnnotation> simulate_campaign(
    std::span<const Hit> hits, std::span<const WorkerProfile> workers,
    std::span<const EventInstance> truth,
    std::span<const std::string> vocabulary, std::uint64_t seed) {
  std::unordered_map<std::string, const WorkerProfile *> by_id;
  for (const auto &w : workers) by_id[w.worker_id] = &w;
  std::map<std::string, std::vector<EventInstance>> by_file;
  for (const auto &e : truth) by_file[e.file_id].push_back(e);

  std::vector<SegmentAnnotation> out;
  for (const auto &hit : hits) {
    const auto &events = by_file[hit.segment.file_id];
    const TagSet tags = segment_ground_truth_tags(events, hit.segment);
    const auto salience = segment_salience(events, hit.segment);
    for (const auto &worker_id : hit.workers) {
      auto it = by_id.find(worker_id);
      if (it == by_id.end())
        throw InputError("hit " + std::to_string(hit.hit_id) +
                         " references unknown worker " + worker_id);
      Rng rng = Rng::Derive(seed, "annotate/" + std::to_string(hit.hit_id) +
                                      "/" + worker_id);
      out.push_back(
          annotate(*it->second, vocabulary, hit.segment, tags, salience, rng));
    }
  }
  std::sort(out.begin(), out.end(), [](const auto &a, const auto &b) {
    if (a.segment != b.segment) return a.segment < b.segment;
    return a.worker_id < b.worker_id;
  });
  return out;
}

std::map<SegmentSpec, std::vector<const SegmentAnnotation *>> GroupBySegment(
    std::span<const SegmentAnnotation> annotations) {
  std::map<SegmentSpec, std::vector<const SegmentAnnotation *>> groups;
  for (const auto &a : annotations) groups[a.segment].push_back(&a);
  return groups;
}

}  // namespace strongcrowd
