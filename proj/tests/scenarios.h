// tests/scenarios.h

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
// Small synthetic data sets shared by the unit and acceptance tests.

#ifndef STRONGCROWD_TESTS_SCENARIOS_H_
#define STRONGCROWD_TESTS_SCENARIOS_H_

#include <string>
#include <vector>

#include "oracles.h"
#include "strongcrowd/annotator.h"
#include "strongcrowd/mace.h"
#include "strongcrowd/soundscape.h"

namespace scenario {

struct SpammerPool {
  std::vector<strongcrowd::WorkerProfile> workers;  // first `spammers` spam
  std::vector<strongcrowd::SegmentAnnotation> annotations;
  int spammers = 0;
};

// `diligent` careful workers and `spammers` random answerers tag `segments`
// independent segments over the default six classes; each segment gets
// `per_segment` distinct workers.  Each class is present with probability
// 0.3.
inline SpammerPool MakeSpammerPool(std::uint64_t seed, int diligent = 15,
                                   int spammers = 5, int segments = 200,
                                   int per_segment = 5) {
  using namespace strongcrowd;
  Rng rng = Rng::Derive(seed, "spammer-pool");
  const auto vocab = DefaultClasses();
  SpammerPool pool;
  pool.spammers = spammers;
  for (int i = 0; i < diligent + spammers; ++i) {
    WorkerProfile w;
    w.worker_id = WorkerName(i);
    const bool spam = i < spammers;
    w.population = spam ? "spammer" : "diligent";
    w.trust = spam ? rng.Uniform(0.0, 0.15) : rng.Uniform(0.85, 1.0);
    w.spam_yes.assign(vocab.size(), rng.Uniform(0.0, 0.5));
    pool.workers.push_back(w);
  }
  const int n = diligent + spammers;
  for (int s = 0; s < segments; ++s) {
    SegmentSpec seg{"seg" + std::to_string(s), 0, 10};
    TagSet truth;
    for (const auto &c : vocab)
      if (rng.Bernoulli(0.3)) truth.insert(c);
    std::vector<int> chosen;
    while (static_cast<int>(chosen.size()) < per_segment) {
      const int w = static_cast<int>(rng.Below(n));
      if (std::find(chosen.begin(), chosen.end(), w) == chosen.end())
        chosen.push_back(w);
    }
    for (int w : chosen)
      pool.annotations.push_back(
          annotate(pool.workers[w], vocab, seg, truth, {}, rng));
  }
  return pool;
}

// Random opinion table with up to `max_items` items and `max_workers`
// workers; each worker answers each item with probability 0.7.
inline strongcrowd::BinaryOpinionTable RandomTable(
    strongcrowd::Rng &rng, int max_items, int max_workers,
    std::vector<oracle::ItemOpinions> *items_out = nullptr) {
  using strongcrowd::BinaryOpinionTable;
  const int items = 1 + static_cast<int>(rng.Below(max_items));
  const int workers = 1 + static_cast<int>(rng.Below(max_workers));
  std::vector<std::string> names;
  for (int w = 0; w < workers; ++w) names.push_back("w" + std::to_string(w));
  std::vector<BinaryOpinionTable::RawOpinion> raw;
  std::vector<oracle::ItemOpinions> listing(items);
  for (int i = 0; i < items; ++i)
    for (int w = 0; w < workers; ++w)
      if (rng.Bernoulli(0.7)) {
        const bool yes = rng.Bernoulli(0.5);
        raw.push_back({static_cast<std::size_t>(i),
                       static_cast<std::uint32_t>(w), yes});
        listing[i].emplace_back(w, yes);
      }
  if (items_out) *items_out = listing;
  return BinaryOpinionTable::FromOpinions(items, names, raw);
}

}  // namespace scenario

#endif  // STRONGCROWD_TESTS_SCENARIOS_H_
