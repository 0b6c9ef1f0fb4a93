// src/campaign.cc

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

#include "strongcrowd/campaign.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>

#include "strongcrowd/errors.h"

namespace strongcrowd {

namespace {

// Mutable assignment state: per-worker load and, per (worker, file), the
// segment starts already taken.
class Assignment {
 public:
  Assignment(const CampaignConfig &config, std::size_t num_files)
      : config_(config),
        load_(config.worker_pool_size, 0),
        starts_(config.worker_pool_size,
                std::vector<std::vector<int>>(num_files)) {}

  bool SeparationOk(int worker, std::size_t file, int start) const {
    for (int s : starts_[worker][file])
      if (std::abs(s - start) < config_.min_separation) return false;
    return true;
  }
  int Load(int worker) const { return load_[worker]; }
  bool HasCapacity(int worker) const {
    return load_[worker] < config_.max_hits_per_worker;
  }
  bool Feasible(int worker, std::size_t file, int start) const {
    return HasCapacity(worker) && SeparationOk(worker, file, start);
  }
  void Add(int worker, std::size_t file, int start) {
    ++load_[worker];
    starts_[worker][file].push_back(start);
  }
  const std::vector<int> &StartsOf(int worker, std::size_t file) const {
    return starts_[worker][file];
  }
  std::size_t NumFiles() const { return starts_.empty() ? 0 : starts_[0].size(); }
  void Remove(int worker, std::size_t file, int start) {
    --load_[worker];
    auto &v = starts_[worker][file];
    v.erase(std::find(v.begin(), v.end(), start));
  }

 private:
  const CampaignConfig &config_;
  std::vector<int> load_;
  std::vector<std::vector<std::vector<int>>> starts_;
};

struct PendingHit {
  std::size_t file = 0;
  SegmentSpec segment;
  std::vector<int> workers;
};

bool Contains(const std::vector<int> &v, int x) {
  return std::find(v.begin(), v.end(), x) != v.end();
}

// Depth-limited augmenting search: gives `target` one more worker, possibly
// by moving a worker off one conflicting hit and recursively restaffing that
// hit.
class Augmenter {
 public:
  Augmenter(std::vector<PendingHit> &hits, Assignment &state,
            const CampaignConfig &config, Rng &rng)
      : hits_(hits), state_(state), config_(config), rng_(rng) {
    for (std::size_t i = 0; i < hits.size(); ++i)
      index_[{hits[i].file, hits[i].segment.start}] = i;
  }

  bool Run(std::size_t target) {
    budget_ = kBudget;
    std::vector<std::size_t> touched{target};
    return Search(target, kDepth, touched);
  }

 private:
  static constexpr int kDepth = 4;
  static constexpr long kBudget = 200000;

  // Hits holding `w` that stop `w` from joining `hit`.
  std::vector<std::size_t> Blockers(int w, const PendingHit &hit) const {
    std::vector<std::size_t> out;
    for (std::size_t i : HitsOf(w, hit.file))
      if (std::abs(hits_[i].segment.start - hit.segment.start) <
          config_.min_separation)
        out.push_back(i);
    return out;
  }

  std::vector<std::size_t> HitsOf(int w, std::size_t file) const {
    std::vector<std::size_t> out;
    for (int start : state_.StartsOf(w, file))
      out.push_back(index_.at({file, start}));
    return out;
  }

  bool Search(std::size_t target, int depth, std::vector<std::size_t> &touched) {
    PendingHit &hit = hits_[target];
    const int pool = config_.worker_pool_size;
    const int offset = static_cast<int>(rng_.Below(pool));
    for (int k = 0; k < pool; ++k) {
      const int w = (offset + k) % pool;
      if (!Contains(hit.workers, w) &&
          state_.Feasible(w, hit.file, hit.segment.start)) {
        Assign(w, target);
        return true;
      }
    }
    if (depth == 0) return false;
    for (int k = 0; k < pool; ++k) {
      const int w = (offset + k) % pool;
      if (Contains(hit.workers, w)) continue;
      std::vector<std::size_t> candidates = Blockers(w, hit);
      if (candidates.size() > 1) continue;
      if (candidates.empty()) {
        if (state_.HasCapacity(w)) continue;
        for (std::size_t f = 0; f < state_.NumFiles(); ++f)
          for (std::size_t i : HitsOf(w, f)) candidates.push_back(i);
      }
      for (std::size_t victim : candidates) {
        if (--budget_ < 0) return false;
        if (std::find(touched.begin(), touched.end(), victim) != touched.end())
          continue;
        Unassign(w, victim);
        Assign(w, target);
        touched.push_back(victim);
        if (Search(victim, depth - 1, touched)) return true;
        touched.pop_back();
        Unassign(w, target);
        Assign(w, victim);
      }
    }
    return false;
  }

  void Assign(int w, std::size_t i) {
    state_.Add(w, hits_[i].file, hits_[i].segment.start);
    hits_[i].workers.push_back(w);
  }
  void Unassign(int w, std::size_t i) {
    state_.Remove(w, hits_[i].file, hits_[i].segment.start);
    auto &v = hits_[i].workers;
    v.erase(std::find(v.begin(), v.end(), w));
  }

  std::vector<PendingHit> &hits_;
  Assignment &state_;
  const CampaignConfig &config_;
  Rng &rng_;
  std::map<std::pair<std::size_t, int>, std::size_t> index_;
  long budget_ = 0;
};

}  // namespace

void CampaignConfig::Validate() const {
  if (length <= 0) throw ConfigError("segment length must be positive");
  if (hop <= 0) throw ConfigError("hop must be positive");
  if (workers_per_hit <= 0) throw ConfigError("workers_per_hit must be positive");
  if (worker_pool_size < 0) throw ConfigError("worker_pool_size must be >= 0");
  if (max_hits_per_worker <= 0)
    throw ConfigError("max_hits_per_worker must be positive");
  if (min_separation < 0.0) throw ConfigError("min_separation must be >= 0");
}

std::string WorkerName(int index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "W%04d", index);
  return buf;
}

std::vector<Hit> build_campaign(std::span<const FileInfo> files,
                                const CampaignConfig &config, Rng &rng) {
  config.Validate();
  std::vector<PendingHit> hits;
  for (std::size_t f = 0; f < files.size(); ++f)
    for (auto &seg : segment_timeline(files[f].file_id, files[f].duration,
                                      config.length, config.hop))
      hits.push_back({f, std::move(seg), {}});
  if (hits.empty()) return {};

  // Necessary conditions, checked up front so the error names the cause.
  if (config.workers_per_hit > config.worker_pool_size)
    throw AssignmentError("worker_pool_size",
                          "fewer workers than workers_per_hit");
  const double demand =
      static_cast<double>(hits.size()) * config.workers_per_hit;
  if (demand > static_cast<double>(config.worker_pool_size) *
                   config.max_hits_per_worker)
    throw AssignmentError("max_hits_per_worker",
                          "pool capacity below hits x workers_per_hit");
  for (std::size_t f = 0; f < files.size(); ++f) {
    const auto segs = segment_timeline(files[f].file_id, files[f].duration,
                                       config.length, config.hop);
    if (segs.empty()) continue;
    // Most segments one worker can take from this file.
    const int span = segs.back().start;
    const int per_worker =
        config.min_separation > 0.0
            ? static_cast<int>(std::floor(span / config.min_separation)) + 1
            : static_cast<int>(segs.size());
    if (static_cast<double>(segs.size()) * config.workers_per_hit >
        static_cast<double>(per_worker) * config.worker_pool_size)
      throw AssignmentError("min_separation",
                            "file " + files[f].file_id +
                                " needs more workers than the pool provides");
    // Hits starting closer than min_separation need disjoint workers.
    std::size_t lo = 0, window = 0;
    for (std::size_t hi = 0; hi < segs.size(); ++hi) {
      while (segs[hi].start - segs[lo].start >= config.min_separation) ++lo;
      window = std::max(window, hi - lo + 1);
    }
    if (static_cast<double>(window) * config.workers_per_hit >
        config.worker_pool_size)
      throw AssignmentError(
          "min_separation",
          "file " + files[f].file_id + " has " + std::to_string(window) +
              " overlapping hits needing distinct workers");
  }

  // Files in random order; inside a file, hits sweep left to right so each
  // worker's spacing is decided by its previous start only.  Among eligible
  // workers the least loaded go first, ties broken at random.
  Assignment state(config, files.size());
  std::vector<std::size_t> file_order(files.size());
  for (std::size_t i = 0; i < file_order.size(); ++i) file_order[i] = i;
  for (std::size_t i = file_order.size(); i > 1; --i)
    std::swap(file_order[i - 1], file_order[rng.Below(i)]);
  std::vector<std::size_t> first(files.size() + 1, hits.size());
  for (std::size_t i = hits.size(); i-- > 0;) first[hits[i].file] = i;
  for (std::size_t f = files.size(); f-- > 0;)
    if (first[f] > first[f + 1]) first[f] = first[f + 1];
  std::vector<std::size_t> order;
  order.reserve(hits.size());
  for (std::size_t f : file_order)
    for (std::size_t i = first[f]; i < first[f + 1]; ++i) order.push_back(i);

  const int pool = config.worker_pool_size;
  Augmenter augmenter(hits, state, config, rng);
  std::vector<std::pair<std::pair<int, std::uint64_t>, int>> eligible;
  for (std::size_t idx : order) {
    PendingHit &hit = hits[idx];
    eligible.clear();
    for (int w = 0; w < pool; ++w)
      if (state.Feasible(w, hit.file, hit.segment.start))
        eligible.push_back({{state.Load(w), rng.NextU64()}, w});
    const std::size_t take = std::min<std::size_t>(
        eligible.size(), static_cast<std::size_t>(config.workers_per_hit));
    std::partial_sort(eligible.begin(), eligible.begin() + take,
                      eligible.end());
    for (std::size_t k = 0; k < take; ++k) {
      state.Add(eligible[k].second, hit.file, hit.segment.start);
      hit.workers.push_back(eligible[k].second);
    }
    while (static_cast<int>(hit.workers.size()) < config.workers_per_hit) {
      if (augmenter.Run(idx)) continue;
      bool saturated = false;
      for (int w = 0; w < pool && !saturated; ++w)
        saturated = !Contains(hit.workers, w) &&
                    state.SeparationOk(w, hit.file, hit.segment.start);
      throw AssignmentError(
          saturated ? "max_hits_per_worker" : "min_separation",
          "cannot staff hit " + hit.segment.file_id + "@" +
              std::to_string(hit.segment.start));
    }
  }

  std::vector<Hit> out;
  out.reserve(hits.size());
  for (std::size_t i = 0; i < hits.size(); ++i) {
    auto workers = hits[i].workers;
    std::sort(workers.begin(), workers.end());
    Hit h;
    h.hit_id = static_cast<int>(i);
    h.segment = hits[i].segment;
    for (int w : workers) h.workers.push_back(WorkerName(w));
    out.push_back(std::move(h));
  }
  return out;
}

}  // namespace strongcrowd
