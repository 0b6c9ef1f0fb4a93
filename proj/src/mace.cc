// src/mace.cc

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

#include "strongcrowd/mace.h"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <set>
#include <thread>

#include "strongcrowd/errors.h"
#include "strongcrowd/rng.h"

namespace strongcrowd {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double LogSumExp(double a, double b) {
  const double m = std::max(a, b);
  if (m == kNegInf) return kNegInf;
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

// Per-worker lookup tables for one E-step: answer likelihood and spam
// posterior for every (answer, truth) pair.
struct WorkerTerms {
  double log_lik[2][2];     // [answer][truth]
  double spam_post[2][2];   // P(S = 1 | answer, truth)
};

WorkerTerms MakeTerms(double theta, double xi_yes) {
  WorkerTerms w{};
  const double xi[2] = {1.0 - xi_yes, xi_yes};
  for (int a = 0; a < 2; ++a) {
    for (int t = 0; t < 2; ++t) {
      const double spam = (1.0 - theta) * xi[a];
      const double lik = (a == t ? theta : 0.0) + spam;
      w.log_lik[a][t] = std::log(lik);
      w.spam_post[a][t] = lik > 0.0 ? spam / lik : 0.0;
    }
  }
  return w;
}

}  // namespace

BinaryOpinionTable BinaryOpinionTable::FromOpinions(
    std::size_t num_items, std::vector<std::string> workers,
    std::span<const RawOpinion> opinions) {
  BinaryOpinionTable table;
  table.workers_ = std::move(workers);
  std::vector<std::vector<Opinion>> per_item(num_items);
  for (const auto &op : opinions) {
    if (op.item >= num_items || op.worker >= table.workers_.size())
      throw InputError("opinion references unknown item or worker");
    per_item[op.item].push_back({op.worker, op.yes});
  }
  for (auto &ops : per_item) {
    std::sort(ops.begin(), ops.end(),
              [](auto &a, auto &b) { return a.worker < b.worker; });
    for (std::size_t k = 1; k < ops.size(); ++k)
      if (ops[k].worker == ops[k - 1].worker)
        throw InputError("duplicate opinion of worker " +
                         table.workers_[ops[k].worker]);
    table.opinions_.insert(table.opinions_.end(), ops.begin(), ops.end());
    table.offsets_.push_back(table.opinions_.size());
  }
  return table;
}

BinaryOpinionTable build_binary_instances(
    std::span<const SegmentAnnotation> annotations,
    std::span<const std::string> vocabulary,
    std::span<const SegmentSpec> segments) {
  BinaryOpinionTable table;
  table.vocabulary_.assign(vocabulary.begin(), vocabulary.end());
  if (std::set<std::string>(vocabulary.begin(), vocabulary.end()).size() !=
      vocabulary.size())
    throw InputError("vocabulary has duplicates");

  std::set<SegmentSpec> seg_set(segments.begin(), segments.end());
  std::set<std::string> worker_set;
  for (const auto &a : annotations) {
    if (!segments.empty() && !seg_set.count(a.segment))
      throw InputError("annotation by " + a.worker_id +
                       " references unknown segment " + a.segment.file_id +
                       "@" + std::to_string(a.segment.start));
    seg_set.insert(a.segment);
    worker_set.insert(a.worker_id);
    for (const auto &tag : a.tags)
      if (std::find(vocabulary.begin(), vocabulary.end(), tag) ==
          vocabulary.end())
        throw InputError("annotation by " + a.worker_id +
                         " uses class '" + tag + "' outside the vocabulary");
  }
  table.segments_.assign(seg_set.begin(), seg_set.end());
  table.workers_.assign(worker_set.begin(), worker_set.end());

  const std::size_t V = vocabulary.size();
  std::vector<std::vector<std::pair<std::uint32_t, const TagSet *>>> by_seg(
      table.segments_.size());
  for (const auto &a : annotations) {
    const auto s = static_cast<std::size_t>(
        std::lower_bound(table.segments_.begin(), table.segments_.end(),
                         a.segment) -
        table.segments_.begin());
    const auto w = static_cast<std::uint32_t>(
        std::lower_bound(table.workers_.begin(), table.workers_.end(),
                         a.worker_id) -
        table.workers_.begin());
    by_seg[s].push_back({w, &a.tags});
  }
  table.opinions_.reserve(annotations.size() * V);
  for (std::size_t s = 0; s < by_seg.size(); ++s) {
    auto &answers = by_seg[s];
    std::sort(answers.begin(), answers.end(),
              [](auto &a, auto &b) { return a.first < b.first; });
    for (std::size_t k = 1; k < answers.size(); ++k)
      if (answers[k].first == answers[k - 1].first)
        throw InputError("duplicate annotation of segment " +
                         table.segments_[s].file_id + "@" +
                         std::to_string(table.segments_[s].start) +
                         " by worker " + table.workers_[answers[k].first]);
    for (std::size_t c = 0; c < V; ++c) {
      for (const auto &[w, tags] : answers)
        table.opinions_.push_back({w, tags->count(vocabulary[c]) > 0});
      table.offsets_.push_back(table.opinions_.size());
    }
  }
  return table;
}

EStepResult e_step(const BinaryOpinionTable &table,
                   const AnnotatorModel &model, std::array<double, 2> prior) {
  const std::size_t W = table.NumWorkers();
  if (model.trust.size() != W || model.spam_yes.size() != W)
    throw InputError("annotator model does not match the opinion table");

  std::vector<WorkerTerms> terms(W);
  for (std::size_t j = 0; j < W; ++j)
    terms[j] = MakeTerms(model.trust[j], model.spam_yes[j]);
  const double log_prior[2] = {std::log(prior[0]), std::log(prior[1])};

  EStepResult r;
  r.posterior_yes.resize(table.NumItems());
  r.counts.trust.assign(W, 0.0);
  r.counts.spam.assign(W, 0.0);
  r.counts.spam_yes.assign(W, 0.0);
  r.counts.spam_no.assign(W, 0.0);

  for (std::size_t i = 0; i < table.NumItems(); ++i) {
    const auto ops = table.OpinionsOf(i);
    if (ops.empty()) {
      r.posterior_yes[i] = prior[1];
      ++r.empty_items;
      continue;
    }
    double joint[2] = {log_prior[0], log_prior[1]};
    for (const auto &op : ops)
      for (int t = 0; t < 2; ++t) joint[t] += terms[op.worker].log_lik[op.yes][t];
    const double evidence = LogSumExp(joint[0], joint[1]);
    r.log_likelihood += evidence;
    if (evidence == kNegInf) {
      r.posterior_yes[i] = prior[1];
      ++r.impossible_items;
      continue;
    }
    const double post[2] = {std::exp(joint[0] - evidence),
                            std::exp(joint[1] - evidence)};
    r.posterior_yes[i] = post[1];
    for (const auto &op : ops) {
      const auto &w = terms[op.worker];
      double spam = 0.0;
      for (int t = 0; t < 2; ++t) spam += post[t] * w.spam_post[op.yes][t];
      r.counts.spam[op.worker] += spam;
      r.counts.trust[op.worker] += 1.0 - spam;
      (op.yes ? r.counts.spam_yes : r.counts.spam_no)[op.worker] += spam;
    }
  }
  return r;
}

AnnotatorModel m_step(const ExpectedCounts &counts, double smoothing) {
  const std::size_t W = counts.trust.size();
  AnnotatorModel m;
  m.trust.resize(W);
  m.spam_yes.resize(W);
  for (std::size_t j = 0; j < W; ++j) {
    const double d = smoothing;
    const double tden = counts.trust[j] + counts.spam[j] + 2.0 * d;
    m.trust[j] = tden > 0.0 ? (counts.trust[j] + d) / tden : 0.5;
    const double sden = counts.spam_yes[j] + counts.spam_no[j] + 2.0 * d;
    m.spam_yes[j] = sden > 0.0 ? (counts.spam_yes[j] + d) / sden : 0.5;
  }
  return m;
}

void MaceOptions::Validate() const {
  if (restarts < 1) throw ConfigError("restarts must be >= 1");
  if (iterations < 1) throw ConfigError("iterations must be >= 1");
  if (smoothing < 0.0) throw ConfigError("smoothing must be >= 0");
  if (!(prior[0] > 0.0 && prior[1] > 0.0) ||
      std::abs(prior[0] + prior[1] - 1.0) > 1e-12)
    throw ConfigError("label prior must be a positive distribution");
}

EmRun run_em(const BinaryOpinionTable &table, AnnotatorModel init,
             const MaceOptions &options) {
  EmRun run;
  run.model = std::move(init);
  run.estep = e_step(table, run.model, options.prior);
  run.trace.push_back(run.estep.log_likelihood);
  for (int it = 1; it <= options.iterations; ++it) {
    run.model = m_step(run.estep.counts, options.smoothing);
    run.estep = e_step(table, run.model, options.prior);
    run.trace.push_back(run.estep.log_likelihood);
    run.iterations = it;
    if (std::abs(run.trace.back() - run.trace[run.trace.size() - 2]) <
        options.tolerance)
      break;
  }
  return run;
}

MaceResult run_mace(const BinaryOpinionTable &table,
                    const MaceOptions &options) {
  options.Validate();
  const std::size_t W = table.NumWorkers();

  auto restart = [&](int r) {
    Rng rng = Rng::Derive(options.seed, "mace/restart/" + std::to_string(r));
    AnnotatorModel init;
    init.trust.resize(W);
    init.spam_yes.resize(W);
    for (std::size_t j = 0; j < W; ++j) {
      init.trust[j] = rng.Uniform(0.3, 0.99);
      init.spam_yes[j] = rng.Uniform(0.2, 0.8);
    }
    return run_em(table, std::move(init), options);
  };

  int threads = options.threads > 0
                    ? options.threads
                    : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::clamp(threads, 1, options.restarts);

  std::vector<EmRun> runs(options.restarts);
  for (int base = 0; base < options.restarts; base += threads) {
    const int end = std::min(options.restarts, base + threads);
    if (end - base == 1) {
      runs[base] = restart(base);
      continue;
    }
    std::vector<std::future<EmRun>> jobs;
    for (int r = base; r < end; ++r)
      jobs.push_back(std::async(std::launch::async, restart, r));
    for (int r = base; r < end; ++r) runs[r] = jobs[r - base].get();
  }

  int best = 0;
  MaceResult result;
  for (int r = 0; r < options.restarts; ++r) {
    const double ll = runs[r].estep.log_likelihood;
    result.restart_log_likelihoods.push_back(ll);
    if (ll > runs[best].estep.log_likelihood) best = r;
  }
  EmRun &chosen = runs[best];
  result.model = std::move(chosen.model);
  result.posteriors.yes = std::move(chosen.estep.posterior_yes);
  result.posteriors.log_likelihood = chosen.estep.log_likelihood;
  result.posteriors.iterations = chosen.iterations;
  result.posteriors.restart = best;
  result.trace = std::move(chosen.trace);
  result.empty_items = chosen.estep.empty_items;
  return result;
}

std::map<std::string, double> Competences(const BinaryOpinionTable &table,
                                          const AnnotatorModel &model) {
  std::map<std::string, double> out;
  for (std::size_t j = 0; j < table.NumWorkers(); ++j)
    out[table.workers()[j]] = model.trust.at(j);
  return out;
}

std::map<SegmentSpec, TagSet> predict_tags(const BinaryOpinionTable &table,
                                           std::span<const double> posterior_yes,
                                           double threshold) {
  if (!(threshold > 0.0 && threshold < 1.0))
    throw ConfigError("decision threshold must be in (0,1)");
  if (posterior_yes.size() != table.NumItems())
    throw InputError("posterior count does not match the opinion table");
  std::map<SegmentSpec, TagSet> tags;
  for (const auto &s : table.segments()) tags[s];
  if (table.vocabulary().empty()) return tags;
  for (std::size_t i = 0; i < table.NumItems(); ++i)
    if (posterior_yes[i] >= threshold)
      tags[table.SegmentOf(i)].insert(table.LabelOf(i));
  return tags;
}

std::vector<SegmentAnnotation> filter_by_competence(
    std::span<const SegmentAnnotation> annotations,
    const std::map<std::string, double> &competence, double threshold) {
  std::vector<SegmentAnnotation> kept;
  for (const auto &a : annotations) {
    auto it = competence.find(a.worker_id);
    if (it == competence.end())
      throw InputError("no competence estimate for worker " + a.worker_id);
    if (it->second > threshold) kept.push_back(a);
  }
  return kept;
}

}  // namespace strongcrowd
