// src/metrics.cc

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

#include "strongcrowd/metrics.h"

#include <algorithm>
#include <set>

#include "strongcrowd/errors.h"

namespace strongcrowd {

namespace {

// Absorbs rounding in coverage ratios computed from millisecond times.
constexpr double kRatioEps = 1e-12;

std::vector<std::string> LabelsOf(std::span<const EventInstance> a,
                                  std::span<const EventInstance> b) {
  std::set<std::string> labels;
  for (const auto &e : a) labels.insert(e.label);
  for (const auto &e : b) labels.insert(e.label);
  return {labels.begin(), labels.end()};
}

}  // namespace

PrfScore ScoreFromCounts(long tp, long fp, long fn) {
  PrfScore s;
  s.tp = tp;
  s.fp = fp;
  s.fn = fn;
  if (tp + fp > 0) {
    s.precision = 100.0 * tp / (tp + fp);
    s.precision_defined = true;
  }
  if (tp + fn > 0) {
    s.recall = 100.0 * tp / (tp + fn);
    s.recall_defined = true;
  }
  if (2 * tp + fp + fn > 0) {
    s.f1 = 100.0 * 2.0 * tp / (2.0 * tp + fp + fn);
    s.f1_defined = true;
  }
  return s;
}

PrfScore tag_prf(const std::map<SegmentSpec, TagSet> &system,
                 const std::map<SegmentSpec, TagSet> &reference) {
  if (system.size() != reference.size())
    throw InputError("tag_prf: system and reference cover different segments");
  long tp = 0, fp = 0, fn = 0;
  auto sit = system.begin();
  for (const auto &[seg, ref] : reference) {
    if (sit->first != seg)
      throw InputError("tag_prf: segment " + seg.file_id + "@" +
                       std::to_string(seg.start) + " missing from system");
    const TagSet &sys = sit->second;
    for (const auto &t : sys) (ref.count(t) ? tp : fp)++;
    for (const auto &t : ref)
      if (!sys.count(t)) ++fn;
    ++sit;
  }
  return ScoreFromCounts(tp, fp, fn);
}

SegmentMetrics::SegmentMetrics(double segment_length)
    : segment_length_(segment_length) {
  if (!(segment_length > 0.0))
    throw ConfigError("segment length must be positive");
}

void SegmentMetrics::Add(std::span<const EventInstance> reference,
                         std::span<const EventInstance> system,
                         double duration) {
  const auto labels = LabelsOf(reference, system);
  const auto ref = quantize_events_to_frames(reference, duration,
                                             segment_length_, 0.0, labels);
  const auto sys = quantize_events_to_frames(system, duration,
                                             segment_length_, 0.0, labels);
  for (std::size_t k = 0; k < ref.num_frames; ++k) {
    long tp = 0, fp = 0, fn = 0, nref = 0;
    for (const auto &label : labels) {
      const bool r = ref.grid.at(label)[k];
      const bool s = sys.grid.at(label)[k];
      nref += r;
      tp += r && s;
      fn += r && !s;
      fp += s && !r;
    }
    tp_ += tp;
    fp_ += fp;
    fn_ += fn;
    n_ref_ += nref;
    subs_ += std::min(fn, fp);
    dels_ += std::max(0L, fn - fp);
    ins_ += std::max(0L, fp - fn);
  }
}

SegmentMetricsReport SegmentMetrics::Report() const {
  SegmentMetricsReport r;
  r.segment_length = segment_length_;
  r.prf = ScoreFromCounts(tp_, fp_, fn_);
  r.n_ref = n_ref_;
  r.substitutions = subs_;
  r.deletions = dels_;
  r.insertions = ins_;
  if (n_ref_ > 0) {
    const double n = static_cast<double>(n_ref_);
    r.s_rate = subs_ / n;
    r.d_rate = dels_ / n;
    r.i_rate = ins_ / n;
    r.er = (subs_ + dels_ + ins_) / n;
    r.er_defined = true;
  } else {
    r.note = "reference has no active segments; error rate is undefined";
  }
  return r;
}

SegmentMetricsReport segment_metrics(std::span<const EventInstance> reference,
                                     std::span<const EventInstance> system,
                                     double duration, double segment_length) {
  SegmentMetrics m(segment_length);
  m.Add(reference, system, duration);
  return m.Report();
}

SegmentMetricsReport segment_metrics(std::span<const FileInfo> files,
                                     std::span<const EventInstance> reference,
                                     std::span<const EventInstance> system,
                                     double segment_length) {
  std::map<std::string, std::pair<std::vector<EventInstance>,
                                  std::vector<EventInstance>>>
      by_file;
  for (const auto &f : files) by_file[f.file_id];
  auto route = [&](std::span<const EventInstance> events, bool is_ref) {
    for (const auto &e : events) {
      auto it = by_file.find(e.file_id);
      if (it == by_file.end())
        throw InputError("event of unknown file '" + e.file_id + "'");
      (is_ref ? it->second.first : it->second.second).push_back(e);
    }
  };
  route(reference, true);
  route(system, false);
  SegmentMetrics m(segment_length);
  for (const auto &f : files) {
    const auto &[ref, sys] = by_file[f.file_id];
    m.Add(ref, sys, f.duration);
  }
  return m.Report();
}

void IntersectionConfig::Validate() const {
  if (!(dtc > 0.0 && dtc <= 1.0) || !(gtc > 0.0 && gtc <= 1.0))
    throw ConfigError("dtc and gtc must be in (0,1]");
}

double DetectionCounts::F1() const {
  const double den = 2.0 * tp + fp + fn;
  return den > 0.0 ? 100.0 * 2.0 * tp / den : 0.0;
}

IntersectionReport intersection_f1(std::span<const EventInstance> reference,
                                   std::span<const EventInstance> system,
                                   const IntersectionConfig &config) {
  config.Validate();
  using Key = std::pair<std::string, std::string>;  // (file, class)
  std::map<Key, std::pair<std::vector<const EventInstance *>,
                          std::vector<const EventInstance *>>>
      groups;
  for (const auto &e : reference)
    groups[{e.file_id, e.label}].first.push_back(&e);
  for (const auto &e : system)
    groups[{e.file_id, e.label}].second.push_back(&e);

  IntersectionReport report;
  for (const auto &[key, group] : groups) {
    const auto &[refs, dets] = group;
    DetectionCounts &c = report.per_class[key.second];
    std::vector<const EventInstance *> valid;
    for (const auto *d : dets) {
      double covered = 0.0;
      for (const auto *r : refs)
        covered += Overlap(d->onset, d->offset, r->onset, r->offset);
      if (covered / d->Duration() >= config.dtc - kRatioEps)
        valid.push_back(d);
      else
        ++c.fp;
    }
    for (const auto *r : refs) {
      double covered = 0.0;
      for (const auto *d : valid)
        covered += Overlap(d->onset, d->offset, r->onset, r->offset);
      if (covered / r->Duration() >= config.gtc - kRatioEps)
        ++c.tp;
      else
        ++c.fn;
    }
  }
  double macro = 0.0;
  for (const auto &[label, c] : report.per_class) {
    report.micro.tp += c.tp;
    report.micro.fp += c.fp;
    report.micro.fn += c.fn;
    macro += c.F1();
  }
  report.f1 = report.micro.F1();
  if (!report.per_class.empty()) report.macro_f1 = macro / report.per_class.size();
  return report;
}

AgreementReport krippendorff_alpha(const BinaryOpinionTable &table) {
  // Coincidence matrix over values {no, yes}.
  double o[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
  AgreementReport r;
  for (std::size_t i = 0; i < table.NumItems(); ++i) {
    const auto ops = table.OpinionsOf(i);
    const std::size_t m = ops.size();
    if (m < 2) continue;
    double n[2] = {0.0, 0.0};
    for (const auto &op : ops) n[op.yes] += 1.0;
    for (int c = 0; c < 2; ++c)
      for (int k = 0; k < 2; ++k)
        o[c][k] += n[c] * (n[k] - (c == k ? 1.0 : 0.0)) / (m - 1.0);
    ++r.items;
    r.opinions += m;
  }
  if (r.items == 0)
    throw InputError("krippendorff_alpha: no item has two or more opinions");
  const double n_c[2] = {o[0][0] + o[0][1], o[1][0] + o[1][1]};
  const double n = n_c[0] + n_c[1];
  r.observed = (o[0][1] + o[1][0]) / n;
  r.expected = 2.0 * n_c[0] * n_c[1] / (n * (n - 1.0));
  if (r.expected > 0.0) {
    r.alpha = 1.0 - r.observed / r.expected;
  } else {
    r.alpha = 1.0;
    r.degenerate = true;
  }
  return r;
}

}  // namespace strongcrowd
