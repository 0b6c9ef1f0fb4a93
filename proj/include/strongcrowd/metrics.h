// include/strongcrowd/metrics.h

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

#ifndef STRONGCROWD_METRICS_H_
#define STRONGCROWD_METRICS_H_

// Evaluation instruments: tag-level P/R/F, segment-based ER/F1, the
// intersection-based F1 with detection tolerance (DTC) and ground-truth
// intersection (GTC) criteria, and Krippendorff's alpha.
//
// Precision, recall and F-scores are percentages.  A ratio whose
// denominator is zero is reported as 0 with its *_defined flag cleared.

#include <map>
#include <span>
#include <string>
#include <vector>

#include "strongcrowd/campaign.h"
#include "strongcrowd/mace.h"
#include "strongcrowd/timeline.h"

namespace strongcrowd {

struct PrfScore {
  double precision = 0.0, recall = 0.0, f1 = 0.0;
  long tp = 0, fp = 0, fn = 0;
  bool precision_defined = false, recall_defined = false, f1_defined = false;
};

// Builds a score from raw counts.
PrfScore ScoreFromCounts(long tp, long fp, long fn);

// Micro-averaged over all (segment, class) pairs.  Both maps must hold the
// same segments.
PrfScore tag_prf(const std::map<SegmentSpec, TagSet> &system,
                 const std::map<SegmentSpec, TagSet> &reference);

struct SegmentMetricsReport {
  double er = 0.0, s_rate = 0.0, d_rate = 0.0, i_rate = 0.0;
  PrfScore prf;
  double segment_length = 1.0;
  long n_ref = 0, substitutions = 0, deletions = 0, insertions = 0;
  bool er_defined = false;
  std::string note;
};

// Accumulates segment-based statistics file by file.
class SegmentMetrics {
 public:
  explicit SegmentMetrics(double segment_length = 1.0);

  // Events of one file.  Both lists are quantized on the same grid of
  // floor(duration / segment_length) segments.
  void Add(std::span<const EventInstance> reference,
           std::span<const EventInstance> system, double duration);
  SegmentMetricsReport Report() const;

 private:
  double segment_length_;
  long tp_ = 0, fp_ = 0, fn_ = 0, n_ref_ = 0;
  long subs_ = 0, dels_ = 0, ins_ = 0;
};

// Per segment k, with classes active in the reference and in the system:
// S = min(FN, FP), D = max(0, FN - FP), I = max(0, FP - FN);
// ER = (S + D + I) / N_ref summed over segments.
SegmentMetricsReport segment_metrics(std::span<const EventInstance> reference,
                                     std::span<const EventInstance> system,
                                     double duration,
                                     double segment_length = 1.0);

// Multi-file version; events are routed by file_id.
SegmentMetricsReport segment_metrics(std::span<const FileInfo> files,
                                     std::span<const EventInstance> reference,
                                     std::span<const EventInstance> system,
                                     double segment_length = 1.0);

struct IntersectionConfig {
  double dtc = 0.7;
  double gtc = 0.7;
  void Validate() const;
};

struct DetectionCounts {
  long tp = 0, fp = 0, fn = 0;
  // 2TP / (2TP + FP + FN), as a percentage; 0 when undefined.
  double F1() const;
};

struct IntersectionReport {
  double f1 = 0.0;  // micro over classes
  DetectionCounts micro;
  std::map<std::string, DetectionCounts> per_class;
  double macro_f1 = 0.0;
};

// Within each (file, class): a detection is valid when the fraction of it
// covered by reference events reaches dtc, otherwise it is a false
// positive.  A reference event is a true positive when the fraction of it
// covered by valid detections reaches gtc, otherwise a false negative.
IntersectionReport intersection_f1(std::span<const EventInstance> reference,
                                   std::span<const EventInstance> system,
                                   const IntersectionConfig &config);

struct AgreementReport {
  double alpha = 1.0;
  double observed = 0.0;  // D_o
  double expected = 0.0;  // D_e
  std::size_t items = 0;      // items with at least two opinions
  std::size_t opinions = 0;   // opinions on those items
  bool degenerate = false;    // D_e == 0
};

// Nominal alpha over the binary (item, class) opinions; items with fewer than
// two opinions are not pairable and are ignored.  Throws InputError when no
// item is pairable.
AgreementReport krippendorff_alpha(const BinaryOpinionTable &table);

}  // namespace strongcrowd

#endif  // STRONGCROWD_METRICS_H_
