// include/strongcrowd/mace.h

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

#ifndef STRONGCROWD_MACE_H_
#define STRONGCROWD_MACE_H_

// Multi-annotator competence estimation.
//
// Every multi-label answer is split into one binary opinion per (segment,
// class) item.  Each annotator j has a trust probability theta_j and a spam
// distribution xi_j over {no, yes}.  For item i with latent truth T_i and
// answer A_ij, annotator j either copies the truth (S_ij = 0, probability
// theta_j) or spams (S_ij = 1), answering a with probability xi_j(a):
//
//   P(A_ij = a | T_i = t) = theta_j [a == t] + (1 - theta_j) xi_j(a).
//
// Parameters are fitted by EM with additive smoothing, restarted from
// several random initializations; the restart with the highest marginal
// likelihood wins.

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "strongcrowd/annotator.h"
#include "strongcrowd/timeline.h"

namespace strongcrowd {

// Item i is (segments[i / V], vocabulary[i % V]) with V = vocabulary.size().
// Opinions are stored per item, in increasing worker order.
class BinaryOpinionTable {
 public:
  struct Opinion {
    std::uint32_t worker = 0;
    bool yes = false;
  };
  struct RawOpinion {
    std::size_t item = 0;
    std::uint32_t worker = 0;
    bool yes = false;
  };

  BinaryOpinionTable() = default;

  // Table over abstract items (no segment or class attached); used for
  // tests and for data that was never segment-based.
  static BinaryOpinionTable FromOpinions(std::size_t num_items,
                                         std::vector<std::string> workers,
                                         std::span<const RawOpinion> opinions);

  std::size_t NumItems() const { return offsets_.size() - 1; }
  std::size_t NumWorkers() const { return workers_.size(); }
  std::size_t NumOpinions() const { return opinions_.size(); }

  std::span<const Opinion> OpinionsOf(std::size_t item) const {
    return {opinions_.data() + offsets_[item],
            offsets_[item + 1] - offsets_[item]};
  }
  const std::vector<std::string> &workers() const { return workers_; }
  const std::vector<std::string> &vocabulary() const { return vocabulary_; }
  const std::vector<SegmentSpec> &segments() const { return segments_; }

  const SegmentSpec &SegmentOf(std::size_t item) const {
    return segments_[item / vocabulary_.size()];
  }
  const std::string &LabelOf(std::size_t item) const {
    return vocabulary_[item % vocabulary_.size()];
  }

 private:
  friend BinaryOpinionTable build_binary_instances(
      std::span<const SegmentAnnotation>, std::span<const std::string>,
      std::span<const SegmentSpec>);

  std::vector<std::string> vocabulary_;
  std::vector<SegmentSpec> segments_;
  std::vector<std::string> workers_;
  std::vector<std::size_t> offsets_{0};
  std::vector<Opinion> opinions_;
};

// One item per (segment, class).  A worker who annotated segment s has an
// explicit yes/no opinion on every class of s.  Segments are those of the
// annotations plus `segments`, if given; when `segments` is non-empty an
// annotation on any other segment is an InputError.  Duplicate (worker,
// segment) annotations and tags outside the vocabulary are InputErrors too.
BinaryOpinionTable build_binary_instances(
    std::span<const SegmentAnnotation> annotations,
    std::span<const std::string> vocabulary,
    std::span<const SegmentSpec> segments = {});

// Indexed like BinaryOpinionTable::workers().
struct AnnotatorModel {
  std::vector<double> trust;
  std::vector<double> spam_yes;  // xi(yes); xi(no) = 1 - xi(yes)

  std::size_t size() const { return trust.size(); }
};

struct ExpectedCounts {
  std::vector<double> trust;
  std::vector<double> spam;
  std::vector<double> spam_yes;
  std::vector<double> spam_no;
};

struct EStepResult {
  std::vector<double> posterior_yes;  // P(T_i = yes | answers)
  ExpectedCounts counts;
  double log_likelihood = 0.0;
  // Items with no opinions; their posterior is the prior.
  std::size_t empty_items = 0;
  // Items whose answers have zero probability under the model (possible
  // only with trust exactly 1); posterior is the prior, no counts.
  std::size_t impossible_items = 0;
};

// prior = {P(no), P(yes)}.
EStepResult e_step(const BinaryOpinionTable &table,
                   const AnnotatorModel &model,
                   std::array<double, 2> prior = {0.5, 0.5});

// theta_j = (trust_j + d) / (trust_j + spam_j + 2d) and
// xi_j(a) = (spam_j(a) + d) / (spam_j + 2d); 0/0 gives 0.5.
AnnotatorModel m_step(const ExpectedCounts &counts, double smoothing);

struct MaceOptions {
  int restarts = 10;
  int iterations = 50;
  double smoothing = 0.01;
  double tolerance = 1e-6;
  std::uint64_t seed = 0;
  std::array<double, 2> prior{0.5, 0.5};
  // Parallel restarts; 0 means hardware concurrency.  Results do not depend
  // on it.
  int threads = 0;

  void Validate() const;
};

struct LabelPosteriors {
  std::vector<double> yes;
  double log_likelihood = 0.0;
  int iterations = 0;
  int restart = 0;
};

// One EM run from a given starting point.
struct EmRun {
  AnnotatorModel model;
  EStepResult estep;  // E-step of the final model
  // Log marginal likelihood of the initial model, then after each M-step.
  std::vector<double> trace;
  int iterations = 0;
};

// Alternates M- and E-steps for up to `iterations` rounds, stopping early
// when the log likelihood changes by less than options.tolerance.
EmRun run_em(const BinaryOpinionTable &table, AnnotatorModel init,
             const MaceOptions &options);

struct MaceResult {
  AnnotatorModel model;
  LabelPosteriors posteriors;
  std::vector<double> restart_log_likelihoods;
  std::vector<double> trace;  // of the chosen restart
  std::size_t empty_items = 0;
};

// Restart r starts from theta ~ U(0.3, 0.99), xi(yes) ~ U(0.2, 0.8) drawn
// from a stream derived from (seed, r).
MaceResult run_mace(const BinaryOpinionTable &table,
                    const MaceOptions &options);

// Worker id -> theta.
std::map<std::string, double> Competences(const BinaryOpinionTable &table,
                                          const AnnotatorModel &model);

// Class c is in tags(s) iff P(T_(s,c) = yes) >= threshold.  Every segment of
// the table gets an entry, possibly empty.
std::map<SegmentSpec, TagSet> predict_tags(const BinaryOpinionTable &table,
                                           std::span<const double> posterior_yes,
                                           double threshold = 0.5);

// Keeps the annotations of workers whose competence is strictly above
// threshold.  A worker missing from `competence` is an InputError.
std::vector<SegmentAnnotation> filter_by_competence(
    std::span<const SegmentAnnotation> annotations,
    const std::map<std::string, double> &competence, double threshold);

}  // namespace strongcrowd

#endif  // STRONGCROWD_MACE_H_
