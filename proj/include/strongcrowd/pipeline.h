// include/strongcrowd/pipeline.h

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

#ifndef STRONGCROWD_PIPELINE_H_
#define STRONGCROWD_PIPELINE_H_

// End-to-end experiment: generate soundscapes, build the campaign, simulate
// (or ingest) annotations, estimate competences, aggregate strong labels in
// each mode and score them against the ground truth.
//
// Each stage exists twice: as an in-memory function used by tests and as a
// cmd_* function that reads its declared inputs from the output directory
// and writes its own outputs there.  Every output starts with a header line
// carrying the stage name, the seed and the config fingerprint.  Outputs are
// written to "*.partial" files and renamed only when the stage succeeds.

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "strongcrowd/aggregation.h"
#include "strongcrowd/annotator.h"
#include "strongcrowd/campaign.h"
#include "strongcrowd/event_io.h"
#include "strongcrowd/mace.h"
#include "strongcrowd/metrics.h"
#include "strongcrowd/records.h"
#include "strongcrowd/soundscape.h"

namespace strongcrowd {

struct PipelineConfig {
  std::uint64_t seed = 1;
  std::filesystem::path out = "out";

  SoundscapeConfig soundscape;
  CampaignConfig campaign;
  PopulationMix population = PopulationMix::Default();
  MaceOptions mace;
  double decision_threshold = 0.5;
  double competence_threshold = 0.6;
  std::vector<std::string> modes{"all", "filtered", "mace"};
  double tau = 0.8;
  double segment_length = 1.0;
  std::vector<IntersectionConfig> intersections{{0.7, 0.7}, {0.1, 0.1}};
  std::vector<double> agreement_thresholds{0.6, 0.8};

  // Sets one key (see ToKeyValues for the names).  Throws ConfigError for
  // unknown keys and unparsable values.
  void Set(const std::string &key, const std::string &value);
  void Apply(const std::map<std::string, std::string> &kv);
  // Every key except "out" and "mace_threads", which do not affect results.
  std::map<std::string, std::string> ToKeyValues() const;
  // 16 hex digits of FNV-1a over the canonical key=value listing.
  std::string Fingerprint() const;
  void Validate() const;

  // Stage seeds, each derived from `seed` by stage name.
  std::uint64_t StageSeed(const std::string &stage) const;
  OutputHeader Header(const std::string &stage) const;
};

// Artifact locations under an output directory.
struct Layout {
  std::filesystem::path root;

  std::filesystem::path config() const { return root / "config.txt"; }
  std::filesystem::path files() const { return root / "files.tsv"; }
  std::filesystem::path truth() const { return root / "truth.jsonl"; }
  std::filesystem::path truth_tsv(const std::string &file) const {
    return root / "truth" / (file + ".tsv");
  }
  std::filesystem::path campaign() const { return root / "campaign.jsonl"; }
  std::filesystem::path workers() const { return root / "workers.jsonl"; }
  std::filesystem::path annotations() const {
    return root / "annotations.jsonl";
  }
  std::filesystem::path competence() const { return root / "competence.tsv"; }
  std::filesystem::path posteriors() const { return root / "posteriors.jsonl"; }
  std::filesystem::path mace_tags() const { return root / "mace_tags.jsonl"; }
  std::filesystem::path estimated(const std::string &mode) const {
    return root / "estimated" / (mode + ".jsonl");
  }
  std::filesystem::path estimated_tsv(const std::string &mode,
                                      const std::string &file) const {
    return root / "estimated" / mode / (file + ".tsv");
  }
  std::filesystem::path counts(const std::string &mode) const {
    return root / "counts" / (mode + ".jsonl");
  }
  std::filesystem::path report_txt() const { return root / "report.txt"; }
  std::filesystem::path report_jsonl() const { return root / "report.jsonl"; }
  std::filesystem::path agreement_txt() const { return root / "agreement.txt"; }
  std::filesystem::path agreement_jsonl() const {
    return root / "agreement.jsonl";
  }
  std::filesystem::path render(const std::string &mode,
                               const std::string &file) const {
    return root / "figures" / (mode + "_" + file + ".svg");
  }
};

// ---- in-memory stages ----

struct CampaignData {
  std::vector<FileInfo> files;
  std::vector<EventInstance> truth;
  std::vector<Hit> hits;
  std::vector<WorkerProfile> workers;
  std::vector<SegmentAnnotation> annotations;
};

std::vector<Soundscape> GenerateStage(const PipelineConfig &config);
std::vector<Hit> CampaignStage(const PipelineConfig &config,
                               std::span<const FileInfo> files);
std::vector<WorkerProfile> WorkerStage(const PipelineConfig &config);
std::vector<SegmentAnnotation> SimulateStage(
    const PipelineConfig &config, std::span<const Hit> hits,
    std::span<const WorkerProfile> workers,
    std::span<const EventInstance> truth);

// generate -> campaign -> simulate.
CampaignData SimulateExperiment(const PipelineConfig &config);

struct MaceStageResult {
  BinaryOpinionTable table;
  MaceResult result;
  MaceOutputs outputs;
};
MaceStageResult MaceStage(const PipelineConfig &config,
                          std::span<const SegmentAnnotation> annotations);

struct ModeReport {
  std::string mode;
  SegmentMetricsReport segment;
  std::vector<std::pair<IntersectionConfig, IntersectionReport>> intersection;
  double mean_available_interior = 0.0;
};

struct EvaluationReport {
  PrfScore majority, mace, union_tags;
  double competence_threshold = 0.6;  // for labelling the filtered row
  std::vector<ModeReport> modes;
};

// Tag-level scores of the three tag aggregators and detection scores of
// every configured aggregation mode against the ground truth.
EvaluationReport EvaluateExperiment(
    const PipelineConfig &config, std::span<const FileInfo> files,
    std::span<const EventInstance> truth,
    std::span<const SegmentAnnotation> annotations, const MaceOutputs &mace,
    const std::map<std::string, std::map<std::string, FileEstimate>>
        &estimates);

struct AgreementSummary {
  AgreementReport all;
  std::size_t all_workers = 0;
  // (threshold, report, retained workers)
  std::vector<std::tuple<double, AgreementReport, std::size_t>> filtered;
};

AgreementSummary AgreementStage(const PipelineConfig &config,
                                std::span<const SegmentAnnotation> annotations,
                                const std::map<std::string, double> &competence);

std::string FormatEvaluation(const EvaluationReport &report);
std::string FormatAgreement(const AgreementSummary &summary);

// ---- persisted stages ----

void cmd_generate(const PipelineConfig &config);
void cmd_campaign(const PipelineConfig &config);
void cmd_simulate(const PipelineConfig &config);
// Replaces the simulate stage with an externally collected table.
void cmd_ingest(const PipelineConfig &config,
                const std::filesystem::path &table,
                const ColumnMapping &mapping);
void cmd_mace(const PipelineConfig &config);
void cmd_aggregate(const PipelineConfig &config);
EvaluationReport cmd_evaluate(const PipelineConfig &config);
AgreementSummary cmd_agreement(const PipelineConfig &config);
// Writes figures/<mode>_<file>.svg and returns its path.
std::filesystem::path cmd_render(const PipelineConfig &config,
                                 const std::string &file_id,
                                 const std::string &mode);
// All stages in order, then one figure per file for the last mode.
void run_all(const PipelineConfig &config);

// Scores an arbitrary system event list against a reference, routing by
// file id.  File durations are the ceiling of the latest offset.
struct ExternalScore {
  SegmentMetricsReport segment;
  std::vector<std::pair<IntersectionConfig, IntersectionReport>> intersection;
};
ExternalScore ScoreEventLists(std::span<const EventInstance> reference,
                              std::span<const EventInstance> system,
                              double segment_length,
                              std::span<const IntersectionConfig> criteria);
std::string FormatExternalScore(const ExternalScore &score);

}  // namespace strongcrowd

#endif  // STRONGCROWD_PIPELINE_H_
