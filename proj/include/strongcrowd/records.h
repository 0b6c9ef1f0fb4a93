// include/strongcrowd/records.h

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

#ifndef STRONGCROWD_RECORDS_H_
#define STRONGCROWD_RECORDS_H_

// Line-oriented formats of the pipeline's intermediate artifacts.
//
//   files.tsv         file_id<TAB>duration
//   campaign.jsonl    {"hit":..,"file":..,"start":..,"length":..,"workers":[..]}
//   workers.jsonl     simulated WorkerProfile records
//   annotations.jsonl {"worker":..,"file":..,"start":..,"labels":[..]}
//   competence.tsv    worker_id<TAB>theta
//   posteriors.jsonl  {"file":..,"start":..,"class":..,"p_yes":..}
//   tags.jsonl        {"file":..,"start":..,"labels":[..]}
//   counts.jsonl      {"file":..,"frame_len":..,"available":[..],"active":{..}}
//
// Every writer takes an optional provenance header; every reader skips it.

#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "strongcrowd/aggregation.h"
#include "strongcrowd/annotator.h"
#include "strongcrowd/campaign.h"
#include "strongcrowd/event_io.h"
#include "strongcrowd/mace.h"

namespace strongcrowd {

std::vector<FileInfo> ReadFileList(std::istream &in);
void WriteFileList(std::ostream &out, std::span<const FileInfo> files,
                   const OutputHeader *header = nullptr);

std::vector<Hit> ReadHits(std::istream &in);
void WriteHits(std::ostream &out, std::span<const Hit> hits,
               const OutputHeader *header = nullptr);

std::vector<WorkerProfile> ReadWorkers(std::istream &in);
void WriteWorkers(std::ostream &out, std::span<const WorkerProfile> workers,
                  const OutputHeader *header = nullptr);

// Segment length is not part of the record; `length` is applied to all.
std::vector<SegmentAnnotation> ReadAnnotations(std::istream &in, int length);
void WriteAnnotations(std::ostream &out,
                      std::span<const SegmentAnnotation> annotations,
                      const OutputHeader *header = nullptr);

std::map<std::string, double> ReadCompetence(std::istream &in);
void WriteCompetence(std::ostream &out,
                     const std::map<std::string, double> &competence,
                     const OutputHeader *header = nullptr);

void WritePosteriors(std::ostream &out, const BinaryOpinionTable &table,
                     std::span<const double> posterior_yes,
                     const OutputHeader *header = nullptr);

std::map<SegmentSpec, TagSet> ReadTags(std::istream &in, int length);
void WriteTags(std::ostream &out, const std::map<SegmentSpec, TagSet> &tags,
               const OutputHeader *header = nullptr);

void WriteFrameCounts(std::ostream &out, const FrameOpinionCounts &counts);
std::vector<FrameOpinionCounts> ReadFrameCounts(std::istream &in);

// Column mapping for externally collected annotation tables (CSV/TSV).
// Read from a key=value file:
//
//   delimiter=,            single character, or "tab"
//   worker_column=WorkerId
//   file_column=filename
//   start_column=start     segment start in seconds
//   labels_column=labels
//   label_separator=;      several labels in one cell
//   none_label=none        value meaning "none of the above" (optional)
//   rename.children_playing=children_voices
//
// Rows sharing (worker, file, start) are merged, so both one-row-per-answer
// and one-row-per-label layouts are accepted.
struct ColumnMapping {
  char delimiter = ',';
  std::string worker_column = "worker";
  std::string file_column = "file";
  std::string start_column = "start";
  std::string labels_column = "labels";
  char label_separator = ';';
  std::string none_label;
  std::map<std::string, std::string> rename;

  static ColumnMapping FromKeyValues(
      const std::map<std::string, std::string> &kv);
};

std::vector<SegmentAnnotation> IngestAnnotationTable(
    std::istream &in, const ColumnMapping &mapping, int length);

// Splits one delimited line, honouring double quotes.
std::vector<std::string> SplitDelimited(const std::string &line,
                                        char delimiter);

// Flat key=value text; '#' starts a comment.
std::map<std::string, std::string> ReadKeyValues(std::istream &in);

}  // namespace strongcrowd

#endif  // STRONGCROWD_RECORDS_H_
