// include/strongcrowd/event_io.h

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

#ifndef STRONGCROWD_EVENT_IO_H_
#define STRONGCROWD_EVENT_IO_H_

// Event list formats.
//
//   TSV:   onset<TAB>offset<TAB>class_id, one event per line, times with
//          three decimals, one file per soundscape.  Lines starting with '#'
//          are comments.
//   JSONL: {"file": ..., "onset": ..., "offset": ..., "class": ...
//          [, "salience": ...]} one object per line.
//
// Writers can prepend a provenance header (stage, seed, config fingerprint);
// readers skip it.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "strongcrowd/timeline.h"

namespace strongcrowd {

struct OutputHeader {
  std::string stage;
  std::uint64_t seed = 0;
  std::string config_hash;
};

// "# strongcrowd stage=... seed=... config=..."
std::string HeaderComment(const OutputHeader &header);
// {"header":{...}}
std::string HeaderJson(const OutputHeader &header);
// True for lines that readers must skip (blank, '#' comments, JSON headers).
bool IsSkippableLine(const std::string &line);

// Rounds to the millisecond grid used by every serialized time.
double RoundToMs(double seconds);
std::string FormatTime(double seconds);

std::vector<EventInstance> ReadEventTsv(std::istream &in,
                                        const std::string &file_id);
void WriteEventTsv(std::ostream &out, std::span<const EventInstance> events,
                   const OutputHeader *header = nullptr);

std::vector<EventInstance> ReadEventJsonl(std::istream &in);
void WriteEventJsonl(std::ostream &out, std::span<const EventInstance> events,
                     const OutputHeader *header = nullptr);

// Dispatches on extension: .jsonl/.json are JSONL, anything else is TSV with
// the file stem as file_id.
std::vector<EventInstance> LoadEvents(const std::filesystem::path &path);

}  // namespace strongcrowd

#endif  // STRONGCROWD_EVENT_IO_H_
