// include/strongcrowd/render.h

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

#ifndef STRONGCROWD_RENDER_H_
#define STRONGCROWD_RENDER_H_

#include <span>
#include <string>

#include "strongcrowd/aggregation.h"
#include "strongcrowd/timeline.h"

namespace strongcrowd {

// SVG with one lane per class: ground-truth bars, estimated bars and a heat
// strip of active/available opinions per frame (omitted when `counts` is
// null).  Purely presentational.
std::string render_timeline(const std::string &file_id, double duration,
                            std::span<const EventInstance> truth,
                            std::span<const EventInstance> estimated,
                            const FrameOpinionCounts *counts);

}  // namespace strongcrowd

#endif  // STRONGCROWD_RENDER_H_
