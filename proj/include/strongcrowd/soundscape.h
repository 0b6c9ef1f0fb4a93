// include/strongcrowd/soundscape.h

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

#ifndef STRONGCROWD_SOUNDSCAPE_H_
#define STRONGCROWD_SOUNDSCAPE_H_

#include <string>
#include <utility>
#include <vector>

#include "strongcrowd/rng.h"
#include "strongcrowd/timeline.h"

namespace strongcrowd {

// car_horn, children_voices, dog_bark, engine_idling, siren, street_music.
std::vector<std::string> DefaultClasses();

struct SoundscapeConfig {
  int n_files = 20;
  double duration = 180.0;
  int max_polyphony = 2;
  // Silence between consecutive events of one polyphony track.
  std::pair<double, double> gap_range{2.0, 10.0};
  std::pair<double, double> event_duration_range{1.0, 10.0};
  // Linear stand-in for a 0..20 dB SNR draw.
  std::pair<double, double> salience_range{0.0, 1.0};
  std::vector<std::string> classes = DefaultClasses();
  // Minimum silence between two events of the same class.  Zero only forbids
  // overlap.
  double min_same_class_gap = 0.0;
  // Events are kept inside [edge_margin, duration - edge_margin].
  double edge_margin = 0.0;
  std::uint64_t seed = 0;

  // Throws ConfigError.
  void Validate() const;
};

struct Soundscape {
  std::string file_id;
  double duration = 0.0;
  std::vector<EventInstance> events;
};

// Places events on max_polyphony independent tracks.  On each track the
// cursor advances by a gap drawn from gap_range, an event with a uniform
// class and duration is placed, and the cursor moves to its offset; the
// track ends when the next event would not fit.  The class is uniform over
// those keeping min_same_class_gap to every placed event; if there are none
// the slot is left silent.  Times are rounded to milliseconds.
//
// Throws GenerationError if no event can ever fit in the file.
std::vector<EventInstance> generate_soundscape(const SoundscapeConfig &config,
                                               const std::string &file_id,
                                               Rng &rng);

// n_files soundscapes named soundscape_00, soundscape_01, ..., each drawn
// from its own stream derived from config.seed.
std::vector<Soundscape> generate_soundscapes(const SoundscapeConfig &config);

std::string SoundscapeName(int index);

}  // namespace strongcrowd

#endif  // STRONGCROWD_SOUNDSCAPE_H_
