// src/soundscape.cc

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

#include "strongcrowd/soundscape.h"

#include <algorithm>
#include <cstdio>
#include <set>

#include "strongcrowd/errors.h"
#include "strongcrowd/event_io.h"

namespace strongcrowd {

namespace {

bool ValidRange(const std::pair<double, double> &r) {
  return r.first <= r.second;
}

}  // namespace

std::vector<std::string> DefaultClasses() {
  return {"car_horn", "children_voices", "dog_bark",
          "engine_idling", "siren", "street_music"};
}

std::string SoundscapeName(int index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "soundscape_%02d", index);
  return buf;
}

void SoundscapeConfig::Validate() const {
  if (n_files < 0) throw ConfigError("n_files must be >= 0");
  if (!(duration >= 0.0)) throw ConfigError("duration must be >= 0");
  if (max_polyphony < 1) throw ConfigError("max_polyphony must be >= 1");
  if (!(gap_range.first > 0.0) || !ValidRange(gap_range))
    throw ConfigError("gap_range must be positive and ordered");
  if (!(event_duration_range.first > 0.0) || !ValidRange(event_duration_range))
    throw ConfigError("event_duration_range must be positive and ordered");
  if (salience_range.first < 0.0 || salience_range.second > 1.0 ||
      !ValidRange(salience_range))
    throw ConfigError("salience_range must be an ordered pair within [0,1]");
  if (classes.empty()) throw ConfigError("class vocabulary is empty");
  if (std::set<std::string>(classes.begin(), classes.end()).size() !=
      classes.size())
    throw ConfigError("class vocabulary has duplicates");
  if (min_same_class_gap < 0.0)
    throw ConfigError("min_same_class_gap must be >= 0");
  if (edge_margin < 0.0) throw ConfigError("edge_margin must be >= 0");
}

std::vector<EventInstance> generate_soundscape(const SoundscapeConfig &config,
                                               const std::string &file_id,
                                               Rng &rng) {
  config.Validate();
  std::vector<EventInstance> events;
  if (config.duration <= 0.0) return events;

  const double usable_end = config.duration - config.edge_margin;
  const double earliest_onset =
      std::max(config.edge_margin, config.gap_range.first);
  if (earliest_onset + config.event_duration_range.first > usable_end)
    throw GenerationError(
        "no event fits in " + file_id +
        ": gap_range, event_duration_range and edge_margin exceed duration");

  const double g = config.min_same_class_gap;
  auto conflicts = [&](const std::string &label, double onset, double offset) {
    for (const auto &e : events) {
      if (e.label != label) continue;
      if (onset < e.offset + g && e.onset < offset + g) return true;
    }
    return false;
  };

  for (int track = 0; track < config.max_polyphony; ++track) {
    double cursor = 0.0;
    while (true) {
      double onset = RoundToMs(
          cursor + rng.Uniform(config.gap_range.first, config.gap_range.second));
      onset = std::max(onset, config.edge_margin);
      const double length = RoundToMs(rng.Uniform(
          config.event_duration_range.first,
          config.event_duration_range.second));
      const double offset = RoundToMs(onset + length);
      if (offset > usable_end) break;

      // Uniform over the classes that keep their same-class gap; when none
      // does, the slot stays silent.
      std::vector<const std::string *> allowed;
      for (const auto &c : config.classes)
        if (!conflicts(c, onset, offset)) allowed.push_back(&c);
      if (allowed.empty()) {
        cursor = offset;
        continue;
      }
      std::string label = *allowed[rng.Below(allowed.size())];

      EventInstance e;
      e.file_id = file_id;
      e.label = std::move(label);
      e.onset = onset;
      e.offset = offset;
      e.salience = RoundToMs(rng.Uniform(config.salience_range.first,
                                         config.salience_range.second));
      events.push_back(std::move(e));
      cursor = offset;
    }
  }
  SortEvents(events);
  return events;
}

std::vector<Soundscape> generate_soundscapes(const SoundscapeConfig &config) {
  config.Validate();
  std::vector<Soundscape> files;
  for (int i = 0; i < config.n_files; ++i) {
    Soundscape s;
    s.file_id = SoundscapeName(i);
    s.duration = config.duration;
    Rng rng = Rng::Derive(config.seed, "soundscape/" + s.file_id);
    s.events = generate_soundscape(config, s.file_id, rng);
    files.push_back(std::move(s));
  }
  return files;
}

}  // namespace strongcrowd
