// src/event_io.cc

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

#include "strongcrowd/event_io.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "strongcrowd/errors.h"

namespace strongcrowd {

using nlohmann::json;

namespace {

double ParseNumber(const std::string &field, std::size_t line_no) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(field, &used);
  } catch (const std::exception &) {
    used = 0;
  }
  if (used == 0 || used != field.size() || !std::isfinite(value))
    throw InputError("line " + std::to_string(line_no) +
                     ": cannot parse time '" + field + "'");
  return value;
}

std::vector<std::string> SplitFields(const std::string &line) {
  std::vector<std::string> fields;
  if (line.find('\t') != std::string::npos) {
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, '\t')) fields.push_back(f);
  } else {
    std::istringstream ss(line);
    std::string f;
    while (ss >> f) fields.push_back(f);
  }
  for (auto &f : fields) {
    while (!f.empty() && (f.back() == '\r' || f.back() == ' ')) f.pop_back();
    while (!f.empty() && f.front() == ' ') f.erase(f.begin());
  }
  return fields;
}

}  // namespace

std::string HeaderComment(const OutputHeader &h) {
  return "# strongcrowd stage=" + h.stage + " seed=" + std::to_string(h.seed) +
         " config=" + h.config_hash;
}

std::string HeaderJson(const OutputHeader &h) {
  json j;
  j["header"] = {{"tool", "strongcrowd"},
                 {"stage", h.stage},
                 {"seed", h.seed},
                 {"config", h.config_hash}};
  return j.dump();
}

bool IsSkippableLine(const std::string &line) {
  std::size_t i = line.find_first_not_of(" \t\r");
  if (i == std::string::npos) return true;
  if (line[i] == '#') return true;
  return line.compare(i, 10, "{\"header\":") == 0;
}

double RoundToMs(double seconds) { return std::round(seconds * 1000.0) / 1000.0; }

std::string FormatTime(double seconds) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3f", RoundToMs(seconds));
  return buf;
}

std::vector<EventInstance> ReadEventTsv(std::istream &in,
                                        const std::string &file_id) {
  std::vector<EventInstance> events;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (IsSkippableLine(line)) continue;
    auto fields = SplitFields(line);
    if (fields.size() < 3)
      throw InputError("line " + std::to_string(line_no) +
                       ": expected onset, offset and class");
    EventInstance e;
    e.file_id = file_id;
    e.onset = ParseNumber(fields[0], line_no);
    e.offset = ParseNumber(fields[1], line_no);
    e.label = fields[2];
    if (e.label.empty())
      throw InputError("line " + std::to_string(line_no) + ": empty class");
    if (!(e.offset > e.onset) || e.onset < 0.0)
      throw InputError("line " + std::to_string(line_no) +
                       ": onset must be >= 0 and below offset");
    events.push_back(std::move(e));
  }
  return events;
}

void WriteEventTsv(std::ostream &out, std::span<const EventInstance> events,
                   const OutputHeader *header) {
  if (header) out << HeaderComment(*header) << "\n";
  for (const auto &e : events)
    out << FormatTime(e.onset) << "\t" << FormatTime(e.offset) << "\t"
        << e.label << "\n";
}

std::vector<EventInstance> ReadEventJsonl(std::istream &in) {
  std::vector<EventInstance> events;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (IsSkippableLine(line)) continue;
    try {
      json j = json::parse(line);
      EventInstance e;
      e.file_id = j.at("file").get<std::string>();
      e.onset = j.at("onset").get<double>();
      e.offset = j.at("offset").get<double>();
      e.label = j.at("class").get<std::string>();
      if (j.contains("salience") && !j["salience"].is_null())
        e.salience = j["salience"].get<double>();
      if (!(e.offset > e.onset) || e.onset < 0.0)
        throw InputError("onset must be >= 0 and below offset");
      events.push_back(std::move(e));
    } catch (const json::exception &ex) {
      throw InputError("line " + std::to_string(line_no) + ": " + ex.what());
    } catch (const InputError &ex) {
      throw InputError("line " + std::to_string(line_no) + ": " + ex.what());
    }
  }
  return events;
}

void WriteEventJsonl(std::ostream &out, std::span<const EventInstance> events,
                     const OutputHeader *header) {
  if (header) out << HeaderJson(*header) << "\n";
  for (const auto &e : events) {
    json j;
    j["file"] = e.file_id;
    j["onset"] = RoundToMs(e.onset);
    j["offset"] = RoundToMs(e.offset);
    j["class"] = e.label;
    if (e.salience) j["salience"] = RoundToMs(*e.salience);
    out << j.dump() << "\n";
  }
}

std::vector<EventInstance> LoadEvents(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  const auto ext = path.extension().string();
  try {
    if (ext == ".jsonl" || ext == ".json") return ReadEventJsonl(in);
    return ReadEventTsv(in, path.stem().string());
  } catch (const InputError &e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

}  // namespace strongcrowd
