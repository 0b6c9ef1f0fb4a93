// src/records.cc

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

#include "strongcrowd/records.h"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "strongcrowd/errors.h"

namespace strongcrowd {

using nlohmann::json;

namespace {

// Calls fn(json, line_no) for every data line of a JSONL stream, turning
// parse and schema errors into InputErrors with the line number.
template <typename Fn>
void ForEachJsonLine(std::istream &in, Fn fn) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (IsSkippableLine(line)) continue;
    try {
      fn(json::parse(line));
    } catch (const json::exception &e) {
      throw InputError("line " + std::to_string(line_no) + ": " + e.what());
    } catch (const InputError &e) {
      throw InputError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
}

// Tab-separated data lines, split.
template <typename Fn>
void ForEachTsvLine(std::istream &in, Fn fn) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (IsSkippableLine(line)) continue;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto fields = SplitDelimited(line, '\t');
    try {
      fn(fields);
    } catch (const std::exception &e) {
      throw InputError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
}

double ToDouble(const std::string &s) {
  std::size_t used = 0;
  double v = std::stod(s, &used);
  if (used != s.size()) throw InputError("bad number '" + s + "'");
  return v;
}

std::string Trim(const std::string &s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string FormatProb(double p) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", p);
  return buf;
}

}  // namespace

std::vector<FileInfo> ReadFileList(std::istream &in) {
  std::vector<FileInfo> files;
  ForEachTsvLine(in, [&](const std::vector<std::string> &f) {
    if (f.size() < 2) throw InputError("expected file_id and duration");
    files.push_back({f[0], ToDouble(f[1])});
  });
  return files;
}

void WriteFileList(std::ostream &out, std::span<const FileInfo> files,
                   const OutputHeader *header) {
  if (header) out << HeaderComment(*header) << "\n";
  for (const auto &f : files)
    out << f.file_id << "\t" << FormatTime(f.duration) << "\n";
}

std::vector<Hit> ReadHits(std::istream &in) {
  std::vector<Hit> hits;
  ForEachJsonLine(in, [&](const json &j) {
    Hit h;
    h.hit_id = j.at("hit").get<int>();
    h.segment.file_id = j.at("file").get<std::string>();
    h.segment.start = j.at("start").get<int>();
    h.segment.length = j.value("length", 10);
    h.workers = j.at("workers").get<std::vector<std::string>>();
    hits.push_back(std::move(h));
  });
  return hits;
}

void WriteHits(std::ostream &out, std::span<const Hit> hits,
               const OutputHeader *header) {
  if (header) out << HeaderJson(*header) << "\n";
  for (const auto &h : hits) {
    json j;
    j["hit"] = h.hit_id;
    j["file"] = h.segment.file_id;
    j["start"] = h.segment.start;
    j["length"] = h.segment.length;
    j["workers"] = h.workers;
    out << j.dump() << "\n";
  }
}

std::vector<WorkerProfile> ReadWorkers(std::istream &in) {
  std::vector<WorkerProfile> workers;
  ForEachJsonLine(in, [&](const json &j) {
    WorkerProfile w;
    w.worker_id = j.at("worker").get<std::string>();
    w.population = j.value("population", "");
    w.trust = j.at("trust").get<double>();
    w.spam_yes = j.at("spam_yes").get<std::vector<double>>();
    w.miss_prob = j.at("miss_prob").get<double>();
    w.salience_slope = j.at("salience_slope").get<double>();
    w.false_alarm_prob = j.at("false_alarm_prob").get<double>();
    w.Validate();
    workers.push_back(std::move(w));
  });
  return workers;
}

void WriteWorkers(std::ostream &out, std::span<const WorkerProfile> workers,
                  const OutputHeader *header) {
  if (header) out << HeaderJson(*header) << "\n";
  for (const auto &w : workers) {
    json j;
    j["worker"] = w.worker_id;
    j["population"] = w.population;
    j["trust"] = w.trust;
    j["spam_yes"] = w.spam_yes;
    j["miss_prob"] = w.miss_prob;
    j["salience_slope"] = w.salience_slope;
    j["false_alarm_prob"] = w.false_alarm_prob;
    out << j.dump() << "\n";
  }
}

std::vector<SegmentAnnotation> ReadAnnotations(std::istream &in, int length) {
  std::vector<SegmentAnnotation> out;
  ForEachJsonLine(in, [&](const json &j) {
    SegmentAnnotation a;
    a.worker_id = j.at("worker").get<std::string>();
    a.segment = {j.at("file").get<std::string>(), j.at("start").get<int>(),
                 length};
    for (const auto &l : j.at("labels")) a.tags.insert(l.get<std::string>());
    out.push_back(std::move(a));
  });
  return out;
}

void WriteAnnotations(std::ostream &out,
                      std::span<const SegmentAnnotation> annotations,
                      const OutputHeader *header) {
  if (header) out << HeaderJson(*header) << "\n";
  for (const auto &a : annotations) {
    json j;
    j["worker"] = a.worker_id;
    j["file"] = a.segment.file_id;
    j["start"] = a.segment.start;
    j["labels"] = std::vector<std::string>(a.tags.begin(), a.tags.end());
    out << j.dump() << "\n";
  }
}

std::map<std::string, double> ReadCompetence(std::istream &in) {
  std::map<std::string, double> out;
  ForEachTsvLine(in, [&](const std::vector<std::string> &f) {
    if (f.size() < 2) throw InputError("expected worker_id and theta");
    const double theta = ToDouble(f[1]);
    if (theta < 0.0 || theta > 1.0) throw InputError("theta outside [0,1]");
    out[f[0]] = theta;
  });
  return out;
}

void WriteCompetence(std::ostream &out,
                     const std::map<std::string, double> &competence,
                     const OutputHeader *header) {
  if (header) out << HeaderComment(*header) << "\n";
  for (const auto &[worker, theta] : competence)
    out << worker << "\t" << FormatProb(theta) << "\n";
}

void WritePosteriors(std::ostream &out, const BinaryOpinionTable &table,
                     std::span<const double> posterior_yes,
                     const OutputHeader *header) {
  if (header) out << HeaderJson(*header) << "\n";
  for (std::size_t i = 0; i < table.NumItems(); ++i) {
    json j;
    j["file"] = table.SegmentOf(i).file_id;
    j["start"] = table.SegmentOf(i).start;
    j["class"] = table.LabelOf(i);
    j["p_yes"] = posterior_yes[i];
    out << j.dump() << "\n";
  }
}

std::map<SegmentSpec, TagSet> ReadTags(std::istream &in, int length) {
  std::map<SegmentSpec, TagSet> out;
  ForEachJsonLine(in, [&](const json &j) {
    SegmentSpec s{j.at("file").get<std::string>(), j.at("start").get<int>(),
                  length};
    auto &tags = out[s];
    for (const auto &l : j.at("labels")) tags.insert(l.get<std::string>());
  });
  return out;
}

void WriteTags(std::ostream &out, const std::map<SegmentSpec, TagSet> &tags,
               const OutputHeader *header) {
  if (header) out << HeaderJson(*header) << "\n";
  for (const auto &[seg, t] : tags) {
    json j;
    j["file"] = seg.file_id;
    j["start"] = seg.start;
    j["labels"] = std::vector<std::string>(t.begin(), t.end());
    out << j.dump() << "\n";
  }
}

void WriteFrameCounts(std::ostream &out, const FrameOpinionCounts &counts) {
  json j;
  j["file"] = counts.file_id;
  j["frame_len"] = counts.frame_len;
  j["available"] = counts.available;
  j["active"] = counts.active;
  out << j.dump() << "\n";
}

std::vector<FrameOpinionCounts> ReadFrameCounts(std::istream &in) {
  std::vector<FrameOpinionCounts> out;
  ForEachJsonLine(in, [&](const json &j) {
    FrameOpinionCounts c;
    c.file_id = j.at("file").get<std::string>();
    c.frame_len = j.at("frame_len").get<double>();
    c.available = j.at("available").get<std::vector<int>>();
    c.active = j.at("active").get<std::map<std::string, std::vector<int>>>();
    for (const auto &[label, lane] : c.active)
      if (lane.size() != c.available.size())
        throw InputError("frame count lane '" + label + "' has wrong length");
    out.push_back(std::move(c));
  });
  return out;
}

std::vector<std::string> SplitDelimited(const std::string &line,
                                        char delimiter) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        cur += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == delimiter) {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

std::map<std::string, std::string> ReadKeyValues(std::istream &in) {
  std::map<std::string, std::string> kv;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = Trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw InputError("line " + std::to_string(line_no) +
                       ": expected key=value");
    kv[Trim(line.substr(0, eq))] = Trim(line.substr(eq + 1));
  }
  return kv;
}

ColumnMapping ColumnMapping::FromKeyValues(
    const std::map<std::string, std::string> &kv) {
  ColumnMapping m;
  auto single_char = [](const std::string &key, const std::string &v) {
    if (v == "tab" || v == "\\t") return '\t';
    if (v.size() != 1)
      throw ConfigError(key + " must be a single character or 'tab'");
    return v[0];
  };
  for (const auto &[key, value] : kv) {
    if (key == "delimiter") m.delimiter = single_char(key, value);
    else if (key == "label_separator") m.label_separator = single_char(key, value);
    else if (key == "worker_column") m.worker_column = value;
    else if (key == "file_column") m.file_column = value;
    else if (key == "start_column") m.start_column = value;
    else if (key == "labels_column") m.labels_column = value;
    else if (key == "none_label") m.none_label = value;
    else if (key.rfind("rename.", 0) == 0) m.rename[key.substr(7)] = value;
    else throw ConfigError("unknown column-mapping key '" + key + "'");
  }
  return m;
}

std::vector<SegmentAnnotation> IngestAnnotationTable(
    std::istream &in, const ColumnMapping &mapping, int length) {
  std::string line;
  if (!std::getline(in, line)) throw InputError("annotation table is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = SplitDelimited(line, mapping.delimiter);
  auto column = [&](const std::string &name) {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (Trim(header[i]) == name) return i;
    throw InputError("annotation table has no column '" + name + "'");
  };
  const std::size_t cw = column(mapping.worker_column);
  const std::size_t cf = column(mapping.file_column);
  const std::size_t cs = column(mapping.start_column);
  const std::size_t cl = column(mapping.labels_column);

  std::map<std::pair<std::string, SegmentSpec>, TagSet> merged;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (Trim(line).empty()) continue;
    const auto f = SplitDelimited(line, mapping.delimiter);
    if (f.size() <= std::max({cw, cf, cs, cl}))
      throw InputError("line " + std::to_string(line_no) +
                       ": too few columns");
    double start = 0.0;
    try {
      start = ToDouble(Trim(f[cs]));
    } catch (const std::exception &) {
      throw InputError("line " + std::to_string(line_no) +
                       ": bad segment start '" + f[cs] + "'");
    }
    if (start != static_cast<int>(start) || start < 0)
      throw InputError("line " + std::to_string(line_no) +
                       ": segment start must be a non-negative integer");
    SegmentSpec seg{Trim(f[cf]), static_cast<int>(start), length};
    auto &tags = merged[{Trim(f[cw]), seg}];
    std::stringstream labels(f[cl]);
    std::string label;
    while (std::getline(labels, label, mapping.label_separator)) {
      label = Trim(label);
      if (label.empty() || label == mapping.none_label) continue;
      auto it = mapping.rename.find(label);
      tags.insert(it == mapping.rename.end() ? label : it->second);
    }
  }
  std::vector<SegmentAnnotation> out;
  for (auto &[key, tags] : merged)
    out.push_back({key.first, key.second, std::move(tags)});
  std::sort(out.begin(), out.end(), [](const auto &a, const auto &b) {
    if (a.segment != b.segment) return a.segment < b.segment;
    return a.worker_id < b.worker_id;
  });
  return out;
}

}  // namespace strongcrowd
