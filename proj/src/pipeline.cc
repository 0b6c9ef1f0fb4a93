// src/pipeline.cc

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

#include "strongcrowd/pipeline.h"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <memory>
#include <set>
#include <sstream>

#include "json.hpp"
#include "strongcrowd/errors.h"
#include "strongcrowd/render.h"

namespace strongcrowd {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string Str(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double ParseDouble(const std::string &key, const std::string &v) {
  double out = 0.0;
  auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size())
    throw ConfigError("config key '" + key + "': bad number '" + v + "'");
  return out;
}

long long ParseInt(const std::string &key, const std::string &v) {
  long long out = 0;
  auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size())
    throw ConfigError("config key '" + key + "': bad integer '" + v + "'");
  return out;
}

std::vector<std::string> SplitList(const std::string &v, char sep = ',') {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, sep))
    if (!item.empty()) out.push_back(item);
  return out;
}

std::string JoinList(const std::vector<std::string> &items, char sep = ',') {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

std::pair<double, double> ParsePair(const std::string &key,
                                    const std::string &v) {
  auto parts = SplitList(v);
  if (parts.size() != 2)
    throw ConfigError("config key '" + key + "' expects 'lo,hi'");
  return {ParseDouble(key, parts[0]), ParseDouble(key, parts[1])};
}

std::string PairStr(const std::pair<double, double> &p) {
  return Str(p.first) + "," + Str(p.second);
}

std::vector<double> ParseDoubles(const std::string &key, const std::string &v) {
  std::vector<double> out;
  for (const auto &p : SplitList(v)) out.push_back(ParseDouble(key, p));
  return out;
}

// name:fraction:trust_lo:trust_hi[:spam_lo:spam_hi], comma separated.
std::vector<Subpopulation> ParsePopulation(const std::string &v) {
  std::vector<Subpopulation> groups;
  for (const auto &g : SplitList(v)) {
    auto f = SplitList(g, ':');
    if (f.size() != 4 && f.size() != 6)
      throw ConfigError("population group '" + g +
                        "' expects name:fraction:trust_lo:trust_hi"
                        "[:spam_lo:spam_hi]");
    Subpopulation s;
    s.name = f[0];
    s.fraction = ParseDouble("population", f[1]);
    s.trust_lo = ParseDouble("population", f[2]);
    s.trust_hi = ParseDouble("population", f[3]);
    if (f.size() == 6) {
      s.spam_yes_lo = ParseDouble("population", f[4]);
      s.spam_yes_hi = ParseDouble("population", f[5]);
    }
    groups.push_back(s);
  }
  return groups;
}

std::string PopulationStr(const std::vector<Subpopulation> &groups) {
  std::vector<std::string> parts;
  for (const auto &g : groups)
    parts.push_back(g.name + ":" + Str(g.fraction) + ":" + Str(g.trust_lo) +
                    ":" + Str(g.trust_hi) + ":" + Str(g.spam_yes_lo) + ":" +
                    Str(g.spam_yes_hi));
  return JoinList(parts);
}

// Output files of one stage.  Data goes to "<path>.partial"; Commit()
// renames everything, otherwise the destructor deletes the partial files.
class StageWriter {
 public:
  StageWriter() = default;
  StageWriter(const StageWriter &) = delete;
  StageWriter &operator=(const StageWriter &) = delete;
  ~StageWriter() {
    if (committed_) return;
    for (auto &[path, stream] : files_) {
      stream->close();
      std::error_code ec;
      fs::remove(Partial(path), ec);
    }
  }

  std::ostream &Open(const fs::path &path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    auto stream = std::make_unique<std::ofstream>(Partial(path),
                                                  std::ios::binary);
    if (!*stream) throw InputError("cannot write " + path.string());
    files_.emplace_back(path, std::move(stream));
    return *files_.back().second;
  }

  void Commit() {
    for (auto &[path, stream] : files_) {
      stream->close();
      if (!*stream) throw InputError("error writing " + path.string());
    }
    for (auto &[path, stream] : files_) fs::rename(Partial(path), path);
    committed_ = true;
  }

 private:
  static fs::path Partial(const fs::path &p) {
    return fs::path(p.string() + ".partial");
  }
  std::vector<std::pair<fs::path, std::unique_ptr<std::ofstream>>> files_;
  bool committed_ = false;
};

std::ifstream OpenInput(const fs::path &path, const std::string &stage,
                        const std::string &producer) {
  std::ifstream in(path);
  if (!in)
    throw InputError(stage + ": missing input " + path.string() +
                     " (run '" + producer + "' first)");
  return in;
}

// Reruns a reader with the path prefixed to any parse error.
template <typename Fn>
auto ReadInput(const fs::path &path, const std::string &stage,
               const std::string &producer, Fn fn) {
  auto in = OpenInput(path, stage, producer);
  try {
    return fn(in);
  } catch (const InputError &e) {
    throw InputError(stage + ": " + path.string() + ": " + e.what());
  }
}

std::string ModeTitle(const std::string &mode, double threshold) {
  if (mode == "all") return "all annotators";
  if (mode == "filtered") {
    std::ostringstream os;
    os << "competence > " << threshold;
    return os.str();
  }
  if (mode == "mace") return "MACE";
  return mode;
}

std::string Fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  return buf;
}

std::vector<EventInstance> EventsOf(
    const std::map<std::string, FileEstimate> &estimate) {
  std::vector<EventInstance> all;
  for (const auto &[file, est] : estimate)
    all.insert(all.end(), est.events.begin(), est.events.end());
  return all;
}

}  // namespace

// ---- PipelineConfig ----

void PipelineConfig::Set(const std::string &key, const std::string &v) {
  auto &sc = soundscape;
  if (key == "seed") seed = static_cast<std::uint64_t>(ParseInt(key, v));
  else if (key == "out") out = v;
  else if (key == "n_files") sc.n_files = ParseInt(key, v);
  else if (key == "duration") sc.duration = ParseDouble(key, v);
  else if (key == "max_polyphony") sc.max_polyphony = ParseInt(key, v);
  else if (key == "gap_range") sc.gap_range = ParsePair(key, v);
  else if (key == "event_duration_range") sc.event_duration_range = ParsePair(key, v);
  else if (key == "salience_range") sc.salience_range = ParsePair(key, v);
  else if (key == "classes") sc.classes = SplitList(v);
  else if (key == "min_same_class_gap") sc.min_same_class_gap = ParseDouble(key, v);
  else if (key == "edge_margin") sc.edge_margin = ParseDouble(key, v);
  else if (key == "length") campaign.length = ParseInt(key, v);
  else if (key == "hop") campaign.hop = ParseInt(key, v);
  else if (key == "workers_per_hit") campaign.workers_per_hit = ParseInt(key, v);
  else if (key == "worker_pool_size") campaign.worker_pool_size = ParseInt(key, v);
  else if (key == "max_hits_per_worker") campaign.max_hits_per_worker = ParseInt(key, v);
  else if (key == "min_separation") campaign.min_separation = ParseDouble(key, v);
  else if (key == "population") population.groups = ParsePopulation(v);
  else if (key == "miss_prob") population.miss_prob = ParseDouble(key, v);
  else if (key == "salience_slope") population.salience_slope = ParseDouble(key, v);
  else if (key == "false_alarm_prob") population.false_alarm_prob = ParseDouble(key, v);
  else if (key == "mace_restarts") mace.restarts = ParseInt(key, v);
  else if (key == "mace_iterations") mace.iterations = ParseInt(key, v);
  else if (key == "mace_smoothing") mace.smoothing = ParseDouble(key, v);
  else if (key == "mace_tolerance") mace.tolerance = ParseDouble(key, v);
  else if (key == "mace_threads") mace.threads = ParseInt(key, v);
  else if (key == "decision_threshold") decision_threshold = ParseDouble(key, v);
  else if (key == "competence_threshold") competence_threshold = ParseDouble(key, v);
  else if (key == "modes") modes = SplitList(v);
  else if (key == "tau") tau = ParseDouble(key, v);
  else if (key == "segment_length") segment_length = ParseDouble(key, v);
  else if (key == "dtc" || key == "gtc") {
    auto values = ParseDoubles(key, v);
    if (values.size() != intersections.size()) intersections.resize(values.size());
    for (std::size_t i = 0; i < values.size(); ++i)
      (key == "dtc" ? intersections[i].dtc : intersections[i].gtc) = values[i];
  } else if (key == "agreement_thresholds") {
    agreement_thresholds = ParseDoubles(key, v);
  } else {
    throw ConfigError("unknown config key '" + key + "'");
  }
}

void PipelineConfig::Apply(const std::map<std::string, std::string> &kv) {
  // dtc/gtc resize the criteria list; apply dtc first so that a following gtc
  // pairs with it.
  for (const auto &[k, v] : kv)
    if (k != "gtc") Set(k, v);
  if (auto it = kv.find("gtc"); it != kv.end()) Set(it->first, it->second);
}

std::map<std::string, std::string> PipelineConfig::ToKeyValues() const {
  const auto &sc = soundscape;
  std::map<std::string, std::string> kv;
  kv["seed"] = std::to_string(seed);
  kv["n_files"] = std::to_string(sc.n_files);
  kv["duration"] = Str(sc.duration);
  kv["max_polyphony"] = std::to_string(sc.max_polyphony);
  kv["gap_range"] = PairStr(sc.gap_range);
  kv["event_duration_range"] = PairStr(sc.event_duration_range);
  kv["salience_range"] = PairStr(sc.salience_range);
  kv["classes"] = JoinList(sc.classes);
  kv["min_same_class_gap"] = Str(sc.min_same_class_gap);
  kv["edge_margin"] = Str(sc.edge_margin);
  kv["length"] = std::to_string(campaign.length);
  kv["hop"] = std::to_string(campaign.hop);
  kv["workers_per_hit"] = std::to_string(campaign.workers_per_hit);
  kv["worker_pool_size"] = std::to_string(campaign.worker_pool_size);
  kv["max_hits_per_worker"] = std::to_string(campaign.max_hits_per_worker);
  kv["min_separation"] = Str(campaign.min_separation);
  kv["population"] = PopulationStr(population.groups);
  kv["miss_prob"] = Str(population.miss_prob);
  kv["salience_slope"] = Str(population.salience_slope);
  kv["false_alarm_prob"] = Str(population.false_alarm_prob);
  kv["mace_restarts"] = std::to_string(mace.restarts);
  kv["mace_iterations"] = std::to_string(mace.iterations);
  kv["mace_smoothing"] = Str(mace.smoothing);
  kv["mace_tolerance"] = Str(mace.tolerance);
  kv["decision_threshold"] = Str(decision_threshold);
  kv["competence_threshold"] = Str(competence_threshold);
  kv["modes"] = JoinList(modes);
  kv["tau"] = Str(tau);
  kv["segment_length"] = Str(segment_length);
  std::vector<std::string> dtc, gtc, agree;
  for (const auto &c : intersections) {
    dtc.push_back(Str(c.dtc));
    gtc.push_back(Str(c.gtc));
  }
  for (double t : agreement_thresholds) agree.push_back(Str(t));
  kv["dtc"] = JoinList(dtc);
  kv["gtc"] = JoinList(gtc);
  kv["agreement_thresholds"] = JoinList(agree);
  return kv;
}

std::string PipelineConfig::Fingerprint() const {
  std::string canon;
  for (const auto &[k, v] : ToKeyValues()) canon += k + "=" + v + "\n";
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(Fnv1a64(canon)));
  return buf;
}

void PipelineConfig::Validate() const {
  soundscape.Validate();
  campaign.Validate();
  population.Validate();
  mace.Validate();
  if (!(decision_threshold > 0.0 && decision_threshold < 1.0))
    throw ConfigError("decision_threshold must be in (0,1)");
  for (const auto &m : modes) AggregationMode::Parse(m, tau, competence_threshold);
  if (!(segment_length > 0.0)) throw ConfigError("segment_length must be > 0");
  for (const auto &c : intersections) c.Validate();
}

std::uint64_t PipelineConfig::StageSeed(const std::string &stage) const {
  return Rng::DeriveSeed(seed, stage);
}

OutputHeader PipelineConfig::Header(const std::string &stage) const {
  return {stage, seed, Fingerprint()};
}

// ---- in-memory stages ----

std::vector<Soundscape> GenerateStage(const PipelineConfig &config) {
  SoundscapeConfig sc = config.soundscape;
  sc.seed = config.StageSeed("generate");
  return generate_soundscapes(sc);
}

std::vector<Hit> CampaignStage(const PipelineConfig &config,
                               std::span<const FileInfo> files) {
  Rng rng(config.StageSeed("campaign"));
  return build_campaign(files, config.campaign, rng);
}

std::vector<WorkerProfile> WorkerStage(const PipelineConfig &config) {
  Rng rng(config.StageSeed("workers"));
  return sample_worker_pool(config.campaign.worker_pool_size, config.population,
                            config.soundscape.classes, rng);
}

std::vector<SegmentAnnotation> SimulateStage(
    const PipelineConfig &config, std::span<const Hit> hits,
    std::span<const WorkerProfile> workers,
    std::span<const EventInstance> truth) {
  return simulate_campaign(hits, workers, truth, config.soundscape.classes,
                           config.StageSeed("simulate"));
}

CampaignData SimulateExperiment(const PipelineConfig &config) {
  config.Validate();
  CampaignData d;
  for (auto &s : GenerateStage(config)) {
    d.files.push_back({s.file_id, s.duration});
    d.truth.insert(d.truth.end(), s.events.begin(), s.events.end());
  }
  d.hits = CampaignStage(config, d.files);
  d.workers = WorkerStage(config);
  d.annotations = SimulateStage(config, d.hits, d.workers, d.truth);
  return d;
}

MaceStageResult MaceStage(const PipelineConfig &config,
                          std::span<const SegmentAnnotation> annotations) {
  MaceStageResult r;
  r.table = build_binary_instances(annotations, config.soundscape.classes);
  MaceOptions options = config.mace;
  options.seed = config.StageSeed("mace");
  r.result = run_mace(r.table, options);
  r.outputs.competence = Competences(r.table, r.result.model);
  r.outputs.tags = predict_tags(r.table, r.result.posteriors.yes,
                                config.decision_threshold);
  return r;
}

EvaluationReport EvaluateExperiment(
    const PipelineConfig &config, std::span<const FileInfo> files,
    std::span<const EventInstance> truth,
    std::span<const SegmentAnnotation> annotations, const MaceOutputs &mace,
    const std::map<std::string, std::map<std::string, FileEstimate>>
        &estimates) {
  EvaluationReport report;
  report.competence_threshold = config.competence_threshold;

  std::map<std::string, std::vector<EventInstance>> truth_by_file;
  for (const auto &e : truth) truth_by_file[e.file_id].push_back(e);
  std::map<SegmentSpec, TagSet> reference, majority, unions;
  for (const auto &[seg, group] : GroupBySegment(annotations)) {
    std::vector<TagSet> opinions;
    for (const auto *a : group) opinions.push_back(a->tags);
    reference[seg] = segment_ground_truth_tags(truth_by_file[seg.file_id], seg);
    majority[seg] = majority_tags(opinions);
    unions[seg] = union_tags(opinions);
  }
  std::map<SegmentSpec, TagSet> mace_tags;
  for (const auto &[seg, tags] : reference) {
    auto it = mace.tags.find(seg);
    mace_tags[seg] = it == mace.tags.end() ? TagSet{} : it->second;
  }
  report.majority = tag_prf(majority, reference);
  report.mace = tag_prf(mace_tags, reference);
  report.union_tags = tag_prf(unions, reference);

  for (const auto &mode : config.modes) {
    auto it = estimates.find(mode);
    if (it == estimates.end())
      throw InputError("no estimate for aggregation mode '" + mode + "'");
    ModeReport row;
    row.mode = mode;
    const auto system = EventsOf(it->second);
    row.segment = segment_metrics(files, truth, system, config.segment_length);
    for (const auto &crit : config.intersections)
      row.intersection.emplace_back(crit, intersection_f1(truth, system, crit));
    double sum = 0.0;
    std::size_t n = 0;
    const int L = config.campaign.length;
    for (const auto &[file, est] : it->second) {
      const auto &avail = est.counts.available;
      const long last_start = static_cast<long>(avail.size()) - L;
      for (long t = L - 1; t <= last_start && t >= 0; ++t) {
        sum += avail[t];
        ++n;
      }
    }
    row.mean_available_interior = n ? sum / n : 0.0;
    report.modes.push_back(std::move(row));
  }
  return report;
}

AgreementSummary AgreementStage(const PipelineConfig &config,
                                std::span<const SegmentAnnotation> annotations,
                                const std::map<std::string, double> &competence) {
  AgreementSummary s;
  const auto &vocab = config.soundscape.classes;
  auto table = build_binary_instances(annotations, vocab);
  s.all = krippendorff_alpha(table);
  s.all_workers = table.NumWorkers();
  for (double threshold : config.agreement_thresholds) {
    auto kept = filter_by_competence(annotations, competence, threshold);
    auto ft = build_binary_instances(kept, vocab);
    AgreementReport rep;
    try {
      rep = krippendorff_alpha(ft);
    } catch (const InputError &) {
      // Too few workers survive the filter to pair any opinions.
      rep.alpha = std::numeric_limits<double>::quiet_NaN();
    }
    s.filtered.emplace_back(threshold, rep, ft.NumWorkers());
  }
  return s;
}

std::string FormatEvaluation(const EvaluationReport &r) {
  std::ostringstream os;
  os << "Tag-level scores against the reference tags of each segment\n";
  os << "  method              P       R       F1\n";
  auto tag_row = [&](const char *name, const PrfScore &s) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "  %-16s %6.1f  %6.1f  %6.1f\n", name,
                  s.precision, s.recall, s.f1);
    os << buf;
  };
  tag_row("majority vote", r.majority);
  tag_row("MACE", r.mace);
  tag_row("union", r.union_tags);
  os << "\nStrong labels against the ground truth\n";
  os << "  labels based on      ER_1s     S     D     I   F1_1s      P      R";
  if (!r.modes.empty())
    for (const auto &[crit, rep] : r.modes.front().intersection)
      os << "  F1_dtc=" << Str(crit.dtc);
  os << "  avail\n";
  for (const auto &row : r.modes) {
    const auto &s = row.segment;
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "  %-18s %6s %5.2f %5.2f %5.2f  %6.1f %6.1f %6.1f",
                  ModeTitle(row.mode, r.competence_threshold).c_str(),
                  s.er_defined ? Fixed(s.er, 2).c_str() : "n/a", s.s_rate,
                  s.d_rate, s.i_rate, s.prf.f1, s.prf.precision, s.prf.recall);
    os << buf;
    for (const auto &[crit, rep] : row.intersection) {
      std::snprintf(buf, sizeof(buf), "  %9.1f%%", rep.f1);
      os << buf;
    }
    std::snprintf(buf, sizeof(buf), "  %5.1f\n", row.mean_available_interior);
    os << buf;
  }
  return os.str();
}

std::string FormatAgreement(const AgreementSummary &s) {
  std::ostringstream os;
  os << "Krippendorff's alpha over binary (segment, class) opinions\n";
  char buf[160];
  std::snprintf(buf, sizeof(buf), "  %-22s alpha=%.4f  workers=%zu  items=%zu\n",
                "all annotators", s.all.alpha, s.all_workers, s.all.items);
  os << buf;
  for (const auto &[t, rep, workers] : s.filtered) {
    const std::string name = "competence > " + Str(t);
    const std::string alpha =
        std::isnan(rep.alpha) ? std::string("n/a") : Fixed(rep.alpha, 4);
    std::snprintf(buf, sizeof(buf),
                  "  %-22s alpha=%s  workers=%zu  items=%zu\n", name.c_str(),
                  alpha.c_str(), workers, rep.items);
    os << buf;
  }
  return os.str();
}

// ---- persisted stages ----

namespace {

std::vector<FileInfo> LoadFiles(const Layout &L, const std::string &stage) {
  return ReadInput(L.files(), stage, "generate",
                   [](std::istream &in) { return ReadFileList(in); });
}

std::vector<EventInstance> LoadTruth(const Layout &L, const std::string &stage) {
  return ReadInput(L.truth(), stage, "generate",
                   [](std::istream &in) { return ReadEventJsonl(in); });
}

std::vector<SegmentAnnotation> LoadAnnotations(const PipelineConfig &config,
                                               const std::string &stage) {
  const Layout L{config.out};
  const int length = config.campaign.length;
  return ReadInput(L.annotations(), stage, "simulate' or 'ingest",
                   [&](std::istream &in) { return ReadAnnotations(in, length); });
}

MaceOutputs LoadMaceOutputs(const PipelineConfig &config,
                            const std::string &stage) {
  const Layout L{config.out};
  MaceOutputs m;
  m.competence = ReadInput(L.competence(), stage, "mace", [](std::istream &in) {
    return ReadCompetence(in);
  });
  const int length = config.campaign.length;
  m.tags = ReadInput(L.mace_tags(), stage, "mace", [&](std::istream &in) {
    return ReadTags(in, length);
  });
  return m;
}

bool NeedsMace(const std::vector<std::string> &modes) {
  for (const auto &m : modes)
    if (m != "all") return true;
  return false;
}

}  // namespace

void cmd_generate(const PipelineConfig &config) {
  config.Validate();
  const Layout L{config.out};
  const auto header = config.Header("generate");
  const auto soundscapes = GenerateStage(config);

  StageWriter w;
  auto &cfg = w.Open(L.config());
  cfg << HeaderComment(header) << "\n";
  for (const auto &[k, v] : config.ToKeyValues()) cfg << k << "=" << v << "\n";

  std::vector<FileInfo> files;
  std::vector<EventInstance> all;
  for (const auto &s : soundscapes) {
    files.push_back({s.file_id, s.duration});
    all.insert(all.end(), s.events.begin(), s.events.end());
    WriteEventTsv(w.Open(L.truth_tsv(s.file_id)), s.events, &header);
  }
  WriteFileList(w.Open(L.files()), files, &header);
  WriteEventJsonl(w.Open(L.truth()), all, &header);
  w.Commit();
}

void cmd_campaign(const PipelineConfig &config) {
  config.Validate();
  const Layout L{config.out};
  const auto files = LoadFiles(L, "campaign");
  const auto hits = CampaignStage(config, files);
  const auto header = config.Header("campaign");
  StageWriter w;
  WriteHits(w.Open(L.campaign()), hits, &header);
  w.Commit();
}

void cmd_simulate(const PipelineConfig &config) {
  config.Validate();
  const Layout L{config.out};
  const auto hits = ReadInput(L.campaign(), "simulate", "campaign",
                              [](std::istream &in) { return ReadHits(in); });
  const auto truth = LoadTruth(L, "simulate");
  const auto workers = WorkerStage(config);
  const auto annotations = SimulateStage(config, hits, workers, truth);
  const auto header = config.Header("simulate");
  StageWriter w;
  WriteWorkers(w.Open(L.workers()), workers, &header);
  WriteAnnotations(w.Open(L.annotations()), annotations, &header);
  w.Commit();
}

void cmd_ingest(const PipelineConfig &config, const fs::path &table,
                const ColumnMapping &mapping) {
  const Layout L{config.out};
  std::ifstream in(table);
  if (!in) throw InputError("ingest: cannot open " + table.string());
  std::vector<SegmentAnnotation> annotations;
  try {
    annotations = IngestAnnotationTable(in, mapping, config.campaign.length);
  } catch (const InputError &e) {
    throw InputError("ingest: " + table.string() + ": " + e.what());
  }
  // Rejects duplicates and unknown classes before anything is written.
  build_binary_instances(annotations, config.soundscape.classes);
  const auto header = config.Header("ingest");
  StageWriter w;
  WriteAnnotations(w.Open(L.annotations()), annotations, &header);
  w.Commit();
}

void cmd_mace(const PipelineConfig &config) {
  config.Validate();
  const Layout L{config.out};
  const auto annotations = LoadAnnotations(config, "mace");
  const auto r = MaceStage(config, annotations);
  const auto header = config.Header("mace");
  StageWriter w;
  WriteCompetence(w.Open(L.competence()), r.outputs.competence, &header);
  WritePosteriors(w.Open(L.posteriors()), r.table, r.result.posteriors.yes,
                  &header);
  WriteTags(w.Open(L.mace_tags()), r.outputs.tags, &header);
  w.Commit();
}

void cmd_aggregate(const PipelineConfig &config) {
  config.Validate();
  const Layout L{config.out};
  const auto files = LoadFiles(L, "aggregate");
  const auto annotations = LoadAnnotations(config, "aggregate");
  MaceOutputs mace;
  if (NeedsMace(config.modes)) mace = LoadMaceOutputs(config, "aggregate");
  const auto header = config.Header("aggregate");
  StageWriter w;
  for (const auto &name : config.modes) {
    const auto mode =
        AggregationMode::Parse(name, config.tau, config.competence_threshold);
    const auto estimate = estimate_strong_labels(
        files, annotations, &mace, mode, config.soundscape.classes);
    WriteEventJsonl(w.Open(L.estimated(name)), EventsOf(estimate), &header);
    auto &counts = w.Open(L.counts(name));
    counts << HeaderJson(header) << "\n";
    for (const auto &[file, est] : estimate) {
      WriteEventTsv(w.Open(L.estimated_tsv(name, file)), est.events, &header);
      WriteFrameCounts(counts, est.counts);
    }
  }
  w.Commit();
}

namespace {

std::map<std::string, std::map<std::string, FileEstimate>> LoadEstimates(
    const PipelineConfig &config) {
  const Layout L{config.out};
  std::map<std::string, std::map<std::string, FileEstimate>> out;
  for (const auto &mode : config.modes) {
    auto &per_file = out[mode];
    for (auto &e : ReadInput(L.estimated(mode), "evaluate", "aggregate",
                             [](std::istream &in) { return ReadEventJsonl(in); }))
      per_file[e.file_id].events.push_back(std::move(e));
    for (auto &c : ReadInput(L.counts(mode), "evaluate", "aggregate",
                             [](std::istream &in) { return ReadFrameCounts(in); }))
      per_file[c.file_id].counts = std::move(c);
  }
  return out;
}

}  // namespace

EvaluationReport cmd_evaluate(const PipelineConfig &config) {
  config.Validate();
  const Layout L{config.out};
  const auto files = LoadFiles(L, "evaluate");
  const auto truth = LoadTruth(L, "evaluate");
  const auto annotations = LoadAnnotations(config, "evaluate");
  const auto mace = LoadMaceOutputs(config, "evaluate");
  const auto estimates = LoadEstimates(config);
  const auto report =
      EvaluateExperiment(config, files, truth, annotations, mace, estimates);

  const auto header = config.Header("evaluate");
  StageWriter w;
  auto &txt = w.Open(L.report_txt());
  txt << HeaderComment(header) << "\n" << FormatEvaluation(report);
  auto &js = w.Open(L.report_jsonl());
  js << HeaderJson(header) << "\n";
  auto prf = [](const std::string &method, const PrfScore &s) {
    return json{{"kind", "tags"},      {"method", method},
                {"precision", s.precision}, {"recall", s.recall},
                {"f1", s.f1},          {"tp", s.tp},
                {"fp", s.fp},          {"fn", s.fn}};
  };
  js << prf("majority", report.majority).dump() << "\n";
  js << prf("mace", report.mace).dump() << "\n";
  js << prf("union", report.union_tags).dump() << "\n";
  for (const auto &row : report.modes) {
    const auto &s = row.segment;
    json j{{"kind", "detection"},
           {"mode", row.mode},
           {"er", s.er_defined ? json(s.er) : json(nullptr)},
           {"s", s.s_rate},
           {"d", s.d_rate},
           {"i", s.i_rate},
           {"f1", s.prf.f1},
           {"precision", s.prf.precision},
           {"recall", s.prf.recall},
           {"mean_available_interior", row.mean_available_interior}};
    for (const auto &[crit, rep] : row.intersection) {
      const std::string key = "f1_dtc=" + Str(crit.dtc) + "_gtc=" + Str(crit.gtc);
      j[key] = rep.f1;
      j[key + "_macro"] = rep.macro_f1;
    }
    js << j.dump() << "\n";
  }
  w.Commit();
  return report;
}

AgreementSummary cmd_agreement(const PipelineConfig &config) {
  config.Validate();
  const Layout L{config.out};
  const auto annotations = LoadAnnotations(config, "agreement");
  const auto competence =
      ReadInput(L.competence(), "agreement", "mace",
                [](std::istream &in) { return ReadCompetence(in); });
  const auto summary = AgreementStage(config, annotations, competence);
  const auto header = config.Header("agreement");
  StageWriter w;
  auto &txt = w.Open(L.agreement_txt());
  txt << HeaderComment(header) << "\n" << FormatAgreement(summary);
  auto &js = w.Open(L.agreement_jsonl());
  js << HeaderJson(header) << "\n";
  auto row = [](const std::string &set, const AgreementReport &r,
                std::size_t workers) {
    return json{{"set", set},           {"alpha", r.alpha},
                {"observed", r.observed}, {"expected", r.expected},
                {"items", r.items},     {"opinions", r.opinions},
                {"workers", workers},   {"degenerate", r.degenerate}};
  };
  js << row("all", summary.all, summary.all_workers).dump() << "\n";
  for (const auto &[t, rep, workers] : summary.filtered)
    js << row("competence>" + Str(t), rep, workers).dump() << "\n";
  w.Commit();
  return summary;
}

fs::path cmd_render(const PipelineConfig &config, const std::string &file_id,
                    const std::string &mode) {
  const Layout L{config.out};
  const auto files = LoadFiles(L, "render");
  auto fit = std::find_if(files.begin(), files.end(),
                          [&](const FileInfo &f) { return f.file_id == file_id; });
  if (fit == files.end())
    throw InputError("render: unknown file '" + file_id + "'");
  std::vector<EventInstance> truth, estimated;
  for (auto &e : LoadTruth(L, "render"))
    if (e.file_id == file_id) truth.push_back(std::move(e));
  for (auto &e : ReadInput(L.estimated(mode), "render", "aggregate",
                           [](std::istream &in) { return ReadEventJsonl(in); }))
    if (e.file_id == file_id) estimated.push_back(std::move(e));
  FrameOpinionCounts counts;
  bool have_counts = false;
  for (auto &c : ReadInput(L.counts(mode), "render", "aggregate",
                           [](std::istream &in) { return ReadFrameCounts(in); }))
    if (c.file_id == file_id) {
      counts = std::move(c);
      have_counts = true;
    }
  const auto path = L.render(mode, file_id);
  StageWriter w;
  w.Open(path) << render_timeline(file_id, fit->duration, truth, estimated,
                                  have_counts ? &counts : nullptr);
  w.Commit();
  return path;
}

void run_all(const PipelineConfig &config) {
  cmd_generate(config);
  cmd_campaign(config);
  cmd_simulate(config);
  cmd_mace(config);
  cmd_aggregate(config);
  cmd_evaluate(config);
  cmd_agreement(config);
  if (!config.modes.empty()) {
    const Layout L{config.out};
    for (const auto &f : LoadFiles(L, "render"))
      cmd_render(config, f.file_id, config.modes.back());
  }
}

ExternalScore ScoreEventLists(std::span<const EventInstance> reference,
                              std::span<const EventInstance> system,
                              double segment_length,
                              std::span<const IntersectionConfig> criteria) {
  std::map<std::string, double> durations;
  for (const auto *list : {&reference, &system})
    for (const auto &e : *list)
      durations[e.file_id] =
          std::max(durations[e.file_id], std::ceil(e.offset - 1e-9));
  std::vector<FileInfo> files;
  for (const auto &[file, d] : durations) files.push_back({file, d});
  ExternalScore score;
  score.segment = segment_metrics(files, reference, system, segment_length);
  for (const auto &c : criteria)
    score.intersection.emplace_back(c, intersection_f1(reference, system, c));
  return score;
}

std::string FormatExternalScore(const ExternalScore &score) {
  std::ostringstream os;
  const auto &s = score.segment;
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "segment-based (%gs): ER=%s S=%.4f D=%.4f I=%.4f "
                "F1=%.2f%% P=%.2f%% R=%.2f%%\n",
                s.segment_length, s.er_defined ? Fixed(s.er, 4).c_str() : "n/a",
                s.s_rate, s.d_rate, s.i_rate, s.prf.f1, s.prf.precision,
                s.prf.recall);
  os << buf;
  if (!s.note.empty()) os << "note: " << s.note << "\n";
  for (const auto &[c, rep] : score.intersection) {
    std::snprintf(buf, sizeof(buf),
                  "intersection (dtc=%g, gtc=%g): F1=%.2f%% (macro %.2f%%) "
                  "TP=%ld FP=%ld FN=%ld\n",
                  c.dtc, c.gtc, rep.f1, rep.macro_f1, rep.micro.tp,
                  rep.micro.fp, rep.micro.fn);
    os << buf;
  }
  return os.str();
}

}  // namespace strongcrowd
