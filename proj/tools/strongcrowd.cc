// tools/strongcrowd.cc

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

//
// Command-line front end.  Each subcommand runs one pipeline stage over an
// output directory; "run" chains them all.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "strongcrowd/errors.h"
#include "strongcrowd/event_io.h"
#include "strongcrowd/pipeline.h"
#include "strongcrowd/records.h"

namespace sc = strongcrowd;

namespace {

struct CommonOptions {
  std::string config_file;
  std::vector<std::string> sets;
  std::map<std::string, std::string> flags;
};

// Flags shared by all stage subcommands.  Values are kept as strings and
// routed through PipelineConfig::Set so they parse exactly like config files.
void AddCommon(CLI::App *cmd, CommonOptions &opts) {
  cmd->add_option("--config", opts.config_file,
                  "key=value config file (defaults to <out>/config.txt when "
                  "present, except for generate/run)");
  cmd->add_option("--set", opts.sets, "override one key, key=value")
      ->take_all();
  for (const char *key : {"seed", "out", "tau", "dtc", "gtc", "mode"}) {
    cmd->add_option_function<std::string>(
        std::string("--") + key,
        [&opts, key](const std::string &v) { opts.flags[key] = v; });
  }
  cmd->get_option("--mode")->check(CLI::IsMember({"all", "filtered", "mace"}));
  cmd->get_option("--seed")->description("top-level seed");
  cmd->get_option("--out")->description("output directory");
  cmd->get_option("--tau")->description("binarization threshold in (0,1]");
  cmd->get_option("--dtc")->description("detection tolerance, comma list");
  cmd->get_option("--gtc")->description("ground-truth tolerance, comma list");
  cmd->get_option("--mode")->description("restrict to one aggregation mode");
}

sc::PipelineConfig Resolve(const CommonOptions &opts, bool reuse_saved) {
  sc::PipelineConfig config;
  std::map<std::string, std::string> flags;
  for (const auto &[k, v] : opts.flags)
    if (k != "mode") flags[k] = v;
  for (const auto &s : opts.sets) {
    auto eq = s.find('=');
    if (eq == std::string::npos)
      throw sc::ConfigError("--set expects key=value, got '" + s + "'");
    flags[s.substr(0, eq)] = s.substr(eq + 1);
  }
  if (auto it = flags.find("out"); it != flags.end()) config.out = it->second;

  std::string file = opts.config_file;
  if (file.empty() && reuse_saved) {
    const auto saved = sc::Layout{config.out}.config();
    if (std::filesystem::exists(saved)) file = saved.string();
  }
  if (!file.empty()) {
    std::ifstream in(file);
    if (!in) throw sc::ConfigError("cannot open config file " + file);
    auto kv = sc::ReadKeyValues(in);
    kv.erase("out");
    config.Apply(kv);
  }
  config.Apply(flags);
  if (auto it = opts.flags.find("mode"); it != opts.flags.end())
    config.modes = {it->second};
  config.Validate();
  return config;
}

int Fail(const std::string &stage, const std::exception &e) {
  std::cerr << "strongcrowd " << stage << ": " << e.what() << "\n";
  return 1;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Strong labels from weak crowd annotations of sound events"};
  app.require_subcommand(1);

  std::map<std::string, CommonOptions> opts;
  std::map<std::string, CLI::App *> cmds;
  const std::vector<std::pair<std::string, std::string>> stages = {
      {"generate", "synthesize soundscapes with strong ground truth"},
      {"campaign", "split files into overlapping segments and assign workers"},
      {"simulate", "sample workers and simulate their tag answers"},
      {"ingest", "import an external annotation table"},
      {"mace", "estimate worker competence and tag posteriors"},
      {"aggregate", "stack opinions and estimate strong labels"},
      {"evaluate", "score estimates, or compare two event lists"},
      {"agreement", "inter-annotator agreement before/after filtering"},
      {"render", "draw a timeline figure for one file"},
      {"run", "run every stage in order"},
  };
  for (const auto &[name, help] : stages) {
    cmds[name] = app.add_subcommand(name, help);
    AddCommon(cmds[name], opts[name]);
  }

  std::string table, mapping_file;
  cmds["ingest"]->add_option("table", table, "CSV/TSV annotation table")
      ->required();
  cmds["ingest"]->add_option("--mapping", mapping_file,
                             "column mapping key=value file");

  std::string ref_file, sys_file;
  cmds["evaluate"]->add_option("reference", ref_file, "reference event list");
  cmds["evaluate"]->add_option("system", sys_file, "system event list");

  std::string render_file;
  cmds["render"]->add_option("--file", render_file, "file id")->required();

  CLI11_PARSE(app, argc, argv);

  for (const auto &[name, help] : stages) {
    if (!cmds[name]->parsed()) continue;
    try {
      const bool reuse = name != "generate" && name != "run";
      if (name == "evaluate" && !ref_file.empty()) {
        if (sys_file.empty())
          throw sc::InputError("evaluate expects both reference and system");
        auto config = Resolve(opts[name], false);
        const auto ref = sc::LoadEvents(ref_file);
        const auto sys = sc::LoadEvents(sys_file);
        auto score = sc::ScoreEventLists(ref, sys, config.segment_length,
                                         config.intersections);
        std::cout << sc::FormatExternalScore(score);
        return 0;
      }
      const auto config = Resolve(opts[name], reuse);
      if (name == "generate") sc::cmd_generate(config);
      else if (name == "campaign") sc::cmd_campaign(config);
      else if (name == "simulate") sc::cmd_simulate(config);
      else if (name == "ingest") {
        sc::ColumnMapping mapping;
        if (!mapping_file.empty()) {
          std::ifstream in(mapping_file);
          if (!in)
            throw sc::ConfigError("cannot open mapping file " + mapping_file);
          mapping = sc::ColumnMapping::FromKeyValues(sc::ReadKeyValues(in));
        }
        sc::cmd_ingest(config, table, mapping);
      } else if (name == "mace") sc::cmd_mace(config);
      else if (name == "aggregate") sc::cmd_aggregate(config);
      else if (name == "evaluate")
        std::cout << sc::FormatEvaluation(sc::cmd_evaluate(config));
      else if (name == "agreement")
        std::cout << sc::FormatAgreement(sc::cmd_agreement(config));
      else if (name == "render") {
        const std::string mode =
            opts[name].flags.count("mode") ? opts[name].flags["mode"] : "mace";
        std::cout << sc::cmd_render(config, render_file, mode).string() << "\n";
      } else if (name == "run") {
        sc::run_all(config);
        std::cout << sc::FormatEvaluation(sc::cmd_evaluate(config)) << "\n"
                  << sc::FormatAgreement(sc::cmd_agreement(config));
      }
      return 0;
    } catch (const std::exception &e) {
      return Fail(name, e);
    }
  }
  return 0;
}
